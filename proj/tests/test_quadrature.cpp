#include <doctest.h>

#include <cmath>
#include <numbers>

#include "deadleaves/quadrature.hpp"

using namespace deadleaves;

TEST_CASE("gauss-kronrod integrates smooth and kinked functions")
{
    const QuadratureConfig cfg;
    auto r = integrate([](double x) { return std::sin(x); }, 0, std::numbers::pi, cfg);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

    r = integrate([](double x) { return std::abs(x - 0.3); }, 0, 1, cfg, std::vector<double>{0.3});
    CHECK(r.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-12));

    // Integrable endpoint singularity, no breakpoint help.
    r = integrate([](double x) { return 1 / std::sqrt(x); }, 0, 1, cfg);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("reversed bounds flip the sign")
{
    const QuadratureConfig cfg;
    const double a = integrate([](double x) { return x * x; }, 0, 2, cfg).value;
    const double b = integrate([](double x) { return x * x; }, 2, 0, cfg).value;
    CHECK(a == doctest::Approx(8.0 / 3));
    CHECK(b == doctest::Approx(-a));
}

TEST_CASE("gauss-legendre is exact up to degree 2n-1")
{
    for (std::size_t n : {1u, 2u, 5u, 16u, 128u})
    {
        const auto nodes = gauss_legendre(n);
        REQUIRE(nodes.size() == n);
        const std::size_t deg = 2 * n - 1;
        double sum = 0;
        for (const GaussNode& g : nodes)
            sum += g.w * std::pow(g.x, double(deg - 1));
        // ∫_{-1}^{1} x^(deg-1) dx with deg - 1 even
        CHECK(sum == doctest::Approx(2.0 / double(deg)).epsilon(1e-12));
    }
}

TEST_CASE("power integrals")
{
    CHECK(power_integral(1, 2, 1) == doctest::Approx(1.5));
    CHECK(power_integral(1, std::exp(1.0), -1) == doctest::Approx(1.0));
    CHECK(power_integral(1, INFINITY, -2) == doctest::Approx(1.0));
    CHECK(std::isinf(power_integral(1, INFINITY, -1)));
    CHECK(std::isinf(power_integral(0, 1, -1.5)));
    CHECK(power_integral(0, 1, -0.5) == doctest::Approx(2.0));
    CHECK(power_integral(0.5, 0.5, 3) == 0.0);
}

TEST_CASE("invalid configurations are rejected")
{
    QuadratureConfig cfg;
    cfg.abs_tol = 0;
    cfg.rel_tol = 0;
    CHECK_THROWS(cfg.validate());
    CHECK_THROWS(integrate([](double) { return 1.0; }, 0, INFINITY, QuadratureConfig{}));
}
