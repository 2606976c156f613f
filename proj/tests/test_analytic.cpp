#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "deadleaves/analytic.hpp"
#include "support.hpp"

using namespace deadleaves;

namespace {

constexpr double kPi = std::numbers::pi;

ModelSpec disk_model(double alpha, double r0, double r1, double radius = 1)
{
    return ModelSpec::make(ShapeDistribution::disk(radius), SizeLaw(alpha, r0, r1));
}

double unit_disk_gamma(double r)
{
    return covariogram_disk(1, r);
}

// 2 (3 - α)/γ0 ∫_0^∞ (γ0 - γ̃(v)) v^(α-4) dv, midpoint in log v on [1e-14, 2]
// plus the closed-form tail beyond the support. On [0, ε] γ0 - γ̃(v) ≈ 2v.
double small_scale_constant(double alpha)
{
    const double g0 = kPi;
    const double head = testing::midpoint(
        [&](double t) {
            const double v = std::exp(t);
            return (g0 - unit_disk_gamma(v)) * std::pow(v, alpha - 3);
        },
        std::log(1e-14), std::log(2.0), 2000000);
    const double tail = g0 * std::pow(2.0, alpha - 3) / (3 - alpha);
    const double near = 2 * std::pow(1e-14, alpha - 2) / (alpha - 2);
    return 2 * (3 - alpha) / g0 * (near + head + tail);
}

}  // namespace

TEST_CASE("size law")
{
    const SizeLaw law(2.5, 0.5, 8);
    const double eta = law.normalizer();
    CHECK(eta == doctest::Approx(1.5 / (std::pow(0.5, -1.5) - std::pow(8.0, -1.5))));
    const double mass = testing::midpoint([&](double r) { return law.density(r); }, 0.5, 8, 200000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(law.density(0.4) == 0.0);
    CHECK(law.density(9) == 0.0);

    CHECK_THROWS_AS(SizeLaw(1.0, 0.5, 8), ParameterError);
    CHECK_THROWS_AS(SizeLaw(2.5, 1, 1), ParameterError);
    CHECK_THROWS_AS(SizeLaw(2.5, -1, 1), ParameterError);
    CHECK_THROWS_AS(SizeLaw(2.5, 1, kInfinity), ParameterError);
    CHECK_NOTHROW(SizeLaw(3.5, 1, kInfinity));
    CHECK(SizeLaw(3.5, 0, 1).degenerate_white_noise());
    CHECK_FALSE(SizeLaw(2.5, 0, 1).degenerate_white_noise());

    for (double a : {1.5, 3.0, 3.5})
    {
        const SizeLaw l(a, 0.7, 5);
        for (double u : {0.7, 1.3, 4.9})
            CHECK(l.kernel_inverse(l.kernel_antiderivative(u)) == doctest::Approx(u).epsilon(1e-12));
    }
}

TEST_CASE("size law sampling follows the power law")
{
    const SizeLaw law(2.5, 0.5, 8);
    Rng rng(3);
    std::vector<double> observed(16, 0), expected(16, 0);
    const std::size_t n = 200000;
    const double lo = std::log(0.5), step = (std::log(8.0) - lo) / 16;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double r = law.sample(rng);
        REQUIRE(r >= 0.5);
        REQUIRE(r <= 8);
        observed[std::min<std::size_t>(15, std::size_t((std::log(r) - lo) / step))] += 1;
    }
    const auto cdf = [](double r) { return (std::pow(0.5, -1.5) - std::pow(r, -1.5)) / (std::pow(0.5, -1.5) - std::pow(8.0, -1.5)); };
    for (int k = 0; k < 16; ++k)
        expected[k] = n * (cdf(std::exp(lo + (k + 1) * step)) - cdf(std::exp(lo + k * step)));
    CHECK(testing::chi_square_p(observed, expected) > 0.001);
}

TEST_CASE("two-point examples for the unit disk")
{
    const ModelSpec m = disk_model(2.5, 0.5, 8);
    const std::vector<double> lags{1, 2, 4, 8, 16};
    const std::vector<double> expect{0.5355, 0.3300, 0.1581, 0.0398, 0.0};
    for (std::size_t i = 0; i < lags.size(); ++i)
        CHECK(std::abs(two_point_p(m, {lags[i], 0}) - expect[i]) < 5e-4);
    CHECK(two_point_p(m, {0, 0}) == 1.0);
    CHECK(two_point_p(m, {16.5, 0}) == 0.0);
}

TEST_CASE("two-point probability against a Riemann oracle with r0 = 0")
{
    // p = N / (2 W - N): N on a log grid over the numerator support [x/2, 1],
    // W = γ0 / (3 - α) in closed form.
    const double alpha = 2.5, x = 0.01;
    const double n = testing::midpoint(
        [&](double t) {
            const double u = std::exp(t);
            return unit_disk_gamma(x / u) * std::pow(u, 3 - alpha);
        },
        std::log(x / 2), 0.0, 2000000);
    const double w = kPi / (3 - alpha);
    const double oracle = n / (2 * w - n);
    const double p = two_point_p(disk_model(alpha, 0, 1), {x, 0});
    CHECK(p == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("two-point probability against a Riemann oracle on random parameters")
{
    Rng rng(2024);
    for (int i = 0; i < 20; ++i)
    {
        const double alpha = rng.uniform(1.2, 3.8);
        const double r0 = rng.uniform(0.1, 1.0);
        const double r1 = r0 * rng.uniform(2, 50);
        const double x = rng.uniform(0.05, 3.0);
        const double oracle = testing::brute_two_point_p(unit_disk_gamma, kPi, alpha, r0, r1, x);
        const double p = two_point_p(disk_model(alpha, r0, r1), {x, 0});
        CAPTURE(alpha);
        CAPTURE(r0);
        CAPTURE(r1);
        CAPTURE(x);
        CHECK(p == doctest::Approx(oracle).epsilon(1e-6));
    }
}

TEST_CASE("two-point range, symmetry and scaling")
{
    const ModelSpec rect = ModelSpec::make(ShapeDistribution::rectangle(2, 1, RotationLaw::fixed, 0.4),
                                           SizeLaw(2.2, 0.3, 6));
    for (int i = -6; i <= 6; ++i)
        for (int j = -6; j <= 6; ++j)
        {
            const Vec2 x{0.9 * i, 0.7 * j};
            const double p = two_point_p(rect, x);
            CHECK(p >= 0);
            CHECK(p <= 1);
            CHECK(p == doctest::Approx(two_point_p(rect, -x)).epsilon(1e-10));
        }

    for (double alpha : {1.5, 2.0, 2.5, 2.9})
        for (double r1 : {3.0, 40.0})
            for (double x : {0.01, 0.3, 1.7})
            {
                const double a = two_point_p(disk_model(alpha, 0, r1), {x * r1, 0});
                const double b = two_point_p(disk_model(alpha, 0, 1), {x, 0});
                CHECK(a == doctest::Approx(b).epsilon(1e-9));
            }

    // The complement agrees with 1 - p where both are well conditioned.
    const ModelSpec m = disk_model(2.5, 0, 1);
    CHECK(two_point_p_complement(m, {0.2, 0}) == doctest::Approx(1 - two_point_p(m, {0.2, 0})).epsilon(1e-10));
    CHECK(two_point_p_complement(m, {1e-10, 0}) > 0);
}

TEST_CASE("white-noise limit is refused except for the indicator")
{
    const ModelSpec m = disk_model(3.5, 0, 1);
    CHECK(two_point_p(m, {0, 0}) == 1.0);
    CHECK(two_point_p(m, {1e-6, 0}) == 0.0);
    CHECK_THROWS_AS(two_point_integrals(m, {1, 0}), ParameterError);
    CHECK_THROWS_AS(q_functional(m, DiskCompact{0.5}), ParameterError);
    CHECK(two_point_p(disk_model(3.0, 0, 1), {0.5, 0}) == 0.0);
}

TEST_CASE("large-scale regime is an exact power law beyond the support")
{
    for (double alpha : {3.2, 3.5, 4.5})
    {
        const ModelSpec m = disk_model(alpha, 1, kInfinity);
        const AsymptoticConstant c = asymptotic_constant(m);
        CHECK(c.regime == AsymptoticRegime::large_scale);
        CHECK(c.exponent == doctest::Approx(3 - alpha));
        CHECK(c.g > 0);
        for (double x : {2.5, 100.0, 1e3})
        {
            // For x >= 2 r0 every grain covering both points is larger than r0,
            // so p = a / (1 - a) with a = g x^(3-α) exactly.
            const double a = c.g * std::pow(x, 3 - alpha);
            CHECK(two_point_p(m, {x, 0}) == doctest::Approx(a / (1 - a)).epsilon(1e-7));
        }
        const double far = 1e6;
        CHECK(two_point_p(m, {far, 0}) / (c.g * std::pow(far, 3 - alpha)) == doctest::Approx(1).epsilon(0.05));
    }
    const AsymptoticConstant c = asymptotic_constant(disk_model(3.2, 1, kInfinity));
    CHECK(c.g == doctest::Approx(0.46112).epsilon(1e-4));
}

TEST_CASE("small-scale constant against an independent integral")
{
    for (double alpha : {2.2, 2.5, 2.8})
    {
        const AsymptoticConstant c = asymptotic_constant(disk_model(alpha, 0, 1));
        CHECK(c.regime == AsymptoticRegime::small_scale);
        CHECK(c.reference == "r1");
        CHECK(c.g == doctest::Approx(small_scale_constant(alpha)).epsilon(1e-5));
    }
    const ModelSpec m = disk_model(2.5, 0, 1);
    const double g = asymptotic_constant(m).g;
    CHECK(g == doctest::Approx(3.14757).epsilon(1e-5));
    // Approach from below: the ratio rises toward g as x shrinks.
    double prev = 0;
    for (double x : {1e-2, 1e-3, 1e-4, 1e-6, 1e-8})
    {
        const double ratio = two_point_p_complement(m, {x, 0}) * std::pow(x, -0.5);
        CHECK(ratio > prev);
        CHECK(ratio < g);
        prev = ratio;
    }
    CHECK(prev == doctest::Approx(g).epsilon(1e-3));
}

TEST_CASE("linear and log-linear regimes")
{
    const AsymptoticConstant lin = asymptotic_constant(disk_model(1.5, 0, 1));
    CHECK(lin.regime == AsymptoticRegime::linear);
    CHECK(lin.g == doctest::Approx(6 / (0.5 * kPi)).epsilon(1e-10));
    CHECK(lin.g == doctest::Approx(3.8197).epsilon(1e-4));
    const double h = 1e-6;
    const double slope = two_point_p_complement(disk_model(1.5, 0, 1), {h, 0}) / h;
    CHECK(slope == doctest::Approx(lin.g).epsilon(1e-3));

    const AsymptoticConstant lg = asymptotic_constant(disk_model(2.0, 0, 1));
    CHECK(lg.regime == AsymptoticRegime::log_linear);
    CHECK(lg.g == doctest::Approx(4 / kPi).epsilon(1e-10));
    // Relative correction decays like 1 / log(1/x).
    double prev_err = 1;
    for (double x : {1e-3, 1e-6, 1e-12})
    {
        const double ratio = two_point_p_complement(disk_model(2.0, 0, 1), {x, 0}) / (x * std::log(1 / x));
        const double err = std::abs(ratio / lg.g - 1);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 0.1);

    CHECK_THROWS(asymptotic_constant(disk_model(3.0, 1, 10)));

    // α > 3, positive tail integral.
    const AsymptoticConstant big = asymptotic_constant(disk_model(3.5, 1, kInfinity));
    CHECK(std::isfinite(big.g));
    CHECK(big.g > 0);
}

TEST_CASE("Q of points and disks")
{
    const ModelSpec m = disk_model(2.5, 0.5, 8);
    CHECK(q_functional(m, PointSet{{{3, 4}}}) == 1.0);
    CHECK(q_functional(m, PointSet{{{0, 0}, {2, 0}}}) == doctest::Approx(two_point_p(m, {2, 0})));
    CHECK_THROWS_AS(q_functional(m, PointSet{{{0, 0}, {1, 0}, {0, 1}}}), UnsupportedCompact);

    double prev = 1;
    for (double rho : {0.05, 0.2, 0.5, 1.0, 2.0, 4.0})
    {
        const double q = q_functional(m, DiskCompact{rho});
        CHECK(q < prev);
        CHECK(q >= 0);
        // A disk in one part contains two points at distance 2ρ.
        CHECK(q <= two_point_p(m, {2 * rho, 0}) + 1e-12);
        prev = q;
    }
    CHECK(q_functional(m, DiskCompact{8}) == 0.0);

    // Smaller leaves make a fixed disk less likely to fit in one part.
    double q_prev = 1;
    for (double r0 : {1.0, 0.5, 0.25, 0.1})
    {
        const double q = q_functional(disk_model(2.5, r0, 8), DiskCompact{0.3});
        CHECK(q < q_prev);
        q_prev = q;
    }
}

TEST_CASE("Q^n identities")
{
    const ModelSpec m = disk_model(2.5, 0.5, 8);
    McConfig mc;
    mc.strata = 64;
    mc.samples_per_stratum = 2048;
    for (double lag : {0.5, 1.0, 2.0, 4.0, 8.0})
    {
        const PointSet a{{{0, 0}}}, b{{{lag, 0}}};
        const std::vector<PointSet> ab{a, b}, ba{b, a};
        const QnResult f = q_n_functional(m, ab, mc);
        mc.seed += 1;
        const QnResult r = q_n_functional(m, ba, mc);
        mc.seed += 1;
        const double p = two_point_p(m, {lag, 0});
        const double se = std::hypot(f.std_error, r.std_error);
        CAPTURE(lag);
        CHECK(std::abs(f.value + r.value + p - 1) < 4 * se + 1e-9);
        CHECK(f.numerator <= f.denominator);
        for (std::size_t j = 0; j < f.numerator_terms.size(); ++j)
            CHECK(f.numerator_terms[j] <= f.denominator_terms[j] * (1 + 1e-12));

        const std::vector<PointSet> pair{PointSet{{{0, 0}, {lag, 0}}}};
        const QnResult one = q_n_functional(m, pair, mc);
        mc.seed += 1;
        CHECK(std::abs(one.value - p) < 4 * one.std_error + 1e-9);
    }

    // Beyond the largest grain the two points are never covered together.
    const std::vector<PointSet> far{PointSet{{{0, 0}}}, PointSet{{{20, 0}}}};
    const QnResult q = q_n_functional(m, far, mc);
    CHECK(two_point_p(m, {20, 0}) == 0.0);
    CHECK(std::abs(q.value - 0.5) < 4 * q.std_error + 1e-9);
}

TEST_CASE("degenerate limit trends")
{
    const ShapeDistribution disk = ShapeDistribution::disk(1);

    const std::vector<std::pair<double, double>> grow{{1, 10}, {1, 1e2}, {1, 1e3}, {1, 1e4}};
    TrendReport t = degenerate_limit_check(disk, 2.5, grow, 1);
    CHECK(t.regime == DegenerateRegime::constant_field);
    CHECK(t.target == 1.0);
    CHECK(t.monotone);
    CHECK(t.final_metric > 0.98);
    const std::vector<std::pair<double, double>> further{{1, 1e4}, {1, 1e6}};
    CHECK(degenerate_limit_check(disk, 2.5, further, 1).final_metric >= 0.99);

    const std::vector<std::pair<double, double>> shrink{{1, kInfinity}, {0.1, kInfinity}, {0.01, kInfinity}};
    t = degenerate_limit_check(disk, 3.5, shrink, 1);
    CHECK(t.regime == DegenerateRegime::white_noise);
    CHECK(t.target == 0.0);
    CHECK(t.monotone);
    CHECK(t.final_metric < t.points.front().metric);

    std::vector<std::pair<double, double>> log_schedule;
    for (double r1 : {1e2, 1e3, 1e4, 1e5, 1e6})
        log_schedule.emplace_back(1 / r1, r1);
    t = degenerate_limit_check(disk, 3.0, log_schedule, 1);
    CHECK(t.regime == DegenerateRegime::log_ratio);
    CHECK(t.monotone);
    for (const TrendPoint& pt : t.points)
        CHECK(pt.metric == doctest::Approx(3 * pt.p));

    const std::vector<std::pair<double, double>> unordered{{1, 1e3}, {1, 10}};
    CHECK_THROWS(degenerate_limit_check(disk, 2.5, unordered, 1));
}
