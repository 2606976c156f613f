#include "deadleaves/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace deadleaves {
namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Weights of the embedded 7-point Gauss rule at the odd Kronrod nodes.
constexpr std::array<double, 4> kGaussWeights = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                                 0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel
{
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Panel& o) const noexcept { return error < o.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (std::size_t i = 0; i < 7; ++i)
    {
        const double dx = half * kKronrodNodes[i];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[i] * sum;
        if (i % 2 == 1)
            gauss += kGaussWeights[i / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

void QuadratureConfig::validate() const
{
    if (!(abs_tol > 0) || !(rel_tol > 0))
        throw std::invalid_argument("quadrature tolerances must be positive");
    if (max_subdivisions == 0)
        throw std::invalid_argument("quadrature needs at least one subdivision");
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, const QuadratureConfig& config,
                           std::span<const double> breakpoints)
{
    QuadratureResult result;
    if (a == b)
    {
        result.converged = true;
        return result;
    }
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("integrate: bounds must be finite; substitute first");
    double sign = 1;
    if (b < a)
    {
        std::swap(a, b);
        sign = -1;
    }

    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b)
            cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Panel> panels;
    double total = 0, total_error = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    {
        Panel p = gauss_kronrod(f, cuts[i], cuts[i + 1]);
        total += p.value;
        total_error += p.error;
        panels.push(p);
    }

    const double min_width = 64 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
    std::size_t count = panels.size();
    std::vector<Panel> unsplittable;
    while (total_error > std::max(config.abs_tol, config.rel_tol * std::abs(total)) && count < config.max_subdivisions
           && !panels.empty())
    {
        Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a <= min_width)
        {
            unsplittable.push_back(worst);
            continue;
        }
        Panel left = gauss_kronrod(f, worst.a, mid);
        Panel right = gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++count;
    }

    // Re-sum from the panels to shed accumulated rounding in the running totals.
    double value = 0, error = 0;
    for (const Panel& p : unsplittable)
    {
        value += p.value;
        error += p.error;
    }
    while (!panels.empty())
    {
        value += panels.top().value;
        error += panels.top().error;
        panels.pop();
    }
    result.value = sign * value;
    result.error = error;
    result.intervals = count;
    result.converged = error <= std::max(config.abs_tol, config.rel_tol * std::abs(value));
    return result;
}

std::vector<GaussNode> gauss_legendre(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("gauss_legendre: n must be positive");
    std::vector<GaussNode> nodes(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i)
    {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double derivative = 1;
        for (int iter = 0; iter < 100; ++iter)
        {
            double p0 = 1, p1 = x;
            for (std::size_t k = 2; k <= n; ++k)
            {
                const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            derivative = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1);
            const double step = p1 / derivative;
            x -= step;
            if (std::abs(step) < 1e-16)
                break;
        }
        const double w = 2 / ((1 - x * x) * derivative * derivative);
        nodes[i] = {-x, w};
        nodes[n - 1 - i] = {x, w};
    }
    return nodes;
}

double power_integral(double lo, double hi, double k, double snap)
{
    if (!(lo >= 0) || !(hi >= lo))
        throw std::invalid_argument("power_integral: need 0 <= lo <= hi");
    if (lo == hi)
        return 0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (std::abs(k + 1) <= snap)
    {
        if (lo == 0 || std::isinf(hi))
            return inf;
        return std::log(hi / lo);
    }
    const double e = k + 1;
    if (e > 0)
    {
        if (std::isinf(hi))
            return inf;
        return (std::pow(hi, e) - std::pow(lo, e)) / e;
    }
    // e < 0: converges at infinity, diverges at 0.
    if (lo == 0)
        return inf;
    const double upper = std::isinf(hi) ? 0.0 : std::pow(hi, e);
    return (std::pow(lo, e) - upper) / (-e);
}

}  // namespace deadleaves
