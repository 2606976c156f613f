#include "deadleaves/covariogram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "deadleaves/csv.hpp"
#include "deadleaves/quadrature.hpp"

namespace deadleaves {
namespace {

constexpr double kPi = std::numbers::pi;

// Averages g(θ) over θ ∈ [0, period) with 128-point Gauss-Legendre.
template <class F>
double rotation_average(F&& g, double period)
{
    static const std::vector<GaussNode> nodes = gauss_legendre(128);
    double sum = 0;
    for (const GaussNode& n : nodes)
        sum += n.w * g(0.5 * period * (n.x + 1));
    return 0.5 * sum;
}

}  // namespace

Covariogram::Covariogram(Evaluator eval, double gamma0, double support_radius, DirectionalRate deriv0, bool isotropic,
                         CovariogramMethod method)
    : eval_(std::move(eval)),
      deriv0_(std::move(deriv0)),
      gamma0_(gamma0),
      support_radius_(support_radius),
      isotropic_(isotropic),
      method_(method)
{
    if (!(gamma0 > 0) || !(support_radius > 0))
        throw std::invalid_argument("covariogram needs positive gamma0 and support radius");
}

Covariogram Covariogram::analytic(const ShapeDistribution& dist)
{
    const Shape& base = dist.base();
    const double gamma0 = base.area();
    const double support = 2 * base.outer_radius();

    if (base.kind() == ShapeKind::disk)
    {
        const double r = base.radius();
        return Covariogram([r](Vec2 y) { return covariogram_disk(r, norm(y)); }, gamma0, support,
                           [r](Vec2) { return 2 * r; }, true, CovariogramMethod::analytic);
    }

    if (dist.rotation() == RotationLaw::fixed)
    {
        return Covariogram([base](Vec2 y) { return base.self_intersection_area(y); }, gamma0, support,
                           [base](Vec2 u) { return base.projection_width(u); }, false, CovariogramMethod::analytic);
    }

    // Uniform rotation: isotropic, and the directional derivative averages to
    // the mean projection width, perimeter / π for a convex body.
    const double mean_width = base.perimeter() / kPi;
    if (base.kind() == ShapeKind::rectangle)
    {
        const double w = base.width(), h = base.height();
        return Covariogram(
            [w, h](Vec2 y) {
                const double r = norm(y);
                return rotation_average(
                    [&](double t) { return covariogram_rectangle(w, h, {r * std::cos(t), r * std::sin(t)}); }, kPi);
            },
            gamma0, support, [mean_width](Vec2) { return mean_width; }, true, CovariogramMethod::analytic);
    }
    return Covariogram(
        [base](Vec2 y) {
            const double r = norm(y);
            // γ(y) = γ(-y), so half a turn covers every direction.
            return rotation_average(
                [&](double t) { return base.self_intersection_area({r * std::cos(t), r * std::sin(t)}); }, kPi);
        },
        gamma0, support, [mean_width](Vec2) { return mean_width; }, true, CovariogramMethod::analytic);
}

double Covariogram::operator()(Vec2 y) const
{
    if (norm(y) >= support_radius_)
        return 0.0;
    return std::clamp(eval_(y), 0.0, gamma0_);
}

double Covariogram::radial(double r, Vec2 direction) const
{
    const double len = norm(direction);
    return (*this)(direction * (r / len));
}

double Covariogram::deriv0(Vec2 direction) const
{
    return deriv0_(direction / norm(direction));
}

void Covariogram::write_csv(std::ostream& os, std::size_t n_angles, std::size_t n_radii) const
{
    if (n_angles == 0 || n_radii < 2)
        throw std::invalid_argument("covariogram CSV needs at least 1 angle and 2 radii");
    CsvWriter csv(os, {"angle", "radius", "value"});
    for (std::size_t i = 0; i < n_angles; ++i)
    {
        const double angle = kPi * static_cast<double>(i) / static_cast<double>(n_angles);
        const Vec2 dir{std::cos(angle), std::sin(angle)};
        for (std::size_t j = 0; j < n_radii; ++j)
        {
            const double r = support_radius_ * static_cast<double>(j) / static_cast<double>(n_radii - 1);
            csv.row({angle, r, radial(r, dir)});
        }
    }
}

double covariogram_disk(double radius, double y)
{
    if (!(radius > 0) || y < 0)
        throw std::invalid_argument("covariogram_disk: need radius > 0 and y >= 0");
    if (y >= 2 * radius)
        return 0.0;
    return 2 * radius * radius * std::acos(y / (2 * radius)) - 0.5 * y * std::sqrt(4 * radius * radius - y * y);
}

double covariogram_rectangle(double width, double height, Vec2 y)
{
    return std::max(0.0, width - std::abs(y.x)) * std::max(0.0, height - std::abs(y.y));
}

McEstimate covariogram_mc(const ShapeDistribution& dist, Vec2 y, std::size_t n_samples, Rng& rng)
{
    if (n_samples == 0)
        throw std::invalid_argument("covariogram_mc: n_samples must be >= 1");
    const double a2 = dist.outer_radius();
    if (norm(y) >= 2 * a2)
        return {0.0, 0.0};
    const double bounding_area = kPi * a2 * a2;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n_samples; ++i)
    {
        const Shape grain = dist.sample(rng);
        Vec2 z;
        do
        {
            z = {rng.uniform(-a2, a2), rng.uniform(-a2, a2)};
        } while (z.x * z.x + z.y * z.y > a2 * a2);
        if (grain.contains(z) && grain.contains(z - y))
            ++hits;
    }
    const double n = static_cast<double>(n_samples);
    const double frac = static_cast<double>(hits) / n;
    const double var = n > 1 ? frac * (1 - frac) * n / (n - 1) : 0.0;
    return {bounding_area * frac, bounding_area * std::sqrt(var / n)};
}

Covariogram tabulate_covariogram(const ShapeDistribution& dist, const TabulationGrid& grid, Rng& rng)
{
    if (grid.n_angles == 0 || grid.n_radii < 3 || grid.samples_per_node == 0)
        throw std::invalid_argument("tabulate_covariogram: degenerate grid");
    const double support = 2 * dist.outer_radius();
    const double gamma0 = dist.mean_area();
    const std::size_t na = grid.n_angles, nr = grid.n_radii;
    const double dr = support / static_cast<double>(nr - 1);

    auto table = std::make_shared<std::vector<double>>(na * nr, 0.0);
    for (std::size_t i = 0; i < na; ++i)
    {
        const double angle = kPi * static_cast<double>(i) / static_cast<double>(na);
        const Vec2 dir{std::cos(angle), std::sin(angle)};
        (*table)[i * nr] = gamma0;
        for (std::size_t j = 1; j + 1 < nr; ++j)
            (*table)[i * nr + j] = covariogram_mc(dist, dir * (dr * static_cast<double>(j)), grid.samples_per_node, rng).estimate;
    }

    auto lookup = [table, na, nr, dr, support](Vec2 y) {
        const double r = norm(y);
        if (r >= support)
            return 0.0;
        double angle = std::atan2(y.y, y.x);
        angle = std::fmod(angle + 2 * kPi, kPi);  // γ(y) = γ(-y)
        const double ai = angle / kPi * static_cast<double>(na);
        const auto i0 = static_cast<std::size_t>(ai) % na;
        const std::size_t i1 = (i0 + 1) % na;
        const double ta = ai - std::floor(ai);
        const double rj = r / dr;
        const auto j0 = std::min(static_cast<std::size_t>(rj), nr - 2);
        const double tr = rj - static_cast<double>(j0);
        auto at = [&](std::size_t i, std::size_t j) { return (*table)[i * nr + j]; };
        const double v0 = (1 - tr) * at(i0, j0) + tr * at(i0, j0 + 1);
        const double v1 = (1 - tr) * at(i1, j0) + tr * at(i1, j0 + 1);
        return (1 - ta) * v0 + ta * v1;
    };
    auto rate = [lookup, gamma0, dr](Vec2 u) { return (gamma0 - lookup(u * dr)) / dr; };
    return Covariogram(lookup, gamma0, support, rate, dist.isotropic(), CovariogramMethod::tabulated_mc);
}

Deriv0Estimate deriv0_estimate(const Covariogram& cov, std::span<const double> steps, Vec2 direction, double tolerance)
{
    if (steps.size() < 2)
        throw std::invalid_argument("deriv0_estimate: need at least two steps");
    for (std::size_t i = 0; i < steps.size(); ++i)
    {
        if (!(steps[i] > 0))
            throw std::invalid_argument("deriv0_estimate: steps must be positive");
        if (i > 0 && !(steps[i] < steps[i - 1]))
            throw std::invalid_argument("deriv0_estimate: steps must be strictly decreasing");
    }
    Deriv0Estimate out;
    const double g0 = cov.gamma0();
    for (double h : steps)
        out.slopes.push_back((g0 - cov.radial(h, direction)) / h);

    // Linear extrapolation of the slope to h = 0 from the two smallest steps.
    const std::size_t n = steps.size();
    const double h1 = steps[n - 2], h2 = steps[n - 1];
    const double d1 = out.slopes[n - 2], d2 = out.slopes[n - 1];
    out.rate = (h1 * d2 - h2 * d1) / (h1 - h2);

    const double scale = std::max(std::abs(out.rate), 1e-300);
    bool up = false, down = false;
    for (std::size_t i = 1; i < n; ++i)
    {
        const double diff = out.slopes[i] - out.slopes[i - 1];
        up = up || diff > tolerance * scale;
        down = down || diff < -tolerance * scale;
    }
    out.gamma2_violation_suspected = (up && down) || !std::isfinite(out.rate) || out.rate <= 0;
    return out;
}

}  // namespace deadleaves
