#include "deadleaves/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace deadleaves {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAlphaSnap = 1e-9;

void require_evaluable(const SizeLaw& law)
{
    if (law.degenerate_white_noise())
        throw ParameterError("r0 = 0 with alpha >= 3 is the degenerate white-noise limit: only p(0, r1, x) = 1(x = 0) "
                             "is defined");
}

// Breakpoints of the w = T(u) axis at u = lo 2^k, k >= 1, below hi.
std::vector<double> octave_breakpoints(const SizeLaw& law, double lo, double hi)
{
    std::vector<double> cuts;
    double u = lo;
    for (int k = 0; k < 80; ++k)
    {
        u *= 2;
        if (!(u < hi))
            break;
        cuts.push_back(law.kernel_antiderivative(u));
    }
    return cuts;
}

struct Moments
{
    double sum_a = 0, sum_b = 0, sum_aa = 0, sum_bb = 0, sum_ab = 0;
};

}  // namespace

TwoPointIntegrals two_point_integrals(const ModelSpec& model, Vec2 x, const QuadratureConfig& quad)
{
    quad.validate();
    const SizeLaw& law = model.size;
    require_evaluable(law);
    const Covariogram& cov = model.covariogram;
    const double g0 = cov.gamma0();
    const double total = power_integral(law.r0(), law.r1(), 2 - law.alpha(), quad.log_kernel_snap);
    const double s = norm(x);
    if (s == 0)
        return {g0 * total, 0.0};

    // γ̃(x/u) vanishes for u <= |x| / (2 a2).
    const double lo = std::max(law.r0(), s / cov.support_radius());
    const double w_r0 = law.r0() == 0 ? 0.0 : law.kernel_antiderivative(law.r0());
    if (lo >= law.r1())
        return {0.0, g0 * total};

    const double w_lo = law.kernel_antiderivative(lo);
    const double w_hi = law.kernel_antiderivative(law.r1());
    const std::vector<double> cuts = octave_breakpoints(law, lo, law.r1());

    auto gamma_at = [&](double w) { return cov(x / law.kernel_inverse(w)); };
    const QuadratureResult same = integrate(gamma_at, w_lo, w_hi, quad, cuts);
    const QuadratureResult deficit = integrate([&](double w) { return g0 - gamma_at(w); }, w_lo, w_hi, quad, cuts);
    return {same.value, g0 * (w_lo - w_r0) + deficit.value};
}

double two_point_p(const ModelSpec& model, Vec2 x, const QuadratureConfig& quad)
{
    if (model.size.degenerate_white_noise())
        return norm(x) == 0 ? 1.0 : 0.0;
    if (norm(x) == 0)
        return 1.0;
    const TwoPointIntegrals t = two_point_integrals(model, x, quad);
    return std::clamp(t.same_part / (t.same_part + 2 * t.deficit), 0.0, 1.0);
}

double two_point_p_complement(const ModelSpec& model, Vec2 x, const QuadratureConfig& quad)
{
    if (model.size.degenerate_white_noise())
        return norm(x) == 0 ? 0.0 : 1.0;
    if (norm(x) == 0)
        return 0.0;
    const TwoPointIntegrals t = two_point_integrals(model, x, quad);
    return std::clamp(2 * t.deficit / (t.same_part + 2 * t.deficit), 0.0, 1.0);
}

double q_functional(const ModelSpec& model, const Compact& compact, const QuadratureConfig& quad)
{
    quad.validate();
    if (const auto* points = std::get_if<PointSet>(&compact))
    {
        const auto& pts = points->points;
        if (pts.empty())
            throw UnsupportedCompact("q_functional: compact must be non-empty");
        if (pts.size() == 1)
            return 1.0;
        if (pts.size() == 2)
            return two_point_p(model, pts[1] - pts[0], quad);
        throw UnsupportedCompact("q_functional: point sets with more than two points are not supported; use "
                                 "q_n_functional with n = 1");
    }

    const double rho = std::get<DiskCompact>(compact).radius;
    if (!(rho >= 0))
        throw UnsupportedCompact("q_functional: disk radius must be >= 0");
    if (rho == 0)
        return 1.0;
    const SizeLaw& law = model.size;
    require_evaluable(law);
    const Shape& grain = model.shape.base();
    const double a = law.alpha(), snap = quad.log_kernel_snap;

    // Steiner formula for the dilation, integrated against u^(-α).
    const double i2 = power_integral(law.r0(), law.r1(), 2 - a, snap);
    const double i1 = power_integral(law.r0(), law.r1(), 1 - a, snap);
    const double i0 = power_integral(law.r0(), law.r1(), -a, snap);
    const double dilated = grain.area() * i2 + grain.perimeter() * rho * i1 + kPi * rho * rho * i0;
    if (std::isinf(dilated))
        return 0.0;

    // Erosion of u Y by D(rho) is empty once rho / u >= a2.
    const double lo = std::max(law.r0(), rho / grain.outer_radius());
    if (lo >= law.r1())
        return 0.0;
    const double w_lo = law.kernel_antiderivative(lo);
    const double w_hi = law.kernel_antiderivative(law.r1());
    // Rotations preserve eroded areas, so the base shape stands in for Y.
    const QuadratureResult eroded = integrate(
        [&](double w) { return grain.eroded_area(rho / law.kernel_inverse(w)); }, w_lo, w_hi, quad,
        octave_breakpoints(law, lo, law.r1()));
    return std::clamp(eroded.value / dilated, 0.0, 1.0);
}

QnResult q_n_functional(const ModelSpec& model, std::span<const PointSet> compacts, const McConfig& mc)
{
    if (compacts.empty())
        throw UnsupportedCompact("q_n_functional: need at least one compact");
    for (const PointSet& k : compacts)
        if (k.points.empty())
            throw UnsupportedCompact("q_n_functional: compacts must be non-empty");
    if (mc.strata == 0 || mc.samples_per_stratum < 2)
        throw std::invalid_argument("q_n_functional: need >= 1 stratum and >= 2 samples per stratum");
    const SizeLaw& law = model.size;
    require_evaluable(law);

    const double w_min = law.r0() == 0 ? 0.0 : law.kernel_antiderivative(law.r0());
    const double w_max = law.kernel_antiderivative(law.r1());
    const double stratum = (w_max - w_min) / static_cast<double>(mc.strata);
    const double a2 = model.shape.outer_radius();
    const double m = static_cast<double>(mc.samples_per_stratum);

    QnResult out;
    out.numerator = 1;
    out.denominator = 1;
    double log_var = 0;
    std::vector<Vec2> running;  // underline K_{j-1}
    std::vector<Vec2> scaled_new, scaled_old;

    for (std::size_t j = 0; j < compacts.size(); ++j)
    {
        const std::vector<Vec2>& fresh = compacts[j].points;
        Rng rng(derive_seed(mc.seed, j));
        double est_a = 0, est_b = 0, var_a = 0, var_b = 0, cov_ab = 0;

        for (std::size_t s = 0; s < mc.strata; ++s)
        {
            Moments mom;
            for (std::size_t i = 0; i < mc.samples_per_stratum; ++i)
            {
                const double w = w_min + stratum * (static_cast<double>(s) + rng.uniform());
                const double u = law.kernel_inverse(w);
                const Shape grain = model.shape.sample(rng);

                // Unit-scale picture: the grain Y against K / u.
                scaled_new.clear();
                scaled_old.clear();
                Box box{{kInfinity, kInfinity}, {-kInfinity, -kInfinity}};
                auto extend = [&box](Vec2 p) {
                    box.lo = {std::min(box.lo.x, p.x), std::min(box.lo.y, p.y)};
                    box.hi = {std::max(box.hi.x, p.x), std::max(box.hi.y, p.y)};
                };
                for (Vec2 p : fresh)
                {
                    scaled_new.push_back(p / u);
                    extend(p / u);
                }
                for (Vec2 p : running)
                {
                    scaled_old.push_back(p / u);
                    extend(p / u);
                }
                const Vec2 c{rng.uniform(box.lo.x - a2, box.hi.x + a2), rng.uniform(box.lo.y - a2, box.hi.y + a2)};
                const double box_area = (box.width() + 2 * a2) * (box.height() + 2 * a2);

                // Leaf c + Y contains K_j, misses underline K_{j-1}; it hits underline K_j.
                bool all_new = true, any_new = false, any_old = false;
                for (Vec2 p : scaled_new)
                {
                    const bool in = grain.contains(p - c);
                    all_new = all_new && in;
                    any_new = any_new || in;
                }
                for (Vec2 p : scaled_old)
                    any_old = any_old || grain.contains(p - c);

                const double a = (all_new && !any_old) ? box_area : 0.0;
                const double b = (any_new || any_old) ? box_area : 0.0;
                mom.sum_a += a;
                mom.sum_b += b;
                mom.sum_aa += a * a;
                mom.sum_bb += b * b;
                mom.sum_ab += a * b;
            }
            const double mean_a = mom.sum_a / m, mean_b = mom.sum_b / m;
            est_a += stratum * mean_a;
            est_b += stratum * mean_b;
            const double scale = stratum * stratum / (m * (m - 1));
            var_a += scale * (mom.sum_aa - m * mean_a * mean_a);
            var_b += scale * (mom.sum_bb - m * mean_b * mean_b);
            cov_ab += scale * (mom.sum_ab - m * mean_a * mean_b);
        }

        out.numerator_terms.push_back(est_a);
        out.denominator_terms.push_back(est_b);
        out.numerator *= est_a;
        out.denominator *= est_b;
        if (est_a > 0)
            log_var += var_a / (est_a * est_a) + var_b / (est_b * est_b) - 2 * cov_ab / (est_a * est_b);
        running.insert(running.end(), fresh.begin(), fresh.end());
    }

    if (!(out.denominator > 0))
        throw std::logic_error("q_n_functional: vanishing denominator for non-empty compacts");
    out.value = out.numerator / out.denominator;
    out.std_error = out.value * std::sqrt(std::max(0.0, log_var));
    return out;
}

AsymptoticConstant asymptotic_constant(const ModelSpec& model, const QuadratureConfig& quad, Vec2 direction)
{
    quad.validate();
    const double a = model.size.alpha();
    const Covariogram& cov = model.covariogram;
    const double g0 = cov.gamma0();
    const double support = cov.support_radius();
    const Vec2 dir = direction / norm(direction);
    if (!(a > 1))
        throw ParameterError("asymptotic constant: alpha must be > 1");

    if (std::abs(a - 3) <= kAlphaSnap)
        throw ParameterError("asymptotic constant: alpha = 3 has no power-law expansion (see the log-ratio limit)");

    if (a > 3)
    {
        // ∫_{1/(2a2)}^∞ γ̃(1/v) v^(2-α) dv with w = v^(3-α) / (3-α), which maps the tail to (w0, 0].
        const SizeLaw kernel(a, 1.0 / support, kInfinity);
        const double w0 = kernel.kernel_antiderivative(1.0 / support);
        const QuadratureResult r = integrate([&](double w) { return cov(dir / kernel.kernel_inverse(w)); }, w0, 0.0,
                                             quad, octave_breakpoints(kernel, 1.0 / support, kInfinity));
        return {AsymptoticRegime::large_scale, (a - 3) / (2 * g0) * r.value, 3 - a, "r0"};
    }
    if (a > 2 + kAlphaSnap)
    {
        // γ̃(1/v) = 0 below v = 1/(2a2); above it substitute w = v^(2-α), under
        // which (γ̃(0) - γ̃(1/v)) v stays bounded as v → ∞.
        const double v0 = 1.0 / support;
        const double head = g0 * std::pow(v0, 3 - a) / (3 - a);
        const double w0 = std::pow(v0, 2 - a);
        std::vector<double> cuts;
        for (double v = 2 * v0; cuts.size() < 80; v *= 2)
            cuts.push_back(std::pow(v, 2 - a));
        const QuadratureResult tail = integrate(
            [&](double w) {
                const double v = w > 0 ? std::pow(w, 1 / (2 - a)) : kInfinity;
                // γ̃(0) - γ̃(1/v) cancels to nothing in double precision out here.
                if (v * support > 1e7)
                    return cov.deriv0(dir) / (a - 2);
                return (g0 - cov(dir / v)) * v / (a - 2);
            },
            0.0, w0, quad, cuts);
        return {AsymptoticRegime::small_scale, 2 * (3 - a) / g0 * (head + tail.value), 3 - a, "r1"};
    }
    const double rate = cov.deriv0(dir);
    if (std::abs(a - 2) <= kAlphaSnap)
        return {AsymptoticRegime::log_linear, 2 * rate / g0, 1.0, "r1"};
    // The closed form carries a factor 1/(α - 2) < 0 here; the expansion of
    // 1 - p is positive, so the magnitude is reported.
    return {AsymptoticRegime::linear, std::abs(2 * (3 - a) * rate / ((a - 2) * g0)), 1.0, "r1"};
}

TrendReport degenerate_limit_check(const ShapeDistribution& shape, double alpha,
                                   std::span<const std::pair<double, double>> schedule, double x,
                                   const QuadratureConfig& quad)
{
    if (schedule.empty())
        throw std::invalid_argument("degenerate_limit_check: empty schedule");
    if (!(x > 0))
        throw std::invalid_argument("degenerate_limit_check: x must be positive");
    TrendReport report;
    if (std::abs(alpha - 3) <= kAlphaSnap)
    {
        report.regime = DegenerateRegime::log_ratio;
        report.target = 1.0;
    }
    else if (alpha > 3)
    {
        report.regime = DegenerateRegime::white_noise;
        report.target = 0.0;
    }
    else if (alpha > 1)
    {
        report.regime = DegenerateRegime::constant_field;
        report.target = 1.0;
    }
    else
        throw ParameterError("degenerate_limit_check: alpha must be > 1");

    for (std::size_t i = 1; i < schedule.size(); ++i)
    {
        const auto [r0_prev, r1_prev] = schedule[i - 1];
        const auto [r0, r1] = schedule[i];
        const bool ok = report.regime == DegenerateRegime::constant_field ? r1 > r1_prev
                        : report.regime == DegenerateRegime::white_noise  ? r0 < r0_prev
                                                                           : (r1 > r1_prev && r0 <= r0_prev);
        if (!ok)
            throw std::invalid_argument("degenerate_limit_check: schedule is not monotone toward the limit");
    }

    const Covariogram cov = Covariogram::analytic(shape);
    for (const auto& [r0, r1] : schedule)
    {
        const ModelSpec model(shape, SizeLaw(alpha, r0, r1), cov);
        TrendPoint pt{r0, r1, two_point_p(model, {x, 0}, quad), 0};
        pt.metric = report.regime == DegenerateRegime::log_ratio ? pt.p * (1 - 2 * std::log(r0) / std::log(r1)) : pt.p;
        report.points.push_back(pt);
    }

    constexpr double slack = 1e-12;
    report.monotone = true;
    for (std::size_t i = 1; i < report.points.size(); ++i)
    {
        const double prev = report.points[i - 1].metric, cur = report.points[i].metric;
        switch (report.regime)
        {
        case DegenerateRegime::constant_field:
            report.monotone = report.monotone && cur >= prev - slack;
            break;
        case DegenerateRegime::white_noise:
            report.monotone = report.monotone && cur <= prev + slack;
            break;
        case DegenerateRegime::log_ratio:
            report.monotone = report.monotone && std::abs(cur - 1) <= std::abs(prev - 1) + slack;
            break;
        }
    }
    report.final_metric = report.points.back().metric;
    return report;
}

}  // namespace deadleaves
