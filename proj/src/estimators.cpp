#include "deadleaves/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>

#include "deadleaves/csv.hpp"
#include "deadleaves/parallel.hpp"

namespace deadleaves {
namespace {

void require_realizations(std::size_t n)
{
    if (n < 30)
        throw std::invalid_argument("estimator: need at least 30 realizations");
}

std::vector<double> model_params(const ModelSpec& model, std::initializer_list<double> extra)
{
    std::vector<double> out{model.size.alpha(), model.size.r0(), model.size.r1()};
    out.insert(out.end(), extra);
    return out;
}

ValidationRecord make_record(std::string id, std::vector<double> params, double estimate, double analytic, double se)
{
    return {std::move(id), std::move(params), estimate, se, analytic, z_score(estimate, analytic, se)};
}

double binomial_se(double p, std::size_t n)
{
    return std::sqrt(std::max(0.0, p * (1 - p)) / static_cast<double>(n));
}

std::string lag_name(PixelLag l)
{
    return std::to_string(l.dx) + "_" + std::to_string(l.dy);
}

struct AnalyticValue
{
    double value;
    double std_error;
};

// Q¹ of a point set: exact for one or two points, Monte Carlo beyond.
AnalyticValue q_single(const ModelSpec& model, const PointSet& k, const EstimatorConfig& cfg)
{
    std::set<std::pair<double, double>> distinct;
    for (Vec2 p : k.points)
        distinct.insert({p.x, p.y});
    if (distinct.size() == 1)
        return {1.0, 0.0};
    if (distinct.size() == 2)
    {
        const auto a = *distinct.begin(), b = *std::next(distinct.begin());
        return {two_point_p(model, {b.first - a.first, b.second - a.second}, cfg.quad), 0.0};
    }
    const PointSet only[1] = {k};
    const QnResult r = q_n_functional(model, only, cfg.mc);
    return {r.value, r.std_error};
}

}  // namespace

double z_score(double estimate, double analytic, double std_error) noexcept
{
    const double diff = estimate - analytic;
    if (std_error > 0)
        return diff / std_error;
    if (diff == 0)
        return 0.0;
    return diff > 0 ? kInfinity : -kInfinity;
}

std::size_t ValidationReport::n_passed() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [&](const auto& r) { return std::abs(r.z) < z_threshold; }));
}

bool ValidationReport::passed() const noexcept
{
    if (records.empty())
        return false;
    return static_cast<double>(n_passed()) >= pass_fraction * static_cast<double>(records.size()) - 1e-9;
}

void ValidationReport::write_csv(std::ostream& os) const
{
    std::vector<std::string> header{"test_id"};
    header.insert(header.end(), param_names.begin(), param_names.end());
    header.insert(header.end(), {"estimate", "stderr", "analytic", "z"});
    CsvWriter csv(os, header);
    for (const ValidationRecord& r : records)
    {
        std::vector<CsvField> row{r.test_id};
        for (double p : r.params)
            row.emplace_back(p);
        row.insert(row.end(), {r.estimate, r.std_error, r.analytic, r.z});
        csv.row(row);
    }
}

ValidationReport estimate_two_point(const ModelSpec& model, std::span<const PixelLag> lags, std::size_t n_realizations,
                                    std::uint64_t seed, const EstimatorConfig& cfg)
{
    require_realizations(n_realizations);
    ValidationReport report;
    report.param_names = {"alpha", "r0", "r1", "lag_x", "lag_y", "realizations"};
    const double n = static_cast<double>(n_realizations);

    for (std::size_t j = 0; j < lags.size(); ++j)
    {
        const PixelLag lag = lags[j];
        const std::uint32_t ax = static_cast<std::uint32_t>(std::abs(lag.dx));
        const std::uint32_t ay = static_cast<std::uint32_t>(std::abs(lag.dy));
        if (ax >= cfg.window_width || ay >= cfg.window_height)
        {
            report.rejected.push_back("lag " + lag_name(lag) + " exceeds the window");
            continue;
        }
        const Vec2 world{lag.dx * cfg.pixel_size, lag.dy * cfg.pixel_size};
        const double analytic = two_point_p(cfg.reference ? *cfg.reference : model, world, cfg.quad);
        auto params = model_params(model, {double(lag.dx), double(lag.dy), n});

        double freq = 1.0;
        if (ax != 0 || ay != 0)
        {
            // Only the two pixels of the pair are simulated.
            const SimWindow window{ax + 1, ay + 1, cfg.pixel_size, {}};
            const std::size_t first = std::size_t(lag.dy < 0 ? ay : 0) * window.width + (lag.dx < 0 ? ax : 0);
            const std::size_t second = first + std::ptrdiff_t(lag.dy) * window.width + lag.dx;
            std::vector<std::uint8_t> mask(window.pixel_count(), 0);
            mask[first] = mask[second] = 1;
            SimOptions opts;
            opts.mask = mask;

            std::vector<std::uint8_t> agree(n_realizations);
            const std::uint64_t lag_seed = derive_seed(seed, j);
            parallel_for(n_realizations, cfg.threads, [&](std::size_t i) {
                const LabelField f = simulate_model(model, window, derive_seed(lag_seed, i), opts);
                agree[i] = f.labels[first] == f.labels[second];
            });
            std::size_t hits = 0;
            for (std::uint8_t a : agree)
                hits += a;
            freq = static_cast<double>(hits) / n;
        }
        report.records.push_back(make_record("two_point_" + lag_name(lag), std::move(params), freq, analytic,
                                             binomial_se(analytic, n_realizations)));
    }
    return report;
}

ValidationReport estimate_qn(const ModelSpec& model, std::span<const PixelSet> compacts, std::size_t n_realizations,
                             std::uint64_t seed, const EstimatorConfig& cfg)
{
    require_realizations(n_realizations);
    if (compacts.empty())
        throw std::invalid_argument("estimate_qn: need at least one compact");
    for (const PixelSet& k : compacts)
        if (k.empty())
            throw std::invalid_argument("estimate_qn: compacts must be non-empty");

    ValidationReport report;
    report.param_names = {"alpha", "r0", "r1", "n", "realizations"};
    const std::size_t n_sets = compacts.size();
    const double n = static_cast<double>(n_realizations);

    int min_x = compacts[0][0].dx, max_x = min_x, min_y = compacts[0][0].dy, max_y = min_y;
    for (const PixelSet& k : compacts)
        for (PixelLag p : k)
        {
            min_x = std::min(min_x, p.dx);
            max_x = std::max(max_x, p.dx);
            min_y = std::min(min_y, p.dy);
            max_y = std::max(max_y, p.dy);
        }
    const auto span_x = static_cast<std::uint32_t>(max_x - min_x), span_y = static_cast<std::uint32_t>(max_y - min_y);
    if (span_x >= cfg.window_width || span_y >= cfg.window_height)
    {
        report.rejected.push_back("compacts exceed the window");
        return report;
    }

    const SimWindow window{span_x + 1, span_y + 1, cfg.pixel_size, {}};
    std::vector<std::vector<std::size_t>> index(n_sets);
    std::vector<std::uint8_t> mask(window.pixel_count(), 0);
    std::vector<PointSet> world(n_sets);
    for (std::size_t j = 0; j < n_sets; ++j)
        for (PixelLag p : compacts[j])
        {
            const std::size_t idx = std::size_t(p.dy - min_y) * window.width + std::size_t(p.dx - min_x);
            index[j].push_back(idx);
            mask[idx] = 1;
            world[j].points.push_back({p.dx * cfg.pixel_size, p.dy * cfg.pixel_size});
        }
    SimOptions opts;
    opts.mask = mask;

    // Bit 0: prescribed order, bit 1: reversed order (n = 2), bit 2: union in one part.
    const ModelSpec& ref = cfg.reference ? *cfg.reference : model;
    std::vector<std::uint8_t> events(n_realizations);
    parallel_for(n_realizations, cfg.threads, [&](std::size_t i) {
        const LabelField f = simulate_model(model, window, derive_seed(seed, i), opts);
        std::vector<std::uint32_t> part(n_sets);
        bool each_single = true;
        for (std::size_t j = 0; j < n_sets; ++j)
        {
            part[j] = f.labels[index[j][0]];
            for (std::size_t idx : index[j])
                each_single = each_single && f.labels[idx] == part[j];
        }
        // K1's leaf fell first, so it has the largest rank.
        bool ordered = each_single, reversed = each_single && n_sets == 2;
        for (std::size_t j = 1; j < n_sets; ++j)
            ordered = ordered && part[j - 1] > part[j];
        if (n_sets == 2)
            reversed = reversed && part[1] > part[0];
        const bool one_part = each_single && std::all_of(part.begin(), part.end(), [&](auto v) { return v == part[0]; });
        events[i] = std::uint8_t(ordered) | std::uint8_t(reversed) << 1 | std::uint8_t(one_part) << 2;
    });

    std::size_t count[3] = {0, 0, 0}, exactly_one = 0;
    for (std::uint8_t e : events)
    {
        for (int b = 0; b < 3; ++b)
            count[b] += (e >> b) & 1;
        exactly_one += std::popcount(static_cast<unsigned>(e)) == 1;
    }
    auto freq = [&](int b) { return static_cast<double>(count[b]) / n; };
    auto params = model_params(model, {double(n_sets), n});

    AnalyticValue forward;
    if (n_sets == 1)
        forward = q_single(ref, world[0], cfg);
    else
    {
        const QnResult r = q_n_functional(ref, world, cfg.mc);
        forward = {r.value, r.std_error};
    }
    const double se_fwd = std::hypot(binomial_se(forward.value, n_realizations), forward.std_error);
    report.records.push_back(make_record(n_sets == 1 ? "q1" : "qn", params, freq(0), forward.value, se_fwd));
    if (n_sets != 2)
        return report;

    const PointSet swapped[2] = {world[1], world[0]};
    McConfig mc_rev = cfg.mc;
    mc_rev.seed = derive_seed(cfg.mc.seed, 1);
    const QnResult rev = q_n_functional(ref, swapped, mc_rev);
    report.records.push_back(make_record("qn_reversed", params, freq(1), rev.value,
                                         std::hypot(binomial_se(rev.value, n_realizations), rev.std_error)));

    PointSet joined = world[0];
    joined.points.insert(joined.points.end(), world[1].points.begin(), world[1].points.end());
    const AnalyticValue uni = q_single(ref, joined, cfg);
    report.records.push_back(make_record("q1_union", params, freq(2), uni.value,
                                         std::hypot(binomial_se(uni.value, n_realizations), uni.std_error)));

    if (compacts[0].size() == 1 && compacts[1].size() == 1)
    {
        const double se = std::sqrt(forward.std_error * forward.std_error + rev.std_error * rev.std_error +
                                    uni.std_error * uni.std_error);
        report.records.push_back(make_record("partition", params, static_cast<double>(exactly_one) / n,
                                             forward.value + rev.value + uni.value, se));
    }
    return report;
}

std::optional<SlopeFit> fit_loglog(std::span<const double> scales, std::span<const double> values, double lo,
                                   double hi, std::string* note)
{
    auto refuse = [&](std::string why) -> std::optional<SlopeFit> {
        if (note)
            *note = std::move(why);
        return std::nullopt;
    };
    if (scales.size() != values.size())
        throw std::invalid_argument("fit_loglog: scales and values differ in length");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < scales.size(); ++i)
    {
        if (scales[i] < lo || scales[i] > hi)
            continue;
        if (!(values[i] > 0) || !(scales[i] > 0))
            return refuse("non-positive value in the fit range");
        xs.push_back(std::log2(scales[i]));
        ys.push_back(std::log2(values[i]));
    }
    if (xs.size() < 4)
        return refuse("fewer than 4 lags in the fit range");

    const double m = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        mx += xs[i] / m;
        my += ys[i] / m;
    }
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        const double r = ys[i] - fit.intercept - fit.slope * xs[i];
        ssr += r * r;
    }
    fit.slope_stderr = std::sqrt(ssr / (m - 2) / sxx);
    fit.lo = std::exp2(xs.front());
    fit.hi = std::exp2(xs.back());
    fit.n_points = xs.size();
    if (note)
        note->clear();
    return fit;
}

SmoothnessCurve increment_moments(const ModelSpec& model, double p, std::span<const int> lags,
                                  std::size_t n_realizations, std::uint64_t seed, const SmoothnessConfig& cfg)
{
    if (!(p > 0))
        throw std::invalid_argument("increment_moments: exponent p must be positive");
    if (n_realizations == 0)
        throw std::invalid_argument("increment_moments: need at least one realization");
    for (std::size_t i = 0; i < lags.size(); ++i)
    {
        if (lags[i] < 1 || std::uint32_t(lags[i]) >= std::min(cfg.width, cfg.height))
            throw std::invalid_argument("increment_moments: lags must lie in [1, window side)");
        if (i > 0 && lags[i] <= lags[i - 1])
            throw std::invalid_argument("increment_moments: lags must be strictly increasing");
    }
    const SimWindow window{cfg.width, cfg.height, cfg.pixel_size, {}};
    const std::size_t n_lags = lags.size();

    std::vector<std::vector<double>> per_real(n_realizations, std::vector<double>(n_lags));
    std::vector<double> effective(n_realizations);
    parallel_for(n_realizations, cfg.threads, [&](std::size_t r) {
        const std::uint64_t s = derive_seed(seed, r);
        LabelField f;
        if (cfg.white_noise)
            f = simulate_white_noise(window, s);
        else if (model.size.r0() == 0 && cfg.resolution_bits)
            f = simulate_resolution_limited(model, window, s, *cfg.resolution_bits);
        else
            f = simulate_model(model, window, s);
        effective[r] = f.effective_r0;

        const std::size_t W = f.width, H = f.height;
        for (std::size_t k = 0; k < n_lags; ++k)
        {
            const std::size_t L = static_cast<std::size_t>(lags[k]);
            double sum = 0;
            auto add = [&](float a, float b) {
                const double d = std::abs(double(a) - double(b));
                sum += p == 1 ? d : std::pow(d, p);
            };
            for (std::size_t j = 0; j < H; ++j)
                for (std::size_t i = 0; i + L < W; ++i)
                    add(f.intensity[j * W + i + L], f.intensity[j * W + i]);
            for (std::size_t j = 0; j + L < H; ++j)
                for (std::size_t i = 0; i < W; ++i)
                    add(f.intensity[(j + L) * W + i], f.intensity[j * W + i]);
            per_real[r][k] = sum / static_cast<double>(H * (W - L) + W * (H - L));
        }
    });

    SmoothnessCurve curve;
    curve.kind = "increment_moment";
    curve.effective_r0 = effective.empty() ? 0 : effective[0];
    const double m = static_cast<double>(n_realizations);
    for (std::size_t k = 0; k < n_lags; ++k)
    {
        double mean = 0;
        for (const auto& v : per_real)
            mean += v[k];
        mean /= m;
        double var = 0;
        for (const auto& v : per_real)
            var += (v[k] - mean) * (v[k] - mean);
        curve.scales.push_back(lags[k] * cfg.pixel_size);
        curve.values.push_back(mean);
        curve.std_errors.push_back(n_realizations > 1 ? std::sqrt(var / (m - 1) / m) : 0.0);
    }

    double lo = 0, hi = kInfinity;
    if (!cfg.white_noise)
    {
        lo = 4 * curve.effective_r0;
        hi = model.size.r1() * model.shape.inner_radius() / 4;
    }
    lo = cfg.fit_lo.value_or(lo);
    hi = cfg.fit_hi.value_or(hi);
    curve.fit = fit_loglog(curve.scales, curve.values, lo, hi, &curve.fit_note);
    return curve;
}

double expected_increment_moment(const ModelSpec& model, double p, Vec2 lag, const QuadratureConfig& quad)
{
    if (!(p > 0))
        throw std::invalid_argument("expected_increment_moment: exponent p must be positive");
    return two_point_p_complement(model, lag, quad) * 2 / ((p + 1) * (p + 2));
}

SmoothnessCurve modulus_curve(const LabelField& field, double p, std::span<const double> scales, double pixel_size)
{
    if (!field.complete)
        throw std::invalid_argument("modulus_curve: field must be complete");
    if (!(p > 0))
        throw std::invalid_argument("modulus_curve: exponent p must be positive");
    for (std::size_t i = 0; i < scales.size(); ++i)
        if (!(scales[i] > 1) || (i > 0 && scales[i] <= scales[i - 1]))
            throw std::invalid_argument("modulus_curve: scales must exceed 1 pixel and be strictly increasing");

    const long W = field.width, H = field.height;
    const double side = static_cast<double>(std::max(W, H));
    const double cell = 1 / (side * side);  // normalized area of one pixel
    const double u_max = scales.empty() ? 0 : scales.back();
    const long reach = static_cast<long>(std::ceil(u_max));

    // ‖Δ_y I‖_p over the overlap, for the half plane of lags; -y has the same norm.
    struct LagNorm
    {
        double length;
        double norm;
    };
    std::vector<LagNorm> norms;
    for (long dy = 0; dy <= reach; ++dy)
        for (long dx = dy == 0 ? 1 : -reach; dx <= reach; ++dx)
        {
            const double len = std::hypot(double(dx), double(dy));
            if (!(len < u_max) || std::abs(dx) >= W || dy >= H)
                continue;
            double sum = 0;
            for (long j = 0; j + dy < H; ++j)
                for (long i = std::max(0L, -dx); i < W && i + dx < W; ++i)
                {
                    const double d = std::abs(double(field.intensity[(j + dy) * W + i + dx]) -
                                              double(field.intensity[j * W + i]));
                    sum += p == 1 ? d : std::pow(d, p);
                }
            norms.push_back({len, std::pow(sum * cell, 1 / p)});
        }

    SmoothnessCurve curve;
    curve.kind = "modulus";
    curve.effective_r0 = field.effective_r0;
    // ∫_{|y|<u} dy is taken as π u² times the mean over lattice lags in the
    // disk; counting lattice cells instead undershoots badly at small u.
    for (double u : scales)
    {
        double total = 0;
        std::size_t count = 0;
        for (const LagNorm& ln : norms)
            if (ln.length < u)
            {
                total += ln.norm;
                ++count;
            }
        const double un = u / side;
        const double integral = count ? std::numbers::pi * un * un * total / static_cast<double>(count) : 0.0;
        curve.scales.push_back(u * pixel_size);
        curve.values.push_back(std::max(1.0, 1 / (un * un)) * integral);
        curve.std_errors.push_back(0.0);
    }
    curve.fit = fit_loglog(curve.scales, curve.values, 0, kInfinity, &curve.fit_note);
    return curve;
}

void write_curves_csv(std::ostream& os, std::span<const SmoothnessCurve> curves)
{
    CsvWriter csv(os, {"curve", "scale", "value", "stderr", "slope", "slope_stderr", "fit_lo", "fit_hi"});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const SmoothnessCurve& c : curves)
        for (std::size_t i = 0; i < c.scales.size(); ++i)
            csv.row({c.kind, c.scales[i], c.values[i], c.std_errors[i], c.fit ? c.fit->slope : nan,
                     c.fit ? c.fit->slope_stderr : nan, c.fit ? c.fit->lo : nan, c.fit ? c.fit->hi : nan});
}

}  // namespace deadleaves
