#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "deadleaves/analytic.hpp"
#include "deadleaves/csv.hpp"
#include "deadleaves/estimators.hpp"
#include "deadleaves/parallel.hpp"
#include "deadleaves/simulator.hpp"

namespace deadleaves::cli {
namespace {

class UsageError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

struct Options
{
    std::string shape = "disk";
    double radius = 1;
    std::string rect = "2x1";
    std::string rotation = "uniform";
    double angle = 0;
    std::string vertices;
    std::vector<double> alpha{2.5};
    double r0 = 0.5;
    std::string r1 = "8";
    std::string size = "512x512";
    double pixel_size = 1;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::size_t realizations = 0;
    std::string out;
    bool white_noise = false;
    std::optional<unsigned> resolution_bits;
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;

    // simulate
    std::size_t count = 1;
    std::uint64_t max_leaves = kUnlabeled;

    // analytic
    std::vector<double> x{1.0};
    double y = 0;
    std::vector<std::string> compacts;
    std::string schedule;
    std::size_t strata = 64;
    std::size_t samples = 4096;
    std::uint64_t mc_seed = 1;
    std::size_t angles = 8;
    std::size_t radii = 65;

    // validate
    std::vector<int> lags{1, 2, 4, 8, 16};
    std::string axes = "xy";
    std::optional<double> analytic_alpha;
    int qn_n = 2;
    int qn_lag = 4;

    // smoothness
    double p_exponent = 1;
    std::vector<int> moment_lags{1, 2, 4, 8, 16, 32};
    std::vector<double> modulus_scales{2, 4, 8, 16};
    std::optional<double> fit_lo;
    std::optional<double> fit_hi;
    //! Whether --r0 / --r1 were set (flag or config file).
    bool scales_given = false;
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        parts.push_back(cur);
    return parts;
}

double parse_double(const std::string& s, const std::string& what)
{
    try
    {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    }
    catch (const std::exception&)
    {
        throw UsageError("cannot parse " + what + " from '" + s + "'");
    }
}

std::pair<std::uint32_t, std::uint32_t> parse_size(const std::string& s)
{
    const auto parts = split(s, 'x');
    if (parts.size() != 2)
        throw UsageError("size must look like WIDTHxHEIGHT, got '" + s + "'");
    const double w = parse_double(parts[0], "width"), h = parse_double(parts[1], "height");
    if (!(w >= 1 && h >= 1) || w != std::floor(w) || h != std::floor(h) || w > 1e6 || h > 1e6)
        throw UsageError("size must be two positive integers, got '" + s + "'");
    return {static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h)};
}

std::vector<Vec2> parse_points(const std::string& s)
{
    std::vector<Vec2> pts;
    for (const std::string& item : split(s, ';'))
    {
        const auto xy = split(item, ',');
        if (xy.size() != 2)
            throw UsageError("points must look like x,y;x,y;... got '" + s + "'");
        pts.push_back({parse_double(xy[0], "point"), parse_double(xy[1], "point")});
    }
    if (pts.empty())
        throw UsageError("empty point list");
    return pts;
}

Compact parse_compact(const std::string& s)
{
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (kind == "disk")
        return DiskCompact{parse_double(body, "disk radius")};
    if (kind == "points")
        return PointSet{parse_points(body)};
    throw UsageError("compact must be disk:R or points:x,y;x,y;... got '" + s + "'");
}

ShapeDistribution make_shape(const Options& o)
{
    if (o.rotation != "uniform" && o.rotation != "fixed")
        throw UsageError("--rotation must be uniform or fixed");
    const RotationLaw law = o.rotation == "uniform" ? RotationLaw::uniform : RotationLaw::fixed;
    if (o.shape == "disk")
        return ShapeDistribution::disk(o.radius);
    if (o.shape == "rect")
    {
        const auto parts = split(o.rect, 'x');
        if (parts.size() != 2)
            throw UsageError("--rect must look like WxH");
        return ShapeDistribution::rectangle(parse_double(parts[0], "rect width"), parse_double(parts[1], "rect height"),
                                            law, o.angle);
    }
    if (o.shape == "polygon")
        return ShapeDistribution::polygon(parse_points(o.vertices), law, o.angle);
    throw UsageError("--shape must be disk, rect or polygon");
}

double r1_value(const Options& o)
{
    return parse_double(o.r1, "--r1");
}

ModelSpec make_model(const Options& o, double alpha)
{
    return ModelSpec::make(make_shape(o), SizeLaw(alpha, o.r0, r1_value(o)));
}

QuadratureConfig quad_config(const Options& o)
{
    QuadratureConfig q;
    q.abs_tol = o.abs_tol;
    q.rel_tol = o.rel_tol;
    q.validate();
    return q;
}

// Writes to --out when given, else to the console stream.
void emit(const Options& o, std::ostream& console, const std::function<void(std::ostream&)>& body)
{
    if (o.out.empty())
    {
        body(console);
        return;
    }
    std::ofstream file(o.out, std::ios::binary);
    if (!file)
        throw IoError("cannot open " + o.out + " for writing");
    body(file);
    if (!file)
        throw IoError("write to " + o.out + " failed");
}

std::uint64_t seed_for_output(const Options& o, bool writes_files)
{
    if (o.seed)
        return *o.seed;
    if (writes_files)
        throw UsageError("--seed is required for anything written to disk");
    return 1;
}

std::string indexed(const std::string& prefix, std::size_t k, std::size_t count)
{
    if (count == 1)
        return prefix;
    std::ostringstream s;
    s << prefix << '_' << std::setw(4) << std::setfill('0') << k;
    return s.str();
}

int cmd_simulate(const Options& o, std::ostream& out)
{
    const auto [w, h] = parse_size(o.size);
    const SimWindow window{w, h, o.pixel_size, {}};
    window.validate();
    if (o.count < 1)
        throw UsageError("--count must be >= 1");
    const std::string prefix = o.out.empty() ? "deadleaves" : o.out;

    std::optional<ModelSpec> model;
    std::string mode = "white_noise";
    if (!o.white_noise)
    {
        model = make_model(o, o.alpha.at(0));
        if (model->size.r0() > 0)
            mode = "exact";
        else if (model->size.alpha() >= 3)
            throw UsageError("alpha >= 3 with r0 = 0 converges to white noise; pass --white-noise to sample that "
                             "limit");
        else
            mode = "resolution_limited";
    }
    const std::uint64_t seed = seed_for_output(o, true);

    SimOptions sim;
    sim.max_leaves = o.max_leaves;
    std::vector<std::uint64_t> leaves(o.count);
    std::vector<double> effective(o.count);
    parallel_for(o.count, o.threads, [&](std::size_t k) {
        const std::uint64_t s = derive_seed(seed, k);
        LabelField f;
        if (mode == "white_noise")
            f = simulate_white_noise(window, s, sim);
        else if (mode == "resolution_limited")
            f = o.resolution_bits ? simulate_resolution_limited(*model, window, s, *o.resolution_bits, sim)
                                  : simulate_resolution_limited(*model, window, s, sim);
        else
            f = simulate(*model, window, s, sim);
        const std::vector<std::string> comments = field_comments(f);
        const std::string base = indexed(prefix, k, o.count);
        write_pnm(base + ".pgm", render(f, RenderMode::gray), comments);
        write_pnm(base + ".ppm", render(f, RenderMode::labels), comments);
        write_label_map(base + ".dllm", f);
        leaves[k] = f.leaf_count;
        effective[k] = f.effective_r0;
    });

    CsvWriter csv(out, {"image", "mode", "leaves", "complete", "effective_r0"});
    for (std::size_t k = 0; k < o.count; ++k)
        csv.row({indexed(prefix, k, o.count), mode, static_cast<std::int64_t>(leaves[k]), std::int64_t{1},
                 effective[k]});
    return exit_ok;
}

int cmd_analytic_p(const Options& o, std::ostream& out)
{
    const QuadratureConfig quad = quad_config(o);
    emit(o, out, [&](std::ostream& os) {
        CsvWriter csv(os, {"alpha", "r0", "r1", "x", "y", "p", "one_minus_p"});
        for (double a : o.alpha)
        {
            const ModelSpec model = make_model(o, a);
            for (double x : o.x)
                csv.row({a, o.r0, model.size.r1(), x, o.y, two_point_p(model, {x, o.y}, quad),
                         two_point_p_complement(model, {x, o.y}, quad)});
        }
    });
    return exit_ok;
}

int cmd_analytic_g(const Options& o, std::ostream& out)
{
    const QuadratureConfig quad = quad_config(o);
    emit(o, out, [&](std::ostream& os) {
        CsvWriter csv(os, {"alpha", "regime", "g", "exponent", "reference"});
        for (double a : o.alpha)
        {
            // g depends on α and the grain only.
            const ModelSpec model = ModelSpec::make(make_shape(o), a > 3 ? SizeLaw(a, 1, kInfinity) : SizeLaw(a, 0, 1));
            const AsymptoticConstant c = asymptotic_constant(model, quad);
            static const char* names[] = {"large_scale", "small_scale", "log_linear", "linear"};
            csv.row({a, std::string(names[static_cast<int>(c.regime)]), c.g, c.exponent, c.reference});
        }
    });
    return exit_ok;
}

int cmd_analytic_q(const Options& o, std::ostream& out)
{
    if (o.compacts.empty())
        throw UsageError("analytic q needs --K");
    const QuadratureConfig quad = quad_config(o);
    emit(o, out, [&](std::ostream& os) {
        CsvWriter csv(os, {"alpha", "r0", "r1", "compact", "q"});
        for (double a : o.alpha)
        {
            const ModelSpec model = make_model(o, a);
            for (const std::string& k : o.compacts)
                csv.row({a, o.r0, model.size.r1(), k, q_functional(model, parse_compact(k), quad)});
        }
    });
    return exit_ok;
}

int cmd_analytic_qn(const Options& o, std::ostream& out)
{
    if (o.compacts.empty())
        throw UsageError("analytic qn needs one --K points:... per compact");
    std::vector<PointSet> sets;
    for (const std::string& k : o.compacts)
    {
        const Compact c = parse_compact(k);
        if (!std::holds_alternative<PointSet>(c))
            throw UsageError("analytic qn supports point sets only");
        sets.push_back(std::get<PointSet>(c));
    }
    const McConfig mc{o.strata, o.samples, o.mc_seed};
    emit(o, out, [&](std::ostream& os) {
        CsvWriter csv(os, {"alpha", "r0", "r1", "n", "value", "stderr", "numerator", "denominator"});
        for (double a : o.alpha)
        {
            const ModelSpec model = make_model(o, a);
            const QnResult r = q_n_functional(model, sets, mc);
            csv.row(std::vector<CsvField>{a, o.r0, model.size.r1(), static_cast<std::int64_t>(sets.size()), r.value, r.std_error,
                     r.numerator, r.denominator});
        }
    });
    return exit_ok;
}

int cmd_analytic_limits(const Options& o, std::ostream& out)
{
    std::vector<std::pair<double, double>> schedule;
    for (const std::string& item : split(o.schedule, ','))
    {
        const auto parts = split(item, ':');
        if (parts.size() != 2)
            throw UsageError("--schedule must look like r0:r1,r0:r1,...");
        schedule.emplace_back(parse_double(parts[0], "r0"), parse_double(parts[1], "r1"));
    }
    if (schedule.empty())
        throw UsageError("analytic limits needs --schedule");
    const QuadratureConfig quad = quad_config(o);
    const ShapeDistribution shape = make_shape(o);
    emit(o, out, [&](std::ostream& os) {
        CsvWriter csv(os, {"alpha", "regime", "r0", "r1", "x", "p", "metric", "target", "monotone"});
        static const char* names[] = {"constant_field", "white_noise", "log_ratio"};
        for (double a : o.alpha)
        {
            const TrendReport rep = degenerate_limit_check(shape, a, schedule, o.x.at(0), quad);
            for (const TrendPoint& pt : rep.points)
                csv.row({a, std::string(names[static_cast<int>(rep.regime)]), pt.r0, pt.r1, o.x.at(0), pt.p, pt.metric,
                         rep.target, static_cast<std::int64_t>(rep.monotone)});
        }
    });
    return exit_ok;
}

int cmd_analytic_covariogram(const Options& o, std::ostream& out)
{
    const Covariogram cov = Covariogram::analytic(make_shape(o));
    emit(o, out, [&](std::ostream& os) { cov.write_csv(os, o.angles, o.radii); });
    return exit_ok;
}

int finish_report(const Options& o, const ValidationReport& report, std::ostream& out, std::ostream& err)
{
    for (const std::string& r : report.rejected)
        err << "rejected: " << r << '\n';
    emit(o, out, [&](std::ostream& os) { report.write_csv(os); });
    err << report.n_passed() << " of " << report.records.size() << " records with |z| < " << report.z_threshold
        << (report.passed() ? ": pass\n" : ": FAIL\n");
    return report.passed() ? exit_ok : exit_validation_failed;
}

EstimatorConfig estimator_config(const Options& o)
{
    const auto [w, h] = parse_size(o.size);
    EstimatorConfig cfg;
    cfg.window_width = w;
    cfg.window_height = h;
    cfg.pixel_size = o.pixel_size;
    cfg.threads = o.threads;
    cfg.quad = quad_config(o);
    cfg.mc = McConfig{o.strata, o.samples, o.mc_seed};
    return cfg;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err)
{
    const std::uint64_t seed = seed_for_output(o, !o.out.empty());
    const ModelSpec model = make_model(o, o.alpha.at(0));
    std::optional<ModelSpec> reference;
    EstimatorConfig cfg = estimator_config(o);
    if (o.analytic_alpha)
    {
        reference = model.with_size(SizeLaw(*o.analytic_alpha, o.r0, r1_value(o)));
        cfg.reference = &*reference;
    }
    std::vector<PixelLag> lags;
    for (char axis : o.axes)
    {
        if (axis != 'x' && axis != 'y')
            throw UsageError("--axes takes the letters x and y");
        for (int l : o.lags)
            lags.push_back(axis == 'x' ? PixelLag{l, 0} : PixelLag{0, l});
    }
    const std::size_t n = o.realizations ? o.realizations : 2000;
    return finish_report(o, estimate_two_point(model, lags, n, seed, cfg), out, err);
}

int cmd_validate_qn(const Options& o, std::ostream& out, std::ostream& err)
{
    const std::uint64_t seed = seed_for_output(o, !o.out.empty());
    const ModelSpec model = make_model(o, o.alpha.at(0));
    EstimatorConfig cfg = estimator_config(o);
    std::optional<ModelSpec> reference;
    if (o.analytic_alpha)
    {
        reference = model.with_size(SizeLaw(*o.analytic_alpha, o.r0, r1_value(o)));
        cfg.reference = &*reference;
    }
    std::vector<PixelSet> compacts;
    if (o.qn_n == 1)
        compacts = {{{0, 0}, {o.qn_lag, 0}}};
    else if (o.qn_n == 2)
        compacts = {{{0, 0}}, {{o.qn_lag, 0}}};
    else
        throw UsageError("validate qn supports --n 1 or 2");
    const std::size_t n = o.realizations ? o.realizations : 2000;
    return finish_report(o, estimate_qn(model, compacts, n, seed, cfg), out, err);
}

int cmd_smoothness(const Options& o, std::ostream& out, std::ostream& err)
{
    const std::uint64_t seed = seed_for_output(o, !o.out.empty());
    const auto [w, h] = parse_size(o.size);
    SmoothnessConfig cfg;
    cfg.width = w;
    cfg.height = h;
    cfg.pixel_size = o.pixel_size;
    cfg.threads = o.threads;
    cfg.white_noise = o.white_noise;
    cfg.resolution_bits = o.resolution_bits;
    cfg.fit_lo = o.fit_lo;
    cfg.fit_hi = o.fit_hi;

    // White noise needs no model; any admissible one stands in. Without
    // explicit cutoffs the r0 = 0, r1 = 64 px limit field is the default.
    Options mo = o;
    if (!o.scales_given)
    {
        mo.r0 = 0;
        mo.r1 = std::to_string(64 * o.pixel_size);
    }
    const ModelSpec model = o.white_noise ? ModelSpec::make(ShapeDistribution::disk(1), SizeLaw(2.5, 1, 2))
                                          : make_model(mo, o.alpha.at(0));
    if (!o.white_noise && model.size.r0() == 0 && model.size.alpha() >= 3)
        throw UsageError("alpha >= 3 with r0 = 0 converges to white noise; pass --white-noise");
    const std::size_t n = o.realizations ? o.realizations : 8;
    std::vector<SmoothnessCurve> curves;
    curves.push_back(increment_moments(model, o.p_exponent, o.moment_lags, n, seed, cfg));

    if (!o.modulus_scales.empty())
    {
        const SimWindow window{w, h, o.pixel_size, {}};
        const std::uint64_t s = derive_seed(seed, 0);
        const LabelField f = o.white_noise ? simulate_white_noise(window, s)
                             : (model.size.r0() == 0 && o.resolution_bits)
                                 ? simulate_resolution_limited(model, window, s, *o.resolution_bits)
                                 : simulate_model(model, window, s);
        std::vector<double> scales;
        for (double u : o.modulus_scales)
            scales.push_back(u);
        curves.push_back(modulus_curve(f, o.p_exponent, scales, o.pixel_size));
    }
    for (const SmoothnessCurve& c : curves)
        if (!c.fit)
            err << c.kind << ": slope fit refused (" << c.fit_note << ")\n";
    emit(o, out, [&](std::ostream& os) { write_curves_csv(os, curves); });
    return exit_ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Dead leaves model: simulation, closed-form functionals and their reconciliation", "deadleaves"};
    app.set_config("--config", "", "key=value file; command-line flags override it");
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    app.add_option("--shape", o.shape, "Grain shape: disk, rect or polygon");
    app.add_option("--radius", o.radius, "Disk radius");
    app.add_option("--rect", o.rect, "Rectangle sides WxH");
    app.add_option("--rotation", o.rotation, "Rotation law for rect/polygon: uniform or fixed");
    app.add_option("--angle", o.angle, "Fixed rotation angle (radians)");
    app.add_option("--vertices", o.vertices, "Polygon vertices x,y;x,y;... counterclockwise");
    app.add_option("--alpha", o.alpha, "Size exponent(s)")->delimiter(',');
    app.add_option("--r0", o.r0, "Lower scale cutoff");
    app.add_option("--r1", o.r1, "Upper scale cutoff (inf allowed for alpha > 3)");
    app.add_option("--size", o.size, "Window WIDTHxHEIGHT in pixels");
    app.add_option("--pixel-size", o.pixel_size, "World units per pixel");
    app.add_option("--seed", o.seed, "64-bit seed");
    app.add_option("--threads", o.threads, "Worker threads (0: all cores)");
    app.add_option("--realizations", o.realizations, "Independent realizations");
    app.add_option("--out", o.out, "Output path (prefix for simulate)");
    app.add_flag("--white-noise", o.white_noise, "Sample the alpha >= 3, r0 -> 0 white-noise limit");
    app.add_option("--resolution-bits", o.resolution_bits, "r0 = 0 runs use the cutoff pixel_size / 2^bits");
    app.add_option("--abs-tol", o.abs_tol, "Quadrature absolute tolerance");
    app.add_option("--rel-tol", o.rel_tol, "Quadrature relative tolerance");
    app.add_option("--strata", o.strata, "Scale strata for Monte Carlo Qn");
    app.add_option("--samples", o.samples, "Samples per stratum for Monte Carlo Qn");
    app.add_option("--mc-seed", o.mc_seed, "Seed of the Monte Carlo Qn integrals");

    int code = exit_ok;
    auto bind = [&](CLI::App* sub, auto fn) {
        sub->fallthrough();
        sub->callback([&, fn] { code = fn(); });
    };

    CLI::App* sim = app.add_subcommand("simulate", "Perfect simulation to PGM/PPM/DLLM files");
    sim->add_option("--count", o.count, "Number of images");
    sim->add_option("--max-leaves", o.max_leaves, "Leaf budget before giving up");
    bind(sim, [&] { return cmd_simulate(o, out); });

    CLI::App* ana = app.add_subcommand("analytic", "Closed-form functionals as CSV");
    ana->require_subcommand(1);
    ana->fallthrough();
    CLI::App* ap = ana->add_subcommand("p", "Two-point probability p(r0, r1, x)");
    ap->add_option("--x", o.x, "Lag x component(s)")->delimiter(',');
    ap->add_option("--y", o.y, "Lag y component");
    bind(ap, [&] { return cmd_analytic_p(o, out); });
    CLI::App* ag = ana->add_subcommand("g", "Asymptotic constant g(alpha)");
    bind(ag, [&] { return cmd_analytic_g(o, out); });
    CLI::App* aq = ana->add_subcommand("q", "Inclusion probability Q(K)");
    aq->add_option("--K", o.compacts, "disk:R or points:x,y;x,y (repeatable)");
    bind(aq, [&] { return cmd_analytic_q(o, out); });
    CLI::App* aqn = ana->add_subcommand("qn", "Ordered inclusion probability Qn(K1..Kn)");
    aqn->add_option("--K", o.compacts, "points:x,y;... one per compact, K1 first");
    bind(aqn, [&] { return cmd_analytic_qn(o, out); });
    CLI::App* al = ana->add_subcommand("limits", "p along a schedule toward a degenerate limit");
    al->add_option("--schedule", o.schedule, "r0:r1,r0:r1,...");
    al->add_option("--x", o.x, "Lag")->delimiter(',');
    bind(al, [&] { return cmd_analytic_limits(o, out); });
    CLI::App* ac = ana->add_subcommand("covariogram", "Covariogram table (angle, radius, value)");
    ac->add_option("--angles", o.angles, "Angles in [0, pi)");
    ac->add_option("--radii", o.radii, "Radii in [0, 2 a2]");
    bind(ac, [&] { return cmd_analytic_covariogram(o, out); });

    CLI::App* val = app.add_subcommand("validate", "Simulation against closed forms; exit 1 on failure");
    val->add_option("--lags", o.lags, "Pixel lags")->delimiter(',');
    val->add_option("--axes", o.axes, "Lag axes: x, y or xy");
    val->add_option("--analytic-alpha", o.analytic_alpha, "Alpha for the analytic side (negative control)");
    CLI::App* vqn = val->add_subcommand("qn", "Qn frequencies and the n = 2 partition identity");
    vqn->add_option("--n", o.qn_n, "1 or 2");
    vqn->add_option("--lag", o.qn_lag, "Horizontal pixel lag between the points");
    bind(vqn, [&] { return cmd_validate_qn(o, out, err); });
    val->fallthrough();
    val->callback([&] {
        if (val->get_subcommands().empty())
            code = cmd_validate(o, out, err);
    });

    CLI::App* sm = app.add_subcommand("smoothness", "Increment-moment and modulus curves with log-log slopes");
    sm->add_option("--p", o.p_exponent, "Moment exponent");
    sm->add_option("--lags", o.moment_lags, "Increment lags (pixels)")->delimiter(',');
    sm->add_option("--modulus-scales", o.modulus_scales, "Modulus scales (pixels)")->delimiter(',');
    sm->add_option("--fit-lo", o.fit_lo, "Fit range lower end (world units)");
    sm->add_option("--fit-hi", o.fit_hi, "Fit range upper end (world units)");
    bind(sm, [&] {
        o.scales_given = app.get_option("--r0")->count() > 0 || app.get_option("--r1")->count() > 0;
        return cmd_smoothness(o, out, err);
    });

    try
    {
        app.parse(argc, argv);
        return code;
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? exit_ok : exit_usage;
    }
    catch (const IoError& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_io;
    }
    catch (const IncompleteCoverage& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_validation_failed;
    }
    catch (const std::invalid_argument& e)
    {
        // ParameterError, InvalidShape, UnsupportedCompact and usage errors.
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_validation_failed;
    }
}

}  // namespace deadleaves::cli
