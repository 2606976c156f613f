#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "deadleaves/csv.hpp"
#include "deadleaves/estimators.hpp"

using namespace deadleaves;

namespace {

ModelSpec disk_model(double alpha, double r0, double r1)
{
    return ModelSpec::make(ShapeDistribution::disk(1), SizeLaw(alpha, r0, r1));
}

EstimatorConfig small_window()
{
    EstimatorConfig cfg;
    cfg.window_width = 64;
    cfg.window_height = 64;
    return cfg;
}

std::string first_line(const std::string& s)
{
    return s.substr(0, s.find('\n'));
}

}  // namespace

TEST_CASE("z scores")
{
    CHECK(z_score(0.6, 0.5, 0.05) == doctest::Approx(2.0));
    CHECK(z_score(0.5, 0.5, 0.0) == 0.0);
    CHECK(z_score(0.6, 0.5, 0.0) == INFINITY);
    CHECK(z_score(0.4, 0.5, 0.0) == -INFINITY);
}

TEST_CASE("report pass rule and CSV")
{
    ValidationReport r;
    r.param_names = {"alpha", "lag"};
    for (int i = 0; i < 20; ++i)
        r.records.push_back({"two_point", {2.5, double(i)}, 0.5, 0.1, 0.5, i == 0 ? 5.0 : 0.5});
    CHECK(r.n_passed() == 19);
    CHECK(r.passed());
    r.records[1].z = -3.0;
    CHECK_FALSE(r.passed());
    std::ostringstream os;
    r.write_csv(os);
    CHECK(first_line(os.str()) == "test_id,alpha,lag,estimate,stderr,analytic,z");
    ValidationReport empty;
    CHECK_FALSE(empty.passed());
}

TEST_CASE("two-point estimator agrees with the analytic model")
{
    const ModelSpec m = disk_model(2.5, 0.5, 8);
    const std::vector<PixelLag> lags{{0, 0}, {1, 0}, {4, 0}, {0, 3}, {2, 2}, {100, 0}};
    EstimatorConfig cfg = small_window();
    const ValidationReport r = estimate_two_point(m, lags, 1000, 17, cfg);
    REQUIRE(r.records.size() == 5);
    CHECK(r.rejected.size() == 1);
    CHECK(r.records[0].estimate == 1.0);
    CHECK(r.records[0].z == 0.0);
    CHECK(r.passed());
    for (const ValidationRecord& rec : r.records)
    {
        const double lag = std::hypot(rec.params[3], rec.params[4]);
        CHECK(rec.analytic == doctest::Approx(two_point_p(m, {lag, 0})));
        CHECK(rec.params.back() == 1000);
    }

    cfg.threads = 3;
    const ValidationReport t = estimate_two_point(m, lags, 1000, 17, cfg);
    for (std::size_t i = 0; i < r.records.size(); ++i)
        CHECK(t.records[i].estimate == r.records[i].estimate);

    CHECK_THROWS(estimate_two_point(m, lags, 10, 17, cfg));
}

TEST_CASE("a wrong reference model is detected")
{
    const ModelSpec m = disk_model(2.8, 0.5, 8);
    const ModelSpec wrong = disk_model(2.2, 0.5, 8);
    EstimatorConfig cfg = small_window();
    cfg.reference = &wrong;
    const std::vector<PixelLag> lags{{1, 0}, {2, 0}, {4, 0}, {6, 0}};
    const ValidationReport r = estimate_two_point(m, lags, 2000, 3, cfg);
    CHECK_FALSE(r.passed());
}

TEST_CASE("Q^n estimator and the partition identity")
{
    const ModelSpec m = disk_model(2.5, 0.5, 8);
    EstimatorConfig cfg = small_window();
    cfg.mc.samples_per_stratum = 1024;
    for (int lag : {1, 3})
    {
        const std::vector<PixelSet> ks{PixelSet{{0, 0}}, PixelSet{{lag, 0}}};
        const ValidationReport r = estimate_qn(m, ks, 1000, 40 + lag, cfg);
        bool found = false;
        for (const ValidationRecord& rec : r.records)
            if (rec.test_id == "partition")
            {
                found = true;
                CHECK(rec.estimate == 1.0);
                CHECK(std::abs(rec.analytic - 1) < 0.05);
            }
        CHECK(found);
        CHECK(r.records.size() == 4);
        CHECK(r.passed());
    }
    const std::vector<PixelSet> one{PixelSet{{0, 0}, {2, 0}}};
    const ValidationReport q1 = estimate_qn(m, one, 500, 9, cfg);
    REQUIRE(q1.records.size() == 1);
    CHECK(q1.records[0].test_id == "q1");
    CHECK(q1.records[0].analytic == doctest::Approx(two_point_p(m, {2, 0})).epsilon(0.05));
}

TEST_CASE("log-log fit")
{
    std::vector<double> s, v;
    for (int k = 0; k < 6; ++k)
    {
        s.push_back(std::ldexp(1.0, k));
        v.push_back(3 * std::pow(s.back(), 0.7));
    }
    const auto fit = fit_loglog(s, v, 1, 32);
    REQUIRE(fit);
    CHECK(fit->slope == doctest::Approx(0.7));
    CHECK(fit->slope_stderr < 1e-10);
    CHECK(fit->intercept == doctest::Approx(std::log2(3.0)));
    CHECK(fit->n_points == 6);
    std::string note;
    CHECK_FALSE(fit_loglog(s, v, 1, 4, &note));
    CHECK_FALSE(note.empty());
    v[2] = 0;
    CHECK_FALSE(fit_loglog(s, v, 1, 32));
}

TEST_CASE("expected increment moments")
{
    const ModelSpec m = disk_model(2.5, 0.5, 8);
    const double p = two_point_p(m, {3, 0});
    CHECK(expected_increment_moment(m, 1, {3, 0}) == doctest::Approx((1 - p) / 3));
    CHECK(expected_increment_moment(m, 2, {3, 0}) == doctest::Approx((1 - p) / 6));
}

TEST_CASE("increment moments match their expectation")
{
    const ModelSpec m = disk_model(2.5, 0.5, 16);
    SmoothnessConfig cfg;
    cfg.width = cfg.height = 64;
    const std::vector<int> lags{1, 2, 4, 8, 16};
    const SmoothnessCurve c = increment_moments(m, 1, lags, 40, 5, cfg);
    CHECK(c.kind == "increment_moment");
    REQUIRE(c.values.size() == lags.size());
    for (std::size_t i = 0; i < lags.size(); ++i)
    {
        const double e = expected_increment_moment(m, 1, {double(lags[i]), 0});
        CHECK(std::abs(c.values[i] - e) < 4 * c.std_errors[i]);
    }
    CHECK(c.effective_r0 == 0.5);

    cfg.threads = 3;
    CHECK(increment_moments(m, 1, lags, 40, 5, cfg).values == c.values);
}

TEST_CASE("modulus curve")
{
    const std::vector<double> scales{2, 4, 8, 16};
    SimWindow w;
    w.width = w.height = 128;
    const LabelField noise = simulate_white_noise(w, 3);
    const SmoothnessCurve c = modulus_curve(noise, 1, scales);
    REQUIRE(c.fit);
    CHECK(std::abs(c.fit->slope) < 0.05);

    LabelField flat = noise;
    std::fill(flat.intensity.begin(), flat.intensity.end(), 0.3f);
    const SmoothnessCurve z = modulus_curve(flat, 1, scales);
    for (double v : z.values)
        CHECK(v == 0.0);
    CHECK_FALSE(z.fit);

    const std::vector<double> bad{1, 2};
    CHECK_THROWS(modulus_curve(noise, 1, bad));

    std::ostringstream os;
    const std::vector<SmoothnessCurve> curves{c};
    write_curves_csv(os, curves);
    CHECK(first_line(os.str()) == "curve,scale,value,stderr,slope,slope_stderr,fit_lo,fit_hi");
}

TEST_CASE("CSV writer quoting and widths")
{
    std::ostringstream os;
    CsvWriter w(os, {"name", "value"});
    w.row(std::vector<CsvField>{std::string("points:0,0;2,0"), 0.5});
    w.row(std::vector<CsvField>{std::string("say \"hi\""), std::int64_t(3)});
    w.row({1.0 / 3, INFINITY});
    CHECK(os.str() == "name,value\n\"points:0,0;2,0\",0.5\n\"say \"\"hi\"\"\",3\n0.333333333333333,inf\n");
    CHECK_THROWS(w.row({1.0}));
}
