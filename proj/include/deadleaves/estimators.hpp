#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deadleaves/analytic.hpp"
#include "deadleaves/simulator.hpp"

namespace deadleaves {

/// Integer pixel offset.
struct PixelLag
{
    int dx = 0;
    int dy = 0;
};

using PixelSet = std::vector<PixelLag>;

struct ValidationRecord
{
    std::string test_id;
    std::vector<double> params;
    double estimate = 0;
    double std_error = 0;
    double analytic = 0;
    double z = 0;
};

/// (estimate - analytic) / stderr; 0 for an exact match with zero stderr and
/// ±∞ for any other difference with zero stderr.
double z_score(double estimate, double analytic, double std_error) noexcept;

struct ValidationReport
{
    std::vector<std::string> param_names;
    std::vector<ValidationRecord> records;
    //! Requests that could not be run, with the reason.
    std::vector<std::string> rejected;
    double z_threshold = 3;
    double pass_fraction = 0.95;

    std::size_t n_passed() const noexcept;
    //! At least pass_fraction of the records have |z| < z_threshold.
    bool passed() const noexcept;
    //! Header: test_id, <param names>, estimate, stderr, analytic, z.
    void write_csv(std::ostream& os) const;
};

struct EstimatorConfig
{
    //! Lags must fit in this window (pixels).
    std::uint32_t window_width = 512;
    std::uint32_t window_height = 512;
    double pixel_size = 1;
    unsigned threads = 1;
    QuadratureConfig quad{};
    //! Used for the Monte Carlo side of Qⁿ.
    McConfig mc{};
    //! Model for the analytic column; the simulated model when null.
    const ModelSpec* reference = nullptr;
};

/// Label-agreement frequency of the pixel pair (0, lag), one pair per
/// independent realization, against two_point_p. The stderr is the binomial
/// one under the analytic value.
ValidationReport estimate_two_point(const ModelSpec& model, std::span<const PixelLag> lags, std::size_t n_realizations,
                                    std::uint64_t seed, const EstimatorConfig& config = {});

/// Frequency of {K1, ..., Kn lie in n distinct visible parts, K1's leaf the
/// deepest} against q_n_functional. For n = 2 the report also has the
/// reversed order and Q¹(K1 ∪ K2); when both compacts are single pixels it
/// adds a "partition" row for Q²(K1,K2) + Q²(K2,K1) + Q¹(K1 ∪ K2), whose
/// estimate is the fraction of realizations where exactly one event holds.
ValidationReport estimate_qn(const ModelSpec& model, std::span<const PixelSet> compacts, std::size_t n_realizations,
                             std::uint64_t seed, const EstimatorConfig& config = {});

struct SlopeFit
{
    double slope = 0;
    double slope_stderr = 0;
    double intercept = 0;  //!< log2 value at scale 1
    double lo = 0;
    double hi = 0;
    std::size_t n_points = 0;
};

struct SmoothnessCurve
{
    std::string kind;
    std::vector<double> scales;  //!< world units, strictly increasing
    std::vector<double> values;
    std::vector<double> std_errors;
    std::optional<SlopeFit> fit;
    std::string fit_note;
    double effective_r0 = 0;
};

/// Least squares of log2 value on log2 scale over scales in [lo, hi].
/// Refused (nullopt, reason in *note) with fewer than 4 points or non-positive values.
std::optional<SlopeFit> fit_loglog(std::span<const double> scales, std::span<const double> values, double lo,
                                   double hi, std::string* note = nullptr);

struct SmoothnessConfig
{
    std::uint32_t width = 512;
    std::uint32_t height = 512;
    double pixel_size = 1;
    unsigned threads = 1;
    bool white_noise = false;
    //! Cutoff pixel_size / 2^bits when r0 = 0; default_resolution_bits otherwise.
    std::optional<unsigned> resolution_bits;
    //! Fit range in world units; defaults to [4 effective r0, r1 a1 / 4].
    std::optional<double> fit_lo;
    std::optional<double> fit_hi;
};

/// E|I(x + y) - I(x)|^p at the pixel lags, from all horizontal and vertical
/// pairs of each image, averaged over realizations (stderr across them).
SmoothnessCurve increment_moments(const ModelSpec& model, double p, std::span<const int> lags,
                                  std::size_t n_realizations, std::uint64_t seed, const SmoothnessConfig& config = {});

/// (1 - p(y)) E|U - U'|^p with U, U' independent uniforms.
double expected_increment_moment(const ModelSpec& model, double p, Vec2 lag, const QuadratureConfig& quad = {});

/// Modified modulus of smoothness (1 ∨ u^-2) ∫_{|y|<u} ‖Δ_y I‖_p dy on the
/// raster, with the window rescaled so its longer side has unit length and
/// the integral taken as π u² times the mean over integer lags 0 < |y| < u.
/// Scales are in pixels and must exceed 1. The fit uses every scale.
SmoothnessCurve modulus_curve(const LabelField& field, double p, std::span<const double> scales,
                              double pixel_size = 1);

/// Header: curve, scale, value, stderr, slope, slope_stderr, fit_lo, fit_hi.
void write_curves_csv(std::ostream& os, std::span<const SmoothnessCurve> curves);

}  // namespace deadleaves
