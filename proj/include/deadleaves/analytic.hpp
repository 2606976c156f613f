#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "deadleaves/model.hpp"
#include "deadleaves/quadrature.hpp"

namespace deadleaves {

/// Finite set of points in world units.
struct PointSet
{
    std::vector<Vec2> points;
};

/// Closed disk D(radius) centered at the origin.
struct DiskCompact
{
    double radius = 0;
};

using Compact = std::variant<PointSet, DiskCompact>;

class UnsupportedCompact : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Numerator and deficit integrals of the two-point probability, up to the
/// common factor η:
///   same_part = ∫ γ̃(x/u) u^(2-α) du
///   deficit   = ∫ (γ̃(0) - γ̃(x/u)) u^(2-α) du
/// over [r0, r1], so that p = same_part / (same_part + 2 deficit).
struct TwoPointIntegrals
{
    double same_part = 0;
    double deficit = 0;
};

TwoPointIntegrals two_point_integrals(const ModelSpec& model, Vec2 x, const QuadratureConfig& quad = {});

/// Probability that 0 and x lie in the same visible part.
///
/// For r0 = 0 and α >= 3 this returns the degenerate limit 1(x = 0) without
/// any quadrature.
double two_point_p(const ModelSpec& model, Vec2 x, const QuadratureConfig& quad = {});

/// 1 - two_point_p, computed without cancellation for small |x|.
double two_point_p_complement(const ModelSpec& model, Vec2 x, const QuadratureConfig& quad = {});

/// Probability that the compact lies in the interior of a single visible part.
/// Supports point sets of at most two points and disks.
double q_functional(const ModelSpec& model, const Compact& compact, const QuadratureConfig& quad = {});

struct McConfig
{
    std::size_t strata = 64;
    std::size_t samples_per_stratum = 4096;
    std::uint64_t seed = 1;
};

struct QnResult
{
    double value = 0;
    double std_error = 0;
    //! Per-compact factors of the numerator and denominator products
    //! (each without the normalizer η, which cancels).
    std::vector<double> numerator_terms;
    std::vector<double> denominator_terms;
    double numerator = 0;
    double denominator = 0;
};

/// Probability that the point sets K1..Kn lie in n distinct visible parts
/// whose leaves fell in the order K1 first (deepest) ... Kn last (topmost).
///
/// Each factor integrates over the scale by stratified sampling of the
/// variable w = ∫ u^(2-α) du and over grain shape and center by hit-or-miss
/// Monte Carlo; the standard error is propagated with the delta method.
QnResult q_n_functional(const ModelSpec& model, std::span<const PointSet> compacts, const McConfig& mc = {});

enum class AsymptoticRegime
{
    large_scale,  //!< α > 3: p(r0, ∞, x) ~ g (x/r0)^(3-α) as x/r0 → ∞
    small_scale,  //!< 2 < α < 3: 1 - p(0, r1, x) ~ g (x/r1)^(3-α) as x/r1 → 0
    log_linear,   //!< α = 2: 1 - p(0, r1, x) ~ g (x/r1) log(x/r1)
    linear        //!< 1 < α < 2: 1 - p(0, r1, x) ~ g (x/r1)
};

struct AsymptoticConstant
{
    AsymptoticRegime regime;
    double g = 0;
    double exponent = 0;
    //! Name of the scale the lag is measured against ("r0" or "r1").
    std::string reference;
};

/// Constant and exponent of the leading-order behaviour of p near its
/// degenerate end. Only α (and the covariogram along `direction`) matter.
/// g is reported positive; α = 3 has no power-law expansion and throws.
AsymptoticConstant asymptotic_constant(const ModelSpec& model, const QuadratureConfig& quad = {},
                                       Vec2 direction = {1, 0});

enum class DegenerateRegime
{
    constant_field,  //!< 1 < α < 3, r1 → ∞: p → 1
    white_noise,     //!< α > 3, r0 → 0: p → 0
    log_ratio        //!< α = 3: p (1 - 2 log r0 / log r1) → 1
};

struct TrendPoint
{
    double r0 = 0;
    double r1 = 0;
    double p = 0;
    double metric = 0;  //!< p, or p (1 - 2 log r0 / log r1) at α = 3
};

struct TrendReport
{
    DegenerateRegime regime;
    double target = 0;
    std::vector<TrendPoint> points;
    bool monotone = false;
    double final_metric = 0;
};

/// Evaluates p(r0, r1, x) along a parameter schedule approaching a degenerate
/// limit and reports whether it moves monotonically toward the target.
TrendReport degenerate_limit_check(const ShapeDistribution& shape, double alpha,
                                   std::span<const std::pair<double, double>> schedule, double x,
                                   const QuadratureConfig& quad = {});

}  // namespace deadleaves
