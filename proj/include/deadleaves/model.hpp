#pragma once

#include <limits>
#include <stdexcept>

#include "deadleaves/covariogram.hpp"
#include "deadleaves/geometry.hpp"
#include "deadleaves/rng.hpp"

namespace deadleaves {

/// Inadmissible model parameters. The message names the violated constraint.
class ParameterError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Truncated power law f(r) = η 1(r0 <= r <= r1) r^(-α) for the grain scale.
///
/// r0 = 0 is accepted as the limit model (the density itself is then not
/// normalizable); r1 = ∞ is accepted only for α > 3, where the mean dilated
/// area of a grain stays finite.
class SizeLaw
{
  public:
    SizeLaw(double alpha, double r0, double r1);

    double alpha() const noexcept { return alpha_; }
    double r0() const noexcept { return r0_; }
    double r1() const noexcept { return r1_; }
    bool unbounded() const noexcept { return r1_ == kInfinity; }
    //! r0 = 0 with α >= 3: two-point probabilities collapse to 1(x = 0).
    bool degenerate_white_noise() const noexcept { return r0_ == 0 && alpha_ >= 3; }

    //! η = (α - 1) / (r0^(1-α) - r1^(1-α)); 0 when r0 = 0.
    double normalizer() const noexcept;
    double density(double r) const noexcept;

    //! Inverse-CDF draw; requires r0 > 0.
    double sample(Rng& rng) const;

    //! T(u) = ∫ u^(2-α) du, normalized so T(0) = 0 when α < 3 and T(∞) = 0
    //! when α > 3; log(u) at α = 3. Increasing in u.
    double kernel_antiderivative(double u) const noexcept;
    double kernel_inverse(double w) const noexcept;
    //! Whether α is treated as exactly 3.
    bool log_kernel() const noexcept;

  private:
    double alpha_;
    double r0_;
    double r1_;
};

/// Draw from the density ∝ r^(-beta) on [lo, hi] (hi may be ∞ when beta > 1).
double sample_truncated_power(double beta, double lo, double hi, Rng& rng);

/// Dead leaves model with grains X = R Y: shape law of Y, size law of R, and
/// the covariogram of Y.
struct ModelSpec
{
    ShapeDistribution shape;
    SizeLaw size;
    Covariogram covariogram;

    //! Validates that the covariogram support is 2 a2 of the shape law.
    ModelSpec(ShapeDistribution shape, SizeLaw size, Covariogram covariogram);

    //! Uses the closed-form covariogram of the shape law.
    static ModelSpec make(ShapeDistribution shape, SizeLaw size);
    //! Same grains with a different size law.
    ModelSpec with_size(SizeLaw other) const { return ModelSpec(shape, other, covariogram); }
};

}  // namespace deadleaves
