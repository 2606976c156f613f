#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "deadleaves/geometry.hpp"
#include "deadleaves/rng.hpp"

namespace deadleaves {

enum class CovariogramMethod
{
    analytic,
    tabulated_mc
};

/// Expected geometric covariogram y ↦ E_Y area(int Y ∩ (y + int Y)) of a
/// unit-scale grain law.
///
/// Evaluators are immutable after construction and safe to share between
/// threads. `deriv0(u)` is the magnitude of the right derivative of
/// x ↦ γ̃(x u) at 0; the covariogram decreases, so the derivative itself is
/// -deriv0(u).
class Covariogram
{
  public:
    using Evaluator = std::function<double(Vec2)>;
    using DirectionalRate = std::function<double(Vec2)>;

    Covariogram(Evaluator eval, double gamma0, double support_radius, DirectionalRate deriv0, bool isotropic,
                CovariogramMethod method);

    //! Closed-form covariogram for the supported grain laws.
    static Covariogram analytic(const ShapeDistribution& dist);

    double operator()(Vec2 y) const;
    //! Value at distance r along `direction` (defaults to the x axis).
    double radial(double r, Vec2 direction = {1, 0}) const;

    double gamma0() const noexcept { return gamma0_; }
    double support_radius() const noexcept { return support_radius_; }
    double deriv0(Vec2 direction = {1, 0}) const;
    bool isotropic() const noexcept { return isotropic_; }
    CovariogramMethod method() const noexcept { return method_; }

    /// CSV with header `angle,radius,value` on an n_angles x n_radii grid
    /// over [0, π) x [0, support_radius].
    void write_csv(std::ostream& os, std::size_t n_angles, std::size_t n_radii) const;

  private:
    Evaluator eval_;
    DirectionalRate deriv0_;
    double gamma0_;
    double support_radius_;
    bool isotropic_;
    CovariogramMethod method_;
};

/// Lens area 2r² arccos(y/2r) - (y/2)√(4r² - y²) for y < 2r, else 0.
double covariogram_disk(double radius, double y);

/// Covariogram of an axis-aligned rectangle: (w - |y.x|)₊ (h - |y.y|)₊.
double covariogram_rectangle(double width, double height, Vec2 y);

struct McEstimate
{
    double estimate = 0;
    double std_error = 0;
};

/// Hit-or-miss Monte Carlo estimate of γ̃(y): each sample draws a grain and
/// a point uniform in D(a2); the point scores π a2² when it lies in both the
/// grain and its translate by y.
McEstimate covariogram_mc(const ShapeDistribution& dist, Vec2 y, std::size_t n_samples, Rng& rng);

struct TabulationGrid
{
    std::size_t n_angles = 64;
    std::size_t n_radii = 257;
    std::size_t samples_per_node = 20000;
};

/// Monte Carlo covariogram tabulated on an (angle in [0, π)) x (radius in
/// [0, 2 a2]) grid and interpolated bilinearly. γ̃(0) is the exact mean area
/// and the radial derivative at 0 comes from the first radial cell.
Covariogram tabulate_covariogram(const ShapeDistribution& dist, const TabulationGrid& grid, Rng& rng);

struct Deriv0Estimate
{
    double rate = 0;
    //! Finite-difference slopes (γ̃(0) - γ̃(h u)) / h, one per step.
    std::vector<double> slopes;
    bool gamma2_violation_suspected = false;
};

/// Richardson-extrapolated magnitude of the right derivative of x ↦ γ̃(x u)
/// at 0. `steps` must be positive and strictly decreasing. Flags a suspected
/// violation of right-differentiability when the finite-difference slopes are
/// not monotone within `tolerance` (relative).
Deriv0Estimate deriv0_estimate(const Covariogram& cov, std::span<const double> steps, Vec2 direction = {1, 0},
                               double tolerance = 1e-6);

}  // namespace deadleaves
