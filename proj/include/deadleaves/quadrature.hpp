#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace deadleaves {

struct QuadratureConfig
{
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    std::size_t max_subdivisions = 4000;
    //! Exponents within this distance of -1 use the logarithmic antiderivative
    //! (α = 3 in the u^(2-α) kernel, α = 2 in u^(1-α)).
    double log_kernel_snap = 1e-9;

    void validate() const;
};

struct QuadratureResult
{
    double value = 0;
    double error = 0;
    std::size_t intervals = 0;
    bool converged = false;
};

/// Globally adaptive 15-point Gauss-Kronrod integration of f over [a, b].
/// Optional interior breakpoints seed the initial partition (kinks, scale
/// changes); points outside (a, b) are ignored.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, const QuadratureConfig& config,
                           std::span<const double> breakpoints = {});

struct GaussNode
{
    double x;
    double w;
};

/// n-point Gauss-Legendre rule on [-1, 1].
std::vector<GaussNode> gauss_legendre(std::size_t n);

/// ∫_lo^hi u^k du for 0 <= lo <= hi <= ∞. Returns +∞ when the integral
/// diverges. Exponents within `snap` of -1 use log(hi/lo).
double power_integral(double lo, double hi, double k, double snap = 1e-9);

}  // namespace deadleaves
