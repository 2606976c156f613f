#include "deadleaves/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace deadleaves {
namespace {

constexpr double kLogSnap = 1e-9;

}  // namespace

SizeLaw::SizeLaw(double alpha, double r0, double r1) : alpha_(alpha), r0_(r0), r1_(r1)
{
    if (!(alpha > 1) || !std::isfinite(alpha))
        throw ParameterError("size law: alpha must be finite and > 1 (got " + std::to_string(alpha) + ")");
    if (!(r0 >= 0) || !std::isfinite(r0))
        throw ParameterError("size law: r0 must be finite and >= 0");
    if (!(r1 > r0))
        throw ParameterError("size law: r1 must exceed r0");
    if (r1 == kInfinity && !(alpha > 3))
        throw ParameterError("size law: r1 = infinity requires alpha > 3 (the mean dilated grain area diverges "
                             "otherwise)");
}

bool SizeLaw::log_kernel() const noexcept
{
    return std::abs(alpha_ - 3) <= kLogSnap;
}

double SizeLaw::normalizer() const noexcept
{
    if (r0_ == 0)
        return 0;
    const double e = 1 - alpha_;
    const double upper = unbounded() ? 0.0 : std::pow(r1_, e);
    return (alpha_ - 1) / (std::pow(r0_, e) - upper);
}

double SizeLaw::density(double r) const noexcept
{
    if (r < r0_ || r > r1_)
        return 0;
    return normalizer() * std::pow(r, -alpha_);
}

double SizeLaw::sample(Rng& rng) const
{
    if (r0_ == 0)
        throw ParameterError("size law: cannot sample scales with r0 = 0");
    return sample_truncated_power(alpha_, r0_, r1_, rng);
}

double SizeLaw::kernel_antiderivative(double u) const noexcept
{
    if (log_kernel())
        return std::log(u);
    const double e = 3 - alpha_;
    if (u == kInfinity)
        return e < 0 ? 0.0 : kInfinity;
    return std::pow(u, e) / e;
}

double SizeLaw::kernel_inverse(double w) const noexcept
{
    if (log_kernel())
        return std::exp(w);
    const double e = 3 - alpha_;
    return std::pow(e * w, 1 / e);
}

double sample_truncated_power(double beta, double lo, double hi, Rng& rng)
{
    const double u = rng.uniform();
    if (std::abs(beta - 1) <= kLogSnap)
        return lo * std::pow(hi / lo, u);
    const double e = 1 - beta;
    if (hi == kInfinity)
        return lo * std::pow(1 - u, 1 / e);
    const double a = std::pow(lo, e), b = std::pow(hi, e);
    return std::clamp(std::pow(a + u * (b - a), 1 / e), lo, hi);
}

ModelSpec::ModelSpec(ShapeDistribution shape_, SizeLaw size_, Covariogram covariogram_)
    : shape(std::move(shape_)), size(size_), covariogram(std::move(covariogram_))
{
    const double expected = 2 * shape.outer_radius();
    if (std::abs(covariogram.support_radius() - expected) > 1e-9 * expected)
        throw ParameterError("model: covariogram support radius does not match 2 a2 of the grain law");
}

ModelSpec ModelSpec::make(ShapeDistribution shape, SizeLaw size)
{
    Covariogram cov = Covariogram::analytic(shape);
    return ModelSpec(std::move(shape), size, std::move(cov));
}

}  // namespace deadleaves
