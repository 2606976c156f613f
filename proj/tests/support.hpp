#pragma once

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "deadleaves/covariogram.hpp"
#include "deadleaves/simulator.hpp"

namespace testing {

/// Upper-tail p-value of Pearson's statistic.
inline double chi_square_p(std::span<const double> observed, std::span<const double> expected)
{
    double stat = 0;
    std::size_t bins = 0;
    for (std::size_t i = 0; i < observed.size(); ++i)
    {
        if (expected[i] <= 0)
            continue;
        stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
        ++bins;
    }
    const boost::math::chi_squared dist(static_cast<double>(bins - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Composite midpoint rule with n panels.
inline double midpoint(const std::function<double(double)>& f, double a, double b, std::size_t n)
{
    const double h = (b - a) / static_cast<double>(n);
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i)
        sum += f(a + (static_cast<double>(i) + 0.5) * h);
    return sum * h;
}

/// Brute-force two-point probability for finite 0 < r0 < r1: midpoint rule
/// in t = log u over [log r0, log r1], both integrands carrying u^(3-α).
inline double brute_two_point_p(const std::function<double(double)>& gamma, double gamma0, double alpha, double r0,
                                double r1, double x, std::size_t panels = 1000000)
{
    const double same = midpoint(
        [&](double t) {
            const double u = std::exp(t);
            return gamma(x / u) * std::pow(u, 3 - alpha);
        },
        std::log(r0), std::log(r1), panels);
    const double whole = midpoint([&](double t) { return gamma0 * std::pow(std::exp(t), 3 - alpha); }, std::log(r0),
                                  std::log(r1), panels);
    return same / (2 * whole - same);
}

/// Relabels every pixel from scratch: the owner is the leaf of smallest rank
/// whose grain contains the pixel center. Needs the kept leaves.
inline std::vector<std::uint32_t> brute_force_labels(const deadleaves::LabelField& field,
                                                     const deadleaves::SimWindow& window)
{
    std::vector<std::uint32_t> out(window.pixel_count(), deadleaves::kUnlabeled);
    for (std::uint32_t row = 0; row < window.height; ++row)
        for (std::uint32_t col = 0; col < window.width; ++col)
        {
            const deadleaves::Vec2 p = window.pixel_center(col, row);
            std::uint32_t best = deadleaves::kUnlabeled;
            for (const deadleaves::Leaf& leaf : field.leaves)
                if (leaf.rank < best && leaf.shape.contains(p - leaf.center))
                    best = leaf.rank;
            out[std::size_t(row) * window.width + col] = best;
        }
    return out;
}

}  // namespace testing
