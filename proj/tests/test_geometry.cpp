#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "deadleaves/geometry.hpp"
#include "support.hpp"

using namespace deadleaves;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<ShapeDistribution> all_distributions()
{
    const std::vector<Vec2> pentagon{{1, 0}, {0.3, 0.95}, {-0.8, 0.6}, {-0.8, -0.6}, {0.3, -0.95}};
    return {ShapeDistribution::disk(1),
            ShapeDistribution::disk(0.4),
            ShapeDistribution::rectangle(2, 1, RotationLaw::fixed, 0.3),
            ShapeDistribution::rectangle(1.5, 0.5, RotationLaw::uniform),
            ShapeDistribution::polygon(pentagon, RotationLaw::fixed),
            ShapeDistribution::polygon(pentagon, RotationLaw::uniform)};
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d)
{
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return cross(q - p, r - p); };
    const double d1 = orient(c, d, a), d2 = orient(c, d, b), d3 = orient(a, b, c), d4 = orient(a, b, d);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

// Independent hit test for polygons: a vertex in the box, a box corner in the
// polygon, or crossing edges.
bool polygon_hits_box(const Shape& s, Vec2 c, const Box& b)
{
    const auto v = s.vertices();
    for (Vec2 p : v)
    {
        const Vec2 q = p + c;
        if (q.x >= b.lo.x && q.x <= b.hi.x && q.y >= b.lo.y && q.y <= b.hi.y)
            return true;
    }
    const Vec2 corners[4] = {b.lo, {b.hi.x, b.lo.y}, b.hi, {b.lo.x, b.hi.y}};
    for (Vec2 k : corners)
        if (s.contains(k - c))
            return true;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (int e = 0; e < 4; ++e)
            if (segments_cross(v[i] + c, v[(i + 1) % v.size()] + c, corners[e], corners[(e + 1) % 4]))
                return true;
    return false;
}

}  // namespace

TEST_CASE("contains examples")
{
    CHECK(contains(Shape::disk(1), {0, 0}));
    CHECK_FALSE(contains(Shape::disk(1), {2, 0}));
    const Shape diamond = Shape::rectangle(1, 1, kPi / 4);
    CHECK(contains(diamond, {0.70, 0}));
    CHECK_FALSE(contains(diamond, {0.71, 0}));
    CHECK(contains(Shape::disk(1), {1, 0}));  // closed set
}

TEST_CASE("rotated square membership agrees with a rasterized oracle")
{
    // Point-in-polygon by the crossing rule on the explicit corners.
    const double h = std::sqrt(0.5);
    const std::vector<Vec2> corners{{h, 0}, {0, h}, {-h, 0}, {0, -h}};
    const Shape diamond = Shape::rectangle(1, 1, kPi / 4);
    int mismatches = 0;
    for (int i = -100; i <= 100; ++i)
        for (int j = -100; j <= 100; ++j)
        {
            const Vec2 p{i * 0.00731, j * 0.00731};
            bool inside = false;
            for (std::size_t k = 0, m = corners.size() - 1; k < corners.size(); m = k++)
                if ((corners[k].y > p.y) != (corners[m].y > p.y) &&
                    p.x < (corners[m].x - corners[k].x) * (p.y - corners[k].y) / (corners[m].y - corners[k].y) +
                              corners[k].x)
                    inside = !inside;
            mismatches += inside != diamond.contains(p);
        }
    CHECK(mismatches == 0);
}

TEST_CASE("area examples")
{
    CHECK(area(Shape::disk(1)) == doctest::Approx(kPi));
    for (double t : {0.0, 0.4, 1.3, 2.9})
        CHECK(area(Shape::rectangle(2, 3, t)) == doctest::Approx(6));
    // The unit right triangle, translated so the origin is interior.
    const double c = 1.0 / 3;
    CHECK(area(Shape::polygon({{-c, -c}, {1 - c, -c}, {-c, 1 - c}})) == doctest::Approx(0.5));
}

TEST_CASE("malformed polygons are rejected at construction")
{
    CHECK_THROWS_AS(Shape::polygon({{1, 0}, {0, 1}}), InvalidShape);
    CHECK_THROWS_AS(Shape::polygon({{1, 0}, {-1, -1}, {-1, 1}}), InvalidShape);  // clockwise
    CHECK_THROWS_AS(Shape::polygon({{1, -1}, {1, 1}, {-1, -1}, {-1, 1}}), InvalidShape);  // bow tie
    CHECK_THROWS_AS(Shape::polygon({{2, 1}, {3, 1}, {2, 2}}), InvalidShape);  // origin outside
    CHECK_THROWS_AS(Shape::polygon({{1, 0}, {1, 1}, {0, 1}, {-1, 0.5}, {0, 0.2}, {0, -1}}), InvalidShape);
    CHECK_THROWS_AS(Shape::disk(0), InvalidShape);
    CHECK_THROWS_AS(Shape::rectangle(1, -1), InvalidShape);
}

TEST_CASE("every sampled shape sits between D(a1) and D(a2)")
{
    Rng rng(7);
    for (const ShapeDistribution& dist : all_distributions())
    {
        const double a1 = dist.inner_radius(), a2 = dist.outer_radius();
        REQUIRE(0 < a1);
        REQUIRE(a1 <= a2);
        for (int s = 0; s < 20; ++s)
        {
            const Shape shape = dist.sample(rng);
            CHECK(area(shape) >= kPi * a1 * a1 * (1 - 1e-12));
            CHECK(area(shape) <= kPi * a2 * a2 * (1 + 1e-12));
            int bad = 0;
            for (int i = 0; i < 10000; ++i)
            {
                const Vec2 p{rng.uniform(-1.2 * a2, 1.2 * a2), rng.uniform(-1.2 * a2, 1.2 * a2)};
                if (shape.contains(p) && norm(p) > a2 * (1 + 1e-12))
                    ++bad;
                if (norm(p) < a1 && !shape.contains(p))
                    ++bad;
            }
            CHECK(bad == 0);
        }
    }
}

TEST_CASE("areas match Monte Carlo within 3 standard errors")
{
    Rng rng(11);
    for (const ShapeDistribution& dist : all_distributions())
    {
        const Shape shape = dist.sample(rng);
        const double a2 = shape.outer_radius();
        const double box = 4 * a2 * a2;
        const std::size_t n = 1000000;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n; ++i)
            hits += shape.contains({rng.uniform(-a2, a2), rng.uniform(-a2, a2)});
        const double f = double(hits) / n;
        const double se = box * std::sqrt(f * (1 - f) / n);
        CHECK(std::abs(box * f - area(shape)) < 3 * se);
    }
}

TEST_CASE("acceptance region of a disk grain")
{
    const double w = 1.5, r = 0.7;
    const Box window{{0, 0}, {w, w}};
    CHECK(dilated_box_area(window, r) == doctest::Approx((w + 2 * r) * (w + 2 * r) - (4 - kPi) * r * r));

    // Rejection rate from the bounding square estimates the same area.
    Rng rng(3);
    const std::size_t n = 400000;
    std::size_t in = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const Vec2 c{rng.uniform(-r, w + r), rng.uniform(-r, w + r)};
        in += Shape::disk(r).intersects(c, window);
    }
    const double sq = (w + 2 * r) * (w + 2 * r);
    const double f = double(in) / n;
    CHECK(std::abs(sq * f - dilated_box_area(window, r)) < 3 * sq * std::sqrt(f * (1 - f) / n));
}

TEST_CASE("hitting centers hit")
{
    Rng rng(5);
    const Box unit{{0, 0}, {1, 1}};
    for (int i = 0; i < 2000; ++i)
    {
        const auto c = sample_hitting_center(Shape::disk(1), unit, rng);
        REQUIRE(c);
        CHECK(unit.distance(*c) <= 1);
    }
    const Shape poly = ShapeDistribution::polygon({{1, 0}, {0.3, 0.95}, {-0.8, 0.6}, {-0.8, -0.6}, {0.3, -0.95}},
                                                  RotationLaw::fixed)
                           .base()
                           .scaled(0.8);
    std::size_t missed = 0;
    for (int i = 0; i < 100000; ++i)
    {
        const auto c = sample_hitting_center(poly, unit, rng);
        REQUIRE(c);
        missed += !polygon_hits_box(poly, *c, unit);
    }
    CHECK(missed == 0);
}

TEST_CASE("separating-axis test agrees with an edge-crossing oracle")
{
    Rng rng(9);
    const ShapeDistribution dist = ShapeDistribution::rectangle(1.2, 0.3, RotationLaw::uniform);
    const Box b{{0, 0}, {1, 0.5}};
    int mismatches = 0;
    for (int i = 0; i < 50000; ++i)
    {
        const Shape s = dist.sample(rng);
        const Vec2 c{rng.uniform(-1, 2), rng.uniform(-1, 1.5)};
        mismatches += s.intersects(c, b) != polygon_hits_box(s, c, b);
    }
    CHECK(mismatches == 0);
}

TEST_CASE("hitting centers of a disk are uniform on the acceptance region")
{
    Rng rng(21);
    const double w = 1, r = 0.5;
    const Box window{{0, 0}, {w, w}};
    constexpr int bins = 12;
    const double lo = -r, span = w + 2 * r, cell = span / bins;
    std::vector<double> observed(bins * bins, 0), expected(bins * bins, 0);
    const std::size_t n = 200000;
    for (std::size_t i = 0; i < n; ++i)
    {
        const Vec2 c = *sample_hitting_center(Shape::disk(r), window, rng);
        const int bx = std::min(bins - 1, int((c.x - lo) / cell)), by = std::min(bins - 1, int((c.y - lo) / cell));
        observed[by * bins + bx] += 1;
    }
    // Bin areas inside window ⊕ D(r) by a fine midpoint grid.
    constexpr int sub = 200;
    for (int by = 0; by < bins; ++by)
        for (int bx = 0; bx < bins; ++bx)
        {
            int inside = 0;
            for (int j = 0; j < sub; ++j)
                for (int i = 0; i < sub; ++i)
                {
                    const Vec2 p{lo + (bx + (i + 0.5) / sub) * cell, lo + (by + (j + 0.5) / sub) * cell};
                    inside += window.distance(p) <= r;
                }
            expected[by * bins + bx] = double(inside) / (sub * sub) * cell * cell;
        }
    double total = 0;
    for (double e : expected)
        total += e;
    for (double& e : expected)
        e *= n / total;
    CHECK(testing::chi_square_p(observed, expected) > 0.01);
}

TEST_CASE("erosion and dilation areas")
{
    CHECK(Shape::disk(2).eroded_area(0.5) == doctest::Approx(kPi * 1.5 * 1.5));
    CHECK(Shape::disk(2).eroded_area(2.5) == 0.0);
    CHECK(Shape::disk(2).dilated_area(0.5) == doctest::Approx(kPi * 2.5 * 2.5));
    const Shape rect = Shape::rectangle(3, 2, 0.7);
    CHECK(rect.eroded_area(0.25) == doctest::Approx(2.5 * 1.5));
    CHECK(rect.eroded_area(1.0) == 0.0);
    CHECK(rect.dilated_area(0.5) == doctest::Approx(6 + 10 * 0.5 + kPi * 0.25));

    // Eroded polygon against a raster of {c : min distance to the boundary >= r}.
    const Shape pent = Shape::polygon({{1, 0}, {0.3, 0.95}, {-0.8, 0.6}, {-0.8, -0.6}, {0.3, -0.95}});
    const double r = 0.2;
    const auto v = pent.vertices();
    const int n = 600;
    double count = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
        {
            const Vec2 p{-1 + 2 * (i + 0.5) / n, -1 + 2 * (j + 0.5) / n};
            if (!pent.contains(p))
                continue;
            bool deep = true;
            for (std::size_t k = 0; k < v.size(); ++k)
            {
                const Vec2 a = v[k], b = v[(k + 1) % v.size()];
                deep = deep && cross(b - a, p - a) / norm(b - a) >= r;
            }
            count += deep;
        }
    CHECK(pent.eroded_area(r) == doctest::Approx(count * 4.0 / (n * n)).epsilon(0.01));
}

TEST_CASE("self intersection of a fixed rectangle")
{
    const Shape rect = Shape::rectangle(2, 1);
    CHECK(rect.self_intersection_area({0.5, 0.25}) == doctest::Approx(1.5 * 0.75));
    CHECK(rect.self_intersection_area({2.5, 0}) == 0.0);
    CHECK(Shape::disk(1).self_intersection_area({1, 0}) == doctest::Approx(2 * kPi / 3 - std::sqrt(3.0) / 2));
}

TEST_CASE("projection widths")
{
    CHECK(Shape::disk(1.5).projection_width({1, 0}) == doctest::Approx(3));
    CHECK(Shape::rectangle(2, 1).projection_width({1, 0}) == doctest::Approx(1));
    CHECK(Shape::rectangle(2, 1).projection_width({0, 1}) == doctest::Approx(2));
    CHECK(Shape::rectangle(1, 1, kPi / 4).projection_width({1, 0}) == doctest::Approx(std::sqrt(2.0)));
}
