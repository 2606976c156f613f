#include "deadleaves/geometry.hpp"

#include <algorithm>
#include <limits>

namespace deadleaves {
namespace {

constexpr double kPi = std::numbers::pi;

double polygon_area(std::span<const Vec2> v) noexcept
{
    double twice = 0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i)
        twice += cross(v[i], v[(i + 1) % n]);
    return 0.5 * twice;
}

// Keeps the part of a convex polygon where dot(normal, p) >= offset.
std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, Vec2 normal, double offset)
{
    std::vector<Vec2> out;
    const std::size_t n = poly.size();
    if (n == 0)
        return out;
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i)
    {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        const double da = dot(normal, a) - offset;
        const double db = dot(normal, b) - offset;
        if (da >= 0)
            out.push_back(a);
        if ((da >= 0) != (db >= 0))
        {
            const double t = da / (da - db);
            out.push_back(a + (b - a) * t);
        }
    }
    return out;
}

// Inward unit normal and offset of the half-plane bounded by edge a -> b of
// a counterclockwise polygon.
std::pair<Vec2, double> edge_half_plane(Vec2 a, Vec2 b) noexcept
{
    const Vec2 e = b - a;
    const double len = norm(e);
    const Vec2 n{-e.y / len, e.x / len};
    return {n, dot(n, a)};
}

double lens_area(double r, double d) noexcept
{
    if (d >= 2 * r)
        return 0.0;
    return 2 * r * r * std::acos(d / (2 * r)) - 0.5 * d * std::sqrt(4 * r * r - d * d);
}

std::vector<Vec2> rectangle_corners(double w, double h, double c, double s)
{
    const Vec2 u{c * w / 2, s * w / 2};
    const Vec2 v{-s * h / 2, c * h / 2};
    return {-u - v, u - v, u + v, v - u};
}

}  // namespace

double Box::distance(Vec2 p) const noexcept
{
    const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
    const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
    return std::hypot(dx, dy);
}

Shape Shape::disk(double radius)
{
    if (!(radius > 0) || !std::isfinite(radius))
        throw InvalidShape("disk radius must be positive and finite");
    Shape s;
    s.kind_ = ShapeKind::disk;
    s.radius_ = radius;
    return s;
}

Shape Shape::rectangle(double width, double height, double angle)
{
    if (!(width > 0) || !(height > 0) || !std::isfinite(width) || !std::isfinite(height))
        throw InvalidShape("rectangle sides must be positive and finite");
    Shape s;
    s.kind_ = ShapeKind::rectangle;
    s.width_ = width;
    s.height_ = height;
    s.angle_ = angle;
    s.cos_ = std::cos(angle);
    s.sin_ = std::sin(angle);
    s.vertices_ = rectangle_corners(width, height, s.cos_, s.sin_);
    return s;
}

Shape Shape::polygon(std::vector<Vec2> vertices)
{
    const std::size_t n = vertices.size();
    if (n < 3)
        throw InvalidShape("polygon needs at least 3 vertices");
    double turning = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const Vec2 a = vertices[i], b = vertices[(i + 1) % n], c = vertices[(i + 2) % n];
        const Vec2 e1 = b - a, e2 = c - b;
        if (norm(e1) == 0)
            throw InvalidShape("polygon has repeated vertices");
        if (!(cross(e1, e2) > 0))
            throw InvalidShape("polygon must be strictly convex with counterclockwise vertices");
        if (!(cross(e1, Vec2{} - a) > 0))
            throw InvalidShape("polygon must contain the origin in its interior");
        turning += std::atan2(cross(e1, e2), dot(e1, e2));
    }
    // All-left-turn polygons that wind more than once (pentagrams) are self-intersecting.
    if (std::abs(turning - 2 * kPi) > 1e-9)
        throw InvalidShape("polygon is self-intersecting");
    Shape s;
    s.kind_ = ShapeKind::polygon;
    s.vertices_ = std::move(vertices);
    return s;
}

bool Shape::contains(Vec2 p) const noexcept
{
    switch (kind_)
    {
    case ShapeKind::disk:
        return p.x * p.x + p.y * p.y <= radius_ * radius_;
    case ShapeKind::rectangle: {
        const double u = cos_ * p.x + sin_ * p.y;
        const double v = -sin_ * p.x + cos_ * p.y;
        return std::abs(u) <= 0.5 * width_ && std::abs(v) <= 0.5 * height_;
    }
    case ShapeKind::polygon: {
        const std::size_t n = vertices_.size();
        for (std::size_t i = 0; i < n; ++i)
        {
            const Vec2 a = vertices_[i];
            if (cross(vertices_[(i + 1) % n] - a, p - a) < 0)
                return false;
        }
        return true;
    }
    }
    return false;
}

double Shape::area() const noexcept
{
    switch (kind_)
    {
    case ShapeKind::disk:
        return kPi * radius_ * radius_;
    case ShapeKind::rectangle:
        return width_ * height_;
    case ShapeKind::polygon:
        return polygon_area(vertices_);
    }
    return 0;
}

double Shape::perimeter() const noexcept
{
    switch (kind_)
    {
    case ShapeKind::disk:
        return 2 * kPi * radius_;
    case ShapeKind::rectangle:
        return 2 * (width_ + height_);
    case ShapeKind::polygon: {
        double total = 0;
        for (std::size_t i = 0, n = vertices_.size(); i < n; ++i)
            total += norm(vertices_[(i + 1) % n] - vertices_[i]);
        return total;
    }
    }
    return 0;
}

double Shape::inner_radius() const noexcept
{
    switch (kind_)
    {
    case ShapeKind::disk:
        return radius_;
    case ShapeKind::rectangle:
        return 0.5 * std::min(width_, height_);
    case ShapeKind::polygon: {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0, n = vertices_.size(); i < n; ++i)
        {
            const auto [normal, offset] = edge_half_plane(vertices_[i], vertices_[(i + 1) % n]);
            best = std::min(best, -offset);
        }
        return best;
    }
    }
    return 0;
}

double Shape::outer_radius() const noexcept
{
    switch (kind_)
    {
    case ShapeKind::disk:
        return radius_;
    case ShapeKind::rectangle:
        return 0.5 * std::hypot(width_, height_);
    case ShapeKind::polygon: {
        double best = 0;
        for (const Vec2& v : vertices_)
            best = std::max(best, norm(v));
        return best;
    }
    }
    return 0;
}

Shape Shape::scaled(double s) const
{
    if (!(s > 0))
        throw InvalidShape("scale factor must be positive");
    switch (kind_)
    {
    case ShapeKind::disk:
        return disk(radius_ * s);
    case ShapeKind::rectangle:
        return rectangle(width_ * s, height_ * s, angle_);
    case ShapeKind::polygon: {
        Shape out = *this;
        for (Vec2& v : out.vertices_)
            v = v * s;
        return out;
    }
    }
    return *this;
}

Shape Shape::rotated(double angle) const
{
    switch (kind_)
    {
    case ShapeKind::disk:
        return *this;
    case ShapeKind::rectangle:
        return rectangle(width_, height_, angle_ + angle);
    case ShapeKind::polygon: {
        Shape out = *this;
        for (Vec2& v : out.vertices_)
            v = deadleaves::rotate(v, angle);
        return out;
    }
    }
    return *this;
}

bool Shape::intersects(Vec2 center, const Box& box) const noexcept
{
    if (kind_ == ShapeKind::disk)
        return box.distance(center) <= radius_;

    // Separating axis test between two convex polygons.
    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = min_x, max_y = -min_x;
    for (const Vec2& v : vertices_)
    {
        min_x = std::min(min_x, center.x + v.x);
        max_x = std::max(max_x, center.x + v.x);
        min_y = std::min(min_y, center.y + v.y);
        max_y = std::max(max_y, center.y + v.y);
    }
    if (max_x < box.lo.x || min_x > box.hi.x || max_y < box.lo.y || min_y > box.hi.y)
        return false;

    const Vec2 corners[4] = {box.lo, {box.hi.x, box.lo.y}, box.hi, {box.lo.x, box.hi.y}};
    for (std::size_t i = 0, n = vertices_.size(); i < n; ++i)
    {
        const auto [normal, offset] = edge_half_plane(vertices_[i], vertices_[(i + 1) % n]);
        // Shape lies in dot(normal, p - center) >= offset; the box is separated
        // if all of its corners fall strictly on the other side.
        double box_max = -std::numeric_limits<double>::infinity();
        for (const Vec2& c : corners)
            box_max = std::max(box_max, dot(normal, c - center));
        if (box_max < offset)
            return false;
    }
    return true;
}

double Shape::projection_width(Vec2 direction) const noexcept
{
    const double len = norm(direction);
    const Vec2 perp{-direction.y / len, direction.x / len};
    if (kind_ == ShapeKind::disk)
        return 2 * radius_;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec2& v : vertices_)
    {
        lo = std::min(lo, dot(perp, v));
        hi = std::max(hi, dot(perp, v));
    }
    return hi - lo;
}

double Shape::self_intersection_area(Vec2 offset) const
{
    switch (kind_)
    {
    case ShapeKind::disk:
        return lens_area(radius_, norm(offset));
    case ShapeKind::rectangle: {
        const double u = std::abs(cos_ * offset.x + sin_ * offset.y);
        const double v = std::abs(-sin_ * offset.x + cos_ * offset.y);
        return std::max(0.0, width_ - u) * std::max(0.0, height_ - v);
    }
    case ShapeKind::polygon: {
        std::vector<Vec2> clipped = vertices_;
        for (std::size_t i = 0, n = vertices_.size(); i < n && !clipped.empty(); ++i)
        {
            const auto [normal, c] = edge_half_plane(vertices_[i] + offset, vertices_[(i + 1) % n] + offset);
            clipped = clip_half_plane(clipped, normal, c);
        }
        return clipped.size() < 3 ? 0.0 : std::max(0.0, polygon_area(clipped));
    }
    }
    return 0;
}

double Shape::eroded_area(double r) const
{
    if (r <= 0)
        return area();
    switch (kind_)
    {
    case ShapeKind::disk: {
        const double d = std::max(0.0, radius_ - r);
        return kPi * d * d;
    }
    case ShapeKind::rectangle:
        return std::max(0.0, width_ - 2 * r) * std::max(0.0, height_ - 2 * r);
    case ShapeKind::polygon: {
        // Inner parallel body of a convex polygon: every edge moved inward by r.
        std::vector<Vec2> clipped = vertices_;
        for (std::size_t i = 0, n = vertices_.size(); i < n && !clipped.empty(); ++i)
        {
            const auto [normal, c] = edge_half_plane(vertices_[i], vertices_[(i + 1) % n]);
            clipped = clip_half_plane(clipped, normal, c + r);
        }
        return clipped.size() < 3 ? 0.0 : std::max(0.0, polygon_area(clipped));
    }
    }
    return 0;
}

double Shape::dilated_area(double r) const noexcept
{
    if (r <= 0)
        return area();
    return area() + perimeter() * r + kPi * r * r;
}

double dilated_box_area(const Box& window, double r) noexcept
{
    return window.area() + 2 * (window.width() + window.height()) * r + kPi * r * r;
}

Vec2 sample_dilated_box(const Box& window, double r, Rng& rng) noexcept
{
    for (;;)
    {
        const Vec2 c{rng.uniform(window.lo.x - r, window.hi.x + r), rng.uniform(window.lo.y - r, window.hi.y + r)};
        if (window.distance(c) <= r)
            return c;
    }
}

std::optional<Vec2> sample_hitting_center(const Shape& shape, const Box& window, Rng& rng, std::size_t max_attempts)
{
    const double reach = shape.outer_radius();
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt)
    {
        const Vec2 c = sample_dilated_box(window, reach, rng);
        if (shape.intersects(c, window))
            return c;
    }
    return std::nullopt;
}

ShapeDistribution ShapeDistribution::disk(double radius)
{
    return ShapeDistribution(Shape::disk(radius), RotationLaw::fixed);
}

ShapeDistribution ShapeDistribution::rectangle(double width, double height, RotationLaw law, double angle)
{
    return ShapeDistribution(Shape::rectangle(width, height, angle), law);
}

ShapeDistribution ShapeDistribution::polygon(std::vector<Vec2> vertices, RotationLaw law, double angle)
{
    return ShapeDistribution(Shape::polygon(std::move(vertices)).rotated(angle), law);
}

double ShapeDistribution::rotation_period() const noexcept
{
    return base_.kind() == ShapeKind::polygon ? 2 * kPi : kPi;
}

Shape ShapeDistribution::sample(Rng& rng) const
{
    if (deterministic())
        return base_;
    return base_.rotated(rng.uniform() * rotation_period());
}

}  // namespace deadleaves
