#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "deadleaves/rng.hpp"

namespace deadleaves {

struct Vec2
{
    double x = 0;
    double y = 0;

    constexpr Vec2 operator+(Vec2 o) const noexcept { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const noexcept { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const noexcept { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const noexcept { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const noexcept { return {x / s, y / s}; }
    constexpr bool operator==(const Vec2&) const noexcept = default;
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }
inline Vec2 rotate(Vec2 p, double angle) noexcept
{
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

/// Closed axis-aligned rectangle [lo.x, hi.x] x [lo.y, hi.y]. Zero extent
/// along either axis is allowed (a segment or a single point).
struct Box
{
    Vec2 lo;
    Vec2 hi;

    double width() const noexcept { return hi.x - lo.x; }
    double height() const noexcept { return hi.y - lo.y; }
    double area() const noexcept { return width() * height(); }
    //! Euclidean distance from p to the box (0 inside).
    double distance(Vec2 p) const noexcept;
};

class InvalidShape : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

enum class ShapeKind
{
    disk,
    rectangle,
    polygon
};

/// A compact convex grain centered on the origin.
///
/// Membership is for the closed set. Every shape contains a disk D(a1) and is
/// contained in D(a2) with 0 < a1 <= a2, where a1 = inner_radius() and
/// a2 = outer_radius().
class Shape
{
  public:
    static Shape disk(double radius);
    //! Rectangle with the given side lengths, rotated counterclockwise by `angle`.
    static Shape rectangle(double width, double height, double angle = 0.0);
    //! Convex polygon with counterclockwise vertices; the origin must be interior.
    static Shape polygon(std::vector<Vec2> vertices);

    ShapeKind kind() const noexcept { return kind_; }

    bool contains(Vec2 p) const noexcept;
    double area() const noexcept;
    double perimeter() const noexcept;
    double inner_radius() const noexcept;
    double outer_radius() const noexcept;

    //! Homothety by s > 0 about the origin.
    Shape scaled(double s) const;
    //! Counterclockwise rotation about the origin.
    Shape rotated(double angle) const;

    //! Whether (center + shape) meets the box.
    bool intersects(Vec2 center, const Box& box) const noexcept;

    //! Length of the projection of the shape onto the line orthogonal to `direction`.
    double projection_width(Vec2 direction) const noexcept;

    //! Area of shape ∩ (offset + shape).
    double self_intersection_area(Vec2 offset) const;

    //! Area of the erosion by the disk D(r): {c : c + D(r) ⊆ shape}.
    double eroded_area(double r) const;
    //! Area of the dilation by the disk D(r) (Steiner formula).
    double dilated_area(double r) const noexcept;

    //! Polygon vertices (counterclockwise); empty for disks.
    std::span<const Vec2> vertices() const noexcept { return vertices_; }
    double radius() const noexcept { return radius_; }
    double width() const noexcept { return width_; }
    double height() const noexcept { return height_; }
    double angle() const noexcept { return angle_; }

  private:
    Shape() = default;

    ShapeKind kind_ = ShapeKind::disk;
    double radius_ = 0;  // disk
    double width_ = 0;   // rectangle
    double height_ = 0;
    double angle_ = 0;
    double cos_ = 1;
    double sin_ = 0;
    std::vector<Vec2> vertices_;  // rectangle corners or polygon
};

inline bool contains(const Shape& shape, Vec2 p) noexcept { return shape.contains(p); }
inline double area(const Shape& shape) noexcept { return shape.area(); }

/// Area of window ⊕ D(r), the region sampled by sample_hitting_center.
double dilated_box_area(const Box& window, double r) noexcept;

/// Area of the proposal region window ⊕ D(outer_radius(shape)).
inline double hitting_region_area(const Shape& shape, const Box& window) noexcept
{
    return dilated_box_area(window, shape.outer_radius());
}

/// Uniform point of window ⊕ D(r).
Vec2 sample_dilated_box(const Box& window, double r, Rng& rng) noexcept;

/// Center c uniform on {c : (c + shape) ∩ window ≠ ∅}.
///
/// Draws uniformly from window ⊕ D(outer_radius) and rejects centers whose
/// translate misses the window. Returns nothing only if `max_attempts`
/// consecutive proposals are rejected.
std::optional<Vec2> sample_hitting_center(const Shape& shape, const Box& window, Rng& rng,
                                          std::size_t max_attempts = 1u << 20);

enum class RotationLaw
{
    fixed,
    uniform
};

/// Law of the unit-scale grain Y: a base shape with an optional random
/// rotation. Rectangles rotate uniformly on [0, π), polygons on [0, 2π).
class ShapeDistribution
{
  public:
    static ShapeDistribution disk(double radius = 1.0);
    static ShapeDistribution rectangle(double width, double height, RotationLaw law, double angle = 0.0);
    static ShapeDistribution polygon(std::vector<Vec2> vertices, RotationLaw law, double angle = 0.0);

    Shape sample(Rng& rng) const;

    const Shape& base() const noexcept { return base_; }
    RotationLaw rotation() const noexcept { return law_; }
    double rotation_period() const noexcept;
    //! True when every realization is the same set.
    bool deterministic() const noexcept { return base_.kind() == ShapeKind::disk || law_ == RotationLaw::fixed; }
    bool isotropic() const noexcept { return base_.kind() == ShapeKind::disk || law_ == RotationLaw::uniform; }

    double inner_radius() const noexcept { return base_.inner_radius(); }
    double outer_radius() const noexcept { return base_.outer_radius(); }
    //! E area(Y); rotation does not change the area.
    double mean_area() const noexcept { return base_.area(); }
    double mean_perimeter() const noexcept { return base_.perimeter(); }

  private:
    ShapeDistribution(Shape base, RotationLaw law) : base_(std::move(base)), law_(law) {}

    Shape base_;
    RotationLaw law_;
};

}  // namespace deadleaves
