#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace superl {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Planar computational domain: disk, annulus, or axis-aligned rectangle.
class Domain {
  public:
    enum class Kind { Disk, Annulus, Rectangle };

    static Domain disk(Vec2 center, double radius);
    static Domain annulus(Vec2 center, double r_inner, double r_outer);
    static Domain rectangle(Vec2 lo, Vec2 hi);

    Kind kind() const { return kind_; }
    Vec2 center() const { return center_; }
    double inner_radius() const { return r_inner_; }
    double outer_radius() const { return r_outer_; }
    Vec2 lo() const { return lo_; }
    Vec2 hi() const { return hi_; }

    bool contains(Vec2 p) const;
    double area() const;

    /// Bounding box [lo, hi].
    void bounds(Vec2& lo, Vec2& hi) const;

    /// Smallest extent across the domain (limits admissible grid spacing).
    double min_extent() const;

    /// Vertical section {y : (x,y) in domain} as up to two disjoint intervals.
    /// Returns the number of intervals written to `iv`.
    int section(double x, std::array<double, 4>& iv) const;

    /// Outward unit normal at a point assumed on (or near) the boundary.
    Vec2 outward_normal(Vec2 p) const;

  private:
    Kind kind_ = Kind::Disk;
    Vec2 center_{};
    double r_inner_ = 0.0;
    double r_outer_ = 1.0;
    Vec2 lo_{}, hi_{};
};

/// Circle contour for line integrals.
struct Circle {
    Vec2 center;
    double radius = 1.0;
};

/// Dyadic annulus B_{2t} \ B_t.
struct AnnulusRing {
    Vec2 center;
    double t = 0.0;  // inner radius; outer radius is 2t
};

/// Covered length of [lo, hi] by the interval list `iv` (n intervals).
double interval_coverage(const std::array<double, 4>& iv, int n, double lo, double hi);

/// Intersect two interval lists, writing the result to `out`; returns count.
int interval_intersect(const std::array<double, 4>& a, int na,
                       const std::array<double, 4>& b, int nb,
                       std::array<double, 4>& out);

}  // namespace superl
