#include "superl/geometry.hpp"

#include <algorithm>

namespace superl {

Domain Domain::disk(Vec2 center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
    Domain d;
    d.kind_ = Kind::Disk;
    d.center_ = center;
    d.r_outer_ = radius;
    return d;
}

Domain Domain::annulus(Vec2 center, double r_inner, double r_outer) {
    if (!(r_inner > 0.0) || !(r_outer > r_inner))
        throw std::invalid_argument("annulus radii must satisfy 0 < inner < outer");
    Domain d;
    d.kind_ = Kind::Annulus;
    d.center_ = center;
    d.r_inner_ = r_inner;
    d.r_outer_ = r_outer;
    return d;
}

Domain Domain::rectangle(Vec2 lo, Vec2 hi) {
    if (!(hi.x > lo.x) || !(hi.y > lo.y))
        throw std::invalid_argument("rectangle extents must be positive");
    Domain d;
    d.kind_ = Kind::Rectangle;
    d.lo_ = lo;
    d.hi_ = hi;
    d.center_ = {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
    return d;
}

bool Domain::contains(Vec2 p) const {
    switch (kind_) {
        case Kind::Disk:
            return (p - center_).norm2() <= r_outer_ * r_outer_;
        case Kind::Annulus: {
            double d2 = (p - center_).norm2();
            return d2 >= r_inner_ * r_inner_ && d2 <= r_outer_ * r_outer_;
        }
        case Kind::Rectangle:
            return p.x >= lo_.x && p.x <= hi_.x && p.y >= lo_.y && p.y <= hi_.y;
    }
    return false;
}

double Domain::area() const {
    switch (kind_) {
        case Kind::Disk:
            return M_PI * r_outer_ * r_outer_;
        case Kind::Annulus:
            return M_PI * (r_outer_ * r_outer_ - r_inner_ * r_inner_);
        case Kind::Rectangle:
            return (hi_.x - lo_.x) * (hi_.y - lo_.y);
    }
    return 0.0;
}

void Domain::bounds(Vec2& lo, Vec2& hi) const {
    if (kind_ == Kind::Rectangle) {
        lo = lo_;
        hi = hi_;
    } else {
        lo = {center_.x - r_outer_, center_.y - r_outer_};
        hi = {center_.x + r_outer_, center_.y + r_outer_};
    }
}

double Domain::min_extent() const {
    switch (kind_) {
        case Kind::Disk:
            return 2.0 * r_outer_;
        case Kind::Annulus:
            return r_outer_ - r_inner_;
        case Kind::Rectangle:
            return std::min(hi_.x - lo_.x, hi_.y - lo_.y);
    }
    return 0.0;
}

int Domain::section(double x, std::array<double, 4>& iv) const {
    switch (kind_) {
        case Kind::Disk: {
            double dx = x - center_.x;
            double d2 = r_outer_ * r_outer_ - dx * dx;
            if (d2 <= 0.0) return 0;
            double t = std::sqrt(d2);
            iv[0] = center_.y - t;
            iv[1] = center_.y + t;
            return 1;
        }
        case Kind::Annulus: {
            double dx = x - center_.x;
            double o2 = r_outer_ * r_outer_ - dx * dx;
            if (o2 <= 0.0) return 0;
            double to = std::sqrt(o2);
            double i2 = r_inner_ * r_inner_ - dx * dx;
            if (i2 <= 0.0) {
                iv[0] = center_.y - to;
                iv[1] = center_.y + to;
                return 1;
            }
            double ti = std::sqrt(i2);
            iv[0] = center_.y - to;
            iv[1] = center_.y - ti;
            iv[2] = center_.y + ti;
            iv[3] = center_.y + to;
            return 2;
        }
        case Kind::Rectangle:
            if (x < lo_.x || x > hi_.x) return 0;
            iv[0] = lo_.y;
            iv[1] = hi_.y;
            return 1;
    }
    return 0;
}

Vec2 Domain::outward_normal(Vec2 p) const {
    switch (kind_) {
        case Kind::Disk: {
            Vec2 d = p - center_;
            double n = d.norm();
            if (n == 0.0) return {1.0, 0.0};
            return d * (1.0 / n);
        }
        case Kind::Annulus: {
            Vec2 d = p - center_;
            double n = d.norm();
            if (n == 0.0) return {1.0, 0.0};
            // outward means away from the annulus body
            bool outer = (n - r_inner_) > (r_outer_ - n);
            double s = outer ? 1.0 : -1.0;
            return d * (s / n);
        }
        case Kind::Rectangle: {
            // nearest side
            double dl = p.x - lo_.x, dr = hi_.x - p.x;
            double db = p.y - lo_.y, dt = hi_.y - p.y;
            double m = std::min(std::min(dl, dr), std::min(db, dt));
            if (m == dl) return {-1.0, 0.0};
            if (m == dr) return {1.0, 0.0};
            if (m == db) return {0.0, -1.0};
            return {0.0, 1.0};
        }
    }
    return {1.0, 0.0};
}

double interval_coverage(const std::array<double, 4>& iv, int n, double lo, double hi) {
    double c = 0.0;
    for (int k = 0; k < n; ++k) {
        double a = std::max(lo, iv[2 * k]);
        double b = std::min(hi, iv[2 * k + 1]);
        if (b > a) c += b - a;
    }
    return c;
}

int interval_intersect(const std::array<double, 4>& a, int na,
                       const std::array<double, 4>& b, int nb,
                       std::array<double, 4>& out) {
    int n = 0;
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) {
            double lo = std::max(a[2 * i], b[2 * j]);
            double hi = std::min(a[2 * i + 1], b[2 * j + 1]);
            if (hi > lo && n < 2) {
                out[2 * n] = lo;
                out[2 * n + 1] = hi;
                ++n;
            }
        }
    }
    return n;
}

}  // namespace superl
