#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "superl/geometry.hpp"

namespace superl {

enum class NodeKind : unsigned char { Exterior = 0, Boundary = 1, Interior = 2 };

/// Uniform Cartesian lattice over the domain's bounding box with cut-cell
/// quadrature weights. Interior nodes have all four axis neighbors inside the
/// domain; boundary nodes are inside but next to the exterior. Immutable after
/// construction.
class Grid {
  public:
    Grid(Domain domain, double h);

    const Domain& domain() const { return domain_; }
    double h() const { return h_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    Vec2 origin() const { return origin_; }
    std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
    Vec2 coord(int i, int j) const { return {origin_.x + i * h_, origin_.y + j * h_}; }
    Vec2 coord(std::size_t idx) const {
        return coord(static_cast<int>(idx % nx_), static_cast<int>(idx / nx_));
    }

    NodeKind kind(std::size_t idx) const { return kinds_[idx]; }
    NodeKind kind(int i, int j) const { return kinds_[index(i, j)]; }
    const std::vector<NodeKind>& kinds() const { return kinds_; }
    bool inside(int i, int j) const { return kinds_[index(i, j)] != NodeKind::Exterior; }

    double weight(std::size_t idx) const { return weights_[idx]; }
    const std::vector<double>& weights() const { return weights_; }

    /// Bilinear interpolation of node values at an arbitrary point of the lattice.
    double interp(const std::vector<double>& values, Vec2 p) const;

    bool same_lattice(const Grid& other) const;

  private:
    Domain domain_;
    double h_ = 0.0;
    int nx_ = 0, ny_ = 0;
    Vec2 origin_{};
    std::vector<NodeKind> kinds_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Builds the lattice. Requires h < min domain extent / 8 (at least 8 nodes across).
GridPtr make_grid(const Domain& domain, double h);

/// Integrand behaving like c·|x − center|^{-exponent} near center (exponent < 2).
/// integrate() excises B_{2h}(center) and adds the fitted power-law tail.
struct SingularMark {
    Vec2 center{};
    double exponent = 0.0;
};

/// Cut-cell weights of a subregion (must lie inside the grid domain).
std::vector<double> quadrature_weights(const Grid& g, const Domain& region);

/// Area integral of sampled node values over the grid's own domain.
double integrate(const Grid& g, const std::vector<double>& values);

/// Area integral over a subregion (must lie inside the grid domain).
double integrate(const Grid& g, const std::vector<double>& values, const Domain& region);

/// Subregion integral with a marked power-law singularity inside the region.
double integrate(const Grid& g, const std::vector<double>& values, const Domain& region,
                 const SingularMark& mark);

/// Arc-length circle integral: trapezoid rule on >= max(64, ceil(2*pi*R/h))
/// samples, node values interpolated bilinearly.
double integrate_circle(const Grid& g, const std::vector<double>& values, Circle c);

/// Mean of the field over the circle (arc-length average).
double circle_mean(const Grid& g, const std::vector<double>& values, Circle c);

/// Dyadic annuli B_{2t} \ B_t with t = r_min * 2^k while 2t <= r_max.
std::vector<AnnulusRing> dyadic_annuli(Vec2 center, double r_min, double r_max);

}  // namespace superl
