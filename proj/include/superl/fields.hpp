#pragma once

#include <utility>
#include <vector>

#include "superl/grid.hpp"
#include "superl/spin2d.hpp"

namespace superl {

/// Sampled log-density u. The vanished state represents u = -infinity:
/// e^u is exactly 0 and the stored values are meaningless.
class ScalarField {
  public:
    explicit ScalarField(GridPtr grid, double fill = 0.0);
    static ScalarField vanished(GridPtr grid);

    const GridPtr& grid() const { return grid_; }
    bool is_vanished() const { return vanished_; }

    double operator[](std::size_t idx) const { return v_[idx]; }
    double& operator[](std::size_t idx) { return v_[idx]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    /// e^{u} honoring the vanished flag (exact zero, no leakage).
    double exp_u(std::size_t idx) const { return vanished_ ? 0.0 : std::exp(v_[idx]); }

  private:
    GridPtr grid_;
    std::vector<double> v_;
    bool vanished_ = false;
};

/// Sampled 2-complex-component spinor, stored as four real arrays
/// (Re/Im per component) so the Newton linearization stays real.
class SpinorField {
  public:
    explicit SpinorField(GridPtr grid);

    const GridPtr& grid() const { return grid_; }

    SpinorValue at(std::size_t idx) const {
        return {{re1_[idx], im1_[idx]}, {re2_[idx], im2_[idx]}};
    }
    void set(std::size_t idx, const SpinorValue& s) {
        re1_[idx] = s.c1.real();
        im1_[idx] = s.c1.imag();
        re2_[idx] = s.c2.real();
        im2_[idx] = s.c2.imag();
    }
    double norm2(std::size_t idx) const {
        return re1_[idx] * re1_[idx] + im1_[idx] * im1_[idx] + re2_[idx] * re2_[idx] +
               im2_[idx] * im2_[idx];
    }

    std::vector<double>& comp(int k);
    const std::vector<double>& comp(int k) const;

  private:
    GridPtr grid_;
    std::vector<double> re1_, im1_, re2_, im2_;
};

/// Coupling F: either an exact constant (with identically zero gradient, the
/// Theorem-style mu) or sampled values with a caller-supplied gradient.
class CouplingField {
  public:
    static CouplingField constant(double mu);
    static CouplingField sampled(GridPtr grid, std::vector<double> f,
                                 std::vector<double> fx, std::vector<double> fy);

    bool is_constant() const { return constant_; }
    double value(std::size_t idx) const { return constant_ ? mu_ : f_[idx]; }
    Vec2 gradient(std::size_t idx) const {
        return constant_ ? Vec2{0.0, 0.0} : Vec2{fx_[idx], fy_[idx]};
    }
    double constant_value() const;

  private:
    bool constant_ = true;
    double mu_ = 0.0;
    GridPtr grid_;
    std::vector<double> f_, fx_, fy_;
};

/// E(u, psi; region) = integral of e^{2u} + |psi|^4.
double energy(const ScalarField& u, const SpinorField& psi);
double energy(const ScalarField& u, const SpinorField& psi, const Domain& region);

/// L(u, psi) = integral of 1/2 |grad u|^2 + Re<(D + e^u) psi, psi> + F |psi|^4
/// - e^{2u}. The Dirichlet term is the edge-based discrete energy whose exact
/// gradient is the 5-point Laplacian, so variational_check closes to rounding.
double action(const ScalarField& u, const SpinorField& psi, const CouplingField& F);
double action(const ScalarField& u, const SpinorField& psi, const CouplingField& F,
              const Domain& region);

/// res_u = -Lap u - 2 e^{2u} + e^u |psi|^2 (vanished result when u vanished),
/// res_psi = D psi + e^u psi + 2 F |psi|^2 psi. Interior nodes only.
struct SystemResiduals {
    ScalarField res_u;
    SpinorField res_psi;
};
SystemResiduals residuals(const ScalarField& u, const SpinorField& psi,
                          const CouplingField& F,
                          const CliffordRep& rep = CliffordRep::standard());

/// Returns (central finite difference of the action along the direction,
/// discrete pairing sum w*(res_u*du) + w*2Re<res_psi,dpsi>). The factor 2
/// accounts for res_psi being half the Frechet derivative.
std::pair<double, double> variational_check(const ScalarField& u, const SpinorField& psi,
                                            const CouplingField& F, const ScalarField& du,
                                            const SpinorField& dpsi, double step);

}  // namespace superl
