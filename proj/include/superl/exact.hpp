#pragma once

#include <utility>

#include "superl/fields.hpp"

namespace superl {

enum class BubbleKind { Liouville, Conical, Yamabe };

/// Parameters of a catalog solution. Coupled bubbles (u finite AND psi != 0)
/// have no closed form and are deliberately absent; the solver produces those.
struct BubbleParams {
    BubbleKind kind = BubbleKind::Liouville;
    double lam = 1.0;                 // scale, > 0
    Vec2 center{};
    double beta = 0.0;                // cone order, > -1 (conical only)
    double mu = 0.0;                  // coupling constant (yamabe only, != 0)
    SpinorValue phi0{1.0, 0.0};       // unit seed spinor (yamabe only)
    int sign = 0;                     // +1/-1 Killing branch, 0 = resolve from mu

    void validate() const;
};

struct BubbleEnergy {
    double mass = 0.0;  // integral of 2e^{2u} - e^u|psi|^2
    double e2u = 0.0;
    double psi4 = 0.0;
};

/// u = ln(sqrt(2) lam / (1 + lam^2 |x-c|^2)), psi = 0. Solves the full system.
std::pair<ScalarField, SpinorField> liouville_bubble(double lam, Vec2 center, GridPtr grid);

/// u = ln(sqrt(2)(1+beta) lam |x-c|^beta / (1 + lam^2 |x-c|^{2+2beta})).
/// Solves -Lap u = 2e^{2u} away from the cone point c, where u is +-infinity.
ScalarField conical_bubble(double beta, double lam, GridPtr grid, Vec2 center = {});

/// psi = s sqrt(2 lam)/(1 + lam^2 |y|^2) (1 + sign*lam y.) phi0, s = |2mu|^{-1/2},
/// u vanished. Solves D psi = -2 mu |psi|^2 psi; sign must match sgn(mu) for the
/// rep (resolved by probe when sign = 0, checked loudly when explicit).
std::pair<ScalarField, SpinorField> yamabe_bubble(
    double lam, double mu, SpinorValue phi0, int sign, Vec2 center, GridPtr grid,
    const CliffordRep& rep = CliffordRep::standard());

/// Killing-branch orientation probe: evaluates the analytic residual of both
/// branches at 5 off-center points with a tiny private stencil and returns the
/// branch that annihilates D psi + 2 mu |psi|^2 psi.
int resolve_yamabe_sign(double mu, const CliffordRep& rep = CliffordRep::standard());

/// Closed-form energies over the entire plane, or over a disk centered at the
/// bubble (the only region with a closed form).
BubbleEnergy bubble_energy(const BubbleParams& p);
BubbleEnergy bubble_energy(const BubbleParams& p, const Domain& region);

/// Catalog dispatch.
std::pair<ScalarField, SpinorField> make_bubble(
    const BubbleParams& p, GridPtr grid,
    const CliffordRep& rep = CliffordRep::standard());

}  // namespace superl
