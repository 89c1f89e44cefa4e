#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "superl/fields.hpp"

namespace superl {

struct SolverConfig {
    double tol = 1e-10;      // residual sup-norm target
    int max_iter = 25;
    double backtrack = 0.5;  // step contraction factor, in (0,1)
    double min_step = 1e-8;  // damping floor; hitting it aborts with converged=false
    double linear_tol = 1e-12;

    void validate() const;
};

struct SolveReport {
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;  // initial + accepted sup-norms
    double final_residual_u = 0.0;
    double final_residual_psi = 0.0;
};

using ScalarBC = std::function<double(Vec2)>;
using SpinorBC = std::function<SpinorValue(Vec2)>;

/// Discrete Dirichlet problem -Lap u = rhs with u = bc on boundary nodes,
/// solved by sparse LU.
ScalarField linear_poisson_solve(const ScalarField& rhs, const ScalarBC& bc);

struct SolveResult {
    ScalarField u;
    SpinorField psi;
    SolveReport report;
};

/// Damped Newton on the stacked real system [res_u; Re res_psi; Im res_psi].
/// u gets Dirichlet data; psi gets the chiral-bag condition P psi = P bc with
/// P = (I - i nu.gamma)/2, closed by the one-sided Dirac residual on (I - P).
/// The chiral-bag condition is an engineering choice, not a claim about the
/// continuum problem. Armijo backtracking on the residual sup-norm; u is
/// clamped at +50 inside exponentials during line-search evaluation only.
SolveResult newton_solve(const ScalarField& u0, const SpinorField& psi0,
                         const CouplingField& F, const ScalarBC& bc_u,
                         const SpinorBC& bc_psi, const SolverConfig& config = {},
                         const CliffordRep& rep = CliffordRep::standard());

/// Matrix-free Jacobian action on a direction; interior rows only, matching
/// the central finite difference of residuals().
std::pair<ScalarField, SpinorField> jacobian_matvec(
    const ScalarField& u, const SpinorField& psi, const CouplingField& F,
    const ScalarField& du, const SpinorField& dpsi,
    const CliffordRep& rep = CliffordRep::standard());

/// Chiral-bag projector at outward normal nu (|nu| = 1): Hermitian, P^2 = P.
Mat2c chiral_bag_projector(Vec2 nu, const CliffordRep& rep = CliffordRep::standard());

}  // namespace superl
