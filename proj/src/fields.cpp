#include "superl/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "superl/parallel.hpp"

namespace superl {

namespace {

void require_shared_grid(const GridPtr& a, const GridPtr& b) {
    if (!a || !b || !a->same_lattice(*b))
        throw std::invalid_argument("fields must share one grid");
}

/// Node terms of L, weighted by w; the Dirichlet part is added separately.
double node_terms(const ScalarField& u, const SpinorField& psi, const CouplingField& F,
                  const SpinorField& dpsi_field, const std::vector<double>& w) {
    const Grid& g = *u.grid();
    std::vector<double> terms(g.size(), 0.0);
    parallel_rows(g.ny(), [&](int j) {
        for (int i = 0; i < g.nx(); ++i) {
            std::size_t idx = g.index(i, j);
            if (w[idx] == 0.0) continue;
            double eu = u.exp_u(idx);
            double n2 = psi.norm2(idx);
            double dirac = spinor_inner(dpsi_field.at(idx), psi.at(idx)).real();
            terms[idx] =
                w[idx] * (dirac + eu * n2 + F.value(idx) * n2 * n2 - eu * eu);
        }
    });
    return pairwise_sum(terms);
}

/// Edge-based discrete Dirichlet energy whose gradient at a node with four
/// full-weight edges is exactly w * (-5-point Laplacian).
double dirichlet_energy(const ScalarField& u, const std::vector<double>& w) {
    const Grid& g = *u.grid();
    const double h2 = g.h() * g.h();
    const auto& v = u.values();
    std::vector<double> rows(g.ny(), 0.0);
    parallel_rows(g.ny(), [&](int j) {
        double acc = 0.0;
        for (int i = 0; i < g.nx(); ++i) {
            std::size_t a = g.index(i, j);
            if (g.kind(a) == NodeKind::Exterior) continue;
            if (i + 1 < g.nx() && g.kind(i + 1, j) != NodeKind::Exterior) {
                std::size_t b = g.index(i + 1, j);
                double we = 0.5 * (w[a] + w[b]) / h2;
                double d = v[b] - v[a];
                acc += 0.5 * we * d * d;
            }
            if (j + 1 < g.ny() && g.kind(i, j + 1) != NodeKind::Exterior) {
                std::size_t b = g.index(i, j + 1);
                double we = 0.5 * (w[a] + w[b]) / h2;
                double d = v[b] - v[a];
                acc += 0.5 * we * d * d;
            }
        }
        rows[j] = acc;
    });
    return pairwise_sum(rows);
}

double action_impl(const ScalarField& u, const SpinorField& psi, const CouplingField& F,
                   const std::vector<double>& w) {
    if (u.is_vanished())
        throw std::invalid_argument("action is undefined for vanished u");
    require_shared_grid(u.grid(), psi.grid());
    SpinorField dpsi = dirac_apply(psi);
    return dirichlet_energy(u, w) + node_terms(u, psi, F, dpsi, w);
}

}  // namespace

ScalarField::ScalarField(GridPtr grid, double fill)
    : grid_(std::move(grid)), v_(grid_ ? grid_->size() : 0, fill) {
    if (!grid_) throw std::invalid_argument("null grid");
}

ScalarField ScalarField::vanished(GridPtr grid) {
    ScalarField f(std::move(grid));
    f.vanished_ = true;
    return f;
}

SpinorField::SpinorField(GridPtr grid)
    : grid_(std::move(grid)),
      re1_(grid_ ? grid_->size() : 0, 0.0),
      im1_(grid_ ? grid_->size() : 0, 0.0),
      re2_(grid_ ? grid_->size() : 0, 0.0),
      im2_(grid_ ? grid_->size() : 0, 0.0) {
    if (!grid_) throw std::invalid_argument("null grid");
}

std::vector<double>& SpinorField::comp(int k) {
    switch (k) {
        case 0: return re1_;
        case 1: return im1_;
        case 2: return re2_;
        default: return im2_;
    }
}

const std::vector<double>& SpinorField::comp(int k) const {
    return const_cast<SpinorField*>(this)->comp(k);
}

CouplingField CouplingField::constant(double mu) {
    CouplingField f;
    f.constant_ = true;
    f.mu_ = mu;
    return f;
}

CouplingField CouplingField::sampled(GridPtr grid, std::vector<double> f,
                                     std::vector<double> fx, std::vector<double> fy) {
    if (!grid || f.size() != grid->size() || fx.size() != grid->size() ||
        fy.size() != grid->size())
        throw std::invalid_argument("sampled coupling arrays must match the grid");
    CouplingField c;
    c.constant_ = false;
    c.grid_ = std::move(grid);
    c.f_ = std::move(f);
    c.fx_ = std::move(fx);
    c.fy_ = std::move(fy);
    return c;
}

double CouplingField::constant_value() const {
    if (!constant_) throw std::invalid_argument("coupling is not constant");
    return mu_;
}

double energy(const ScalarField& u, const SpinorField& psi) {
    require_shared_grid(u.grid(), psi.grid());
    const Grid& g = *u.grid();
    std::vector<double> vals(g.size());
    parallel_rows(g.ny(), [&](int j) {
        for (int i = 0; i < g.nx(); ++i) {
            std::size_t idx = g.index(i, j);
            double eu = u.exp_u(idx);
            double n2 = psi.norm2(idx);
            vals[idx] = eu * eu + n2 * n2;
        }
    });
    return integrate(g, vals);
}

double energy(const ScalarField& u, const SpinorField& psi, const Domain& region) {
    require_shared_grid(u.grid(), psi.grid());
    const Grid& g = *u.grid();
    std::vector<double> vals(g.size());
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        double eu = u.exp_u(idx);
        double n2 = psi.norm2(idx);
        vals[idx] = eu * eu + n2 * n2;
    }
    return integrate(g, vals, region);
}

double action(const ScalarField& u, const SpinorField& psi, const CouplingField& F) {
    return action_impl(u, psi, F, u.grid()->weights());
}

double action(const ScalarField& u, const SpinorField& psi, const CouplingField& F,
              const Domain& region) {
    return action_impl(u, psi, F, quadrature_weights(*u.grid(), region));
}

SystemResiduals residuals(const ScalarField& u, const SpinorField& psi,
                          const CouplingField& F, const CliffordRep& rep) {
    require_shared_grid(u.grid(), psi.grid());
    const Grid& g = *u.grid();
    SpinorField dpsi = dirac_apply(psi, rep);
    SpinorField res_psi(psi.grid());
    ScalarField res_u =
        u.is_vanished() ? ScalarField::vanished(u.grid()) : ScalarField(u.grid());
    ScalarField lap = laplacian_apply(u);
    parallel_rows(g.ny(), [&](int j) {
        for (int i = 0; i < g.nx(); ++i) {
            std::size_t idx = g.index(i, j);
            if (g.kind(idx) != NodeKind::Interior) continue;
            double eu = u.exp_u(idx);
            double n2 = psi.norm2(idx);
            if (!u.is_vanished()) res_u[idx] = -lap[idx] - 2.0 * eu * eu + eu * n2;
            SpinorValue p = psi.at(idx);
            res_psi.set(idx, dpsi.at(idx) + p * (eu + 2.0 * F.value(idx) * n2));
        }
    });
    return {std::move(res_u), std::move(res_psi)};
}

std::pair<double, double> variational_check(const ScalarField& u, const SpinorField& psi,
                                            const CouplingField& F, const ScalarField& du,
                                            const SpinorField& dpsi, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    if (u.is_vanished())
        throw std::invalid_argument("variational_check requires non-vanished u");
    require_shared_grid(u.grid(), du.grid());
    require_shared_grid(psi.grid(), dpsi.grid());
    const Grid& g = *u.grid();

    auto shifted = [&](double t) {
        ScalarField us(u.grid());
        SpinorField ps(psi.grid());
        for (std::size_t idx = 0; idx < g.size(); ++idx) {
            us[idx] = u[idx] + t * du[idx];
            ps.set(idx, psi.at(idx) + dpsi.at(idx) * t);
        }
        return action(us, ps, F);
    };
    double fd = (shifted(step) - shifted(-step)) / (2.0 * step);

    SystemResiduals res = residuals(u, psi, F);
    std::vector<double> terms(g.size(), 0.0);
    const auto& w = g.weights();
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        if (g.kind(idx) != NodeKind::Interior) continue;
        double t = 2.0 * spinor_inner(res.res_psi.at(idx), dpsi.at(idx)).real();
        if (!res.res_u.is_vanished()) t += res.res_u[idx] * du[idx];
        terms[idx] = w[idx] * t;
    }
    return {fd, pairwise_sum(terms)};
}

}  // namespace superl
