#include "superl/exact.hpp"

#include <cmath>
#include <stdexcept>

#include "superl/errors.hpp"
#include "superl/parallel.hpp"

namespace superl {

namespace {

double amplitude(double mu) { return 1.0 / std::sqrt(2.0 * std::abs(mu)); }

SpinorValue yamabe_value(Vec2 y, double lam, double a, SpinorValue phi0, int sign,
                         const CliffordRep& rep) {
    double gfac = a * std::sqrt(2.0 * lam) / (1.0 + lam * lam * y.norm2());
    SpinorValue v = phi0 + clifford_mul(y, phi0, rep) * (sign * lam);
    return v * gfac;
}

/// Analytic-sample residual |D psi + 2 mu |psi|^2 psi| at p, centered stencil
/// on a private spacing far below any grid scale.
double branch_residual(Vec2 p, double lam, double mu, SpinorValue phi0, int sign,
                       const CliffordRep& rep) {
    const double a = amplitude(mu);
    const double hp = 1e-5 / lam;
    auto val = [&](Vec2 q) { return yamabe_value(q, lam, a, phi0, sign, rep); };
    SpinorValue dx = (val({p.x + hp, p.y}) - val({p.x - hp, p.y})) * (1.0 / (2 * hp));
    SpinorValue dy = (val({p.x, p.y + hp}) - val({p.x, p.y - hp})) * (1.0 / (2 * hp));
    SpinorValue dpsi = mat_apply(rep.gamma1, dx) + mat_apply(rep.gamma2, dy);
    SpinorValue psi = val(p);
    SpinorValue res = dpsi + psi * (2.0 * mu * psi.norm2());
    return std::sqrt(res.norm2() / (dpsi.norm2() + 1e-300));
}

double branch_score(double mu, int sign, const CliffordRep& rep) {
    const Vec2 probes[5] = {{0.3, 0.1}, {-0.2, 0.25}, {0.15, -0.35}, {-0.3, -0.2}, {0.4, 0.4}};
    double worst = 0.0;
    for (Vec2 p : probes)
        worst = std::max(worst, branch_residual(p, 1.0, mu, {1.0, 0.0}, sign, rep));
    return worst;
}

}  // namespace

void BubbleParams::validate() const {
    if (!(lam > 0.0)) throw std::invalid_argument("bubble scale must be positive");
    switch (kind) {
        case BubbleKind::Liouville:
            break;
        case BubbleKind::Conical:
            if (!(beta > -1.0))
                throw std::invalid_argument("cone order must exceed -1");
            break;
        case BubbleKind::Yamabe:
            if (mu == 0.0) throw std::invalid_argument("yamabe coupling must be nonzero");
            if (std::abs(std::sqrt(phi0.norm2()) - 1.0) > 1e-12)
                throw std::invalid_argument("yamabe seed spinor must be unit");
            break;
    }
}

std::pair<ScalarField, SpinorField> liouville_bubble(double lam, Vec2 center,
                                                     GridPtr grid) {
    if (!(lam > 0.0)) throw std::invalid_argument("bubble scale must be positive");
    ScalarField u(grid);
    SpinorField psi(grid);
    const Grid& g = *grid;
    const double lnl = 0.5 * std::log(2.0) + std::log(lam);
    parallel_rows(g.ny(), [&](int j) {
        for (int i = 0; i < g.nx(); ++i) {
            std::size_t idx = g.index(i, j);
            double r2 = (g.coord(i, j) - center).norm2();
            u[idx] = lnl - std::log1p(lam * lam * r2);
        }
    });
    return {std::move(u), std::move(psi)};
}

ScalarField conical_bubble(double beta, double lam, GridPtr grid, Vec2 center) {
    if (!(beta > -1.0)) throw std::invalid_argument("cone order must exceed -1");
    if (!(lam > 0.0)) throw std::invalid_argument("bubble scale must be positive");
    if (beta == 0.0) return liouville_bubble(lam, center, grid).first;
    ScalarField u(grid);
    const Grid& g = *grid;
    const double c0 = std::log(std::sqrt(2.0) * (1.0 + beta) * lam);
    parallel_rows(g.ny(), [&](int j) {
        for (int i = 0; i < g.nx(); ++i) {
            std::size_t idx = g.index(i, j);
            double r = (g.coord(i, j) - center).norm();
            // r = 0: log r = -inf, so u = -inf for beta > 0 and +inf for beta < 0
            double lr = std::log(r);
            u[idx] = c0 + beta * lr - std::log1p(lam * lam * std::exp((2.0 + 2.0 * beta) * lr));
        }
    });
    return u;
}

int resolve_yamabe_sign(double mu, const CliffordRep& rep) {
    if (mu == 0.0) throw std::invalid_argument("yamabe coupling must be nonzero");
    double minus = branch_score(mu, -1, rep);
    double plus = branch_score(mu, +1, rep);
    int best = minus <= plus ? -1 : +1;
    double good = std::min(minus, plus), bad = std::max(minus, plus);
    if (good > 1e-6 || bad < 1e-2)
        throw ComputeError("Killing-branch probe is inconclusive for this Clifford rep");
    return best;
}

std::pair<ScalarField, SpinorField> yamabe_bubble(double lam, double mu,
                                                  SpinorValue phi0, int sign, Vec2 center,
                                                  GridPtr grid, const CliffordRep& rep) {
    if (!(lam > 0.0)) throw std::invalid_argument("bubble scale must be positive");
    if (mu == 0.0) throw std::invalid_argument("yamabe coupling must be nonzero");
    if (std::abs(std::sqrt(phi0.norm2()) - 1.0) > 1e-12)
        throw std::invalid_argument("yamabe seed spinor must be unit");
    int resolved = resolve_yamabe_sign(mu, rep);
    if (sign == 0)
        sign = resolved;
    else if (sign != resolved)
        throw ComputeError("requested Killing branch leaves a nonzero residual for this rep");
    ScalarField u = ScalarField::vanished(grid);
    SpinorField psi(grid);
    const Grid& g = *grid;
    const double a = amplitude(mu);
    parallel_rows(g.ny(), [&](int j) {
        for (int i = 0; i < g.nx(); ++i) {
            std::size_t idx = g.index(i, j);
            psi.set(idx, yamabe_value(g.coord(i, j) - center, lam, a, phi0, sign, rep));
        }
    });
    return {std::move(u), std::move(psi)};
}

BubbleEnergy bubble_energy(const BubbleParams& p) {
    p.validate();
    BubbleEnergy e;
    switch (p.kind) {
        case BubbleKind::Liouville:
            e.mass = 4.0 * M_PI;
            e.e2u = 2.0 * M_PI;
            break;
        case BubbleKind::Conical:
            e.mass = 4.0 * M_PI * (1.0 + p.beta);
            e.e2u = 2.0 * M_PI * (1.0 + p.beta);
            break;
        case BubbleKind::Yamabe: {
            double s = amplitude(p.mu);
            e.psi4 = 4.0 * M_PI * s * s * s * s;
            break;
        }
    }
    return e;
}

BubbleEnergy bubble_energy(const BubbleParams& p, const Domain& region) {
    p.validate();
    if (region.kind() != Domain::Kind::Disk ||
        (region.center() - p.center).norm() > 1e-12 * (1.0 + region.outer_radius()))
        throw std::invalid_argument(
            "closed-form energies exist only on disks centered at the bubble");
    const double R = region.outer_radius();
    BubbleEnergy e;
    switch (p.kind) {
        case BubbleKind::Liouville: {
            double t = p.lam * p.lam * R * R;
            double frac = t / (1.0 + t);
            e.mass = 4.0 * M_PI * frac;
            e.e2u = 2.0 * M_PI * frac;
            break;
        }
        case BubbleKind::Conical: {
            double s = p.lam * p.lam * std::pow(R, 2.0 + 2.0 * p.beta);
            double frac = s / (1.0 + s);
            e.mass = 4.0 * M_PI * (1.0 + p.beta) * frac;
            e.e2u = 2.0 * M_PI * (1.0 + p.beta) * frac;
            break;
        }
        case BubbleKind::Yamabe: {
            double s = amplitude(p.mu);
            double t = p.lam * p.lam * R * R;
            e.psi4 = 4.0 * M_PI * s * s * s * s * t / (1.0 + t);
            break;
        }
    }
    return e;
}

std::pair<ScalarField, SpinorField> make_bubble(const BubbleParams& p, GridPtr grid,
                                                const CliffordRep& rep) {
    p.validate();
    switch (p.kind) {
        case BubbleKind::Liouville:
            return liouville_bubble(p.lam, p.center, grid);
        case BubbleKind::Conical:
            return {conical_bubble(p.beta, p.lam, grid, p.center), SpinorField(grid)};
        case BubbleKind::Yamabe:
        default:
            return yamabe_bubble(p.lam, p.mu, p.phi0, p.sign, p.center, grid, rep);
    }
}

}  // namespace superl
