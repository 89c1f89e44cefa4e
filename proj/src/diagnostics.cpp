#include "superl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace superl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_circle_clearance(const Grid& g, Vec2 center, double R) {
    double margin = R + 2.0 * g.h();
    for (int k = 0; k < 32; ++k) {
        double a = 2.0 * M_PI * k / 32.0;
        if (!g.domain().contains(center + Vec2{std::cos(a), std::sin(a)} * margin))
            throw std::domain_error("circle too close to the grid boundary");
    }
}

double circle_max(const Grid& g, const std::vector<double>& v, Circle c) {
    int n = std::max<int>(64, static_cast<int>(std::ceil(2.0 * M_PI * c.radius / g.h())));
    double m = -kInf;
    for (int k = 0; k < n; ++k) {
        double a = 2.0 * M_PI * k / n;
        m = std::max(m, g.interp(v, c.center + Vec2{std::cos(a), std::sin(a)} * c.radius));
    }
    return m;
}

int tail_start(int n) { return n - std::max(3, (n + 1) / 2); }

void require_family(const std::vector<FamilyMember>& family) {
    if (family.size() < 3)
        throw std::invalid_argument("family diagnostics need at least 3 members");
    const Grid& g0 = *family.front().first.grid();
    for (const auto& [u, psi] : family) {
        if (!u.grid()->same_lattice(g0) || !psi.grid()->same_lattice(g0))
            throw std::invalid_argument("family members live on mismatched grids");
    }
}

}  // namespace

double pohozaev_constant(const ScalarField& u, const SpinorField& psi,
                         const CouplingField& F, Vec2 center, double R,
                         std::optional<SingularMark> mark, const CliffordRep& rep) {
    const Grid& g = *u.grid();
    if (!(R > 0.0)) throw std::invalid_argument("pohozaev radius must be positive");
    require_circle_clearance(g, center, R);

    // boundary terms need nodewise gradients; interpolate the smooth composites
    std::vector<double> grad_term(g.size(), 0.0);   // |d_nu u|^2 - 1/2 |grad u|^2
    std::vector<double> dens_term(g.size(), 0.0);   // e^{2u} + F |psi|^4
    std::vector<double> spinor_term(g.size(), 0.0); // Re<(x-c).psi, d_nu psi>
    std::vector<double> area_term(g.size(), 0.0);   // 2e^{2u} - e^u|psi|^2 - |psi|^4 (x-c).gradF

    std::vector<double> ux, uy;
    if (!u.is_vanished()) gradient(g, u.values(), ux, uy);
    std::vector<double> dcx[4], dcy[4];
    for (int k = 0; k < 4; ++k) gradient(g, psi.comp(k), dcx[k], dcy[k]);

    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        if (g.kind(idx) == NodeKind::Exterior) continue;
        Vec2 p = g.coord(idx);
        Vec2 rel = p - center;
        double rr = rel.norm();
        Vec2 nu = rr > 0.0 ? rel * (1.0 / rr) : Vec2{0.0, 0.0};
        double eu = u.exp_u(idx);
        double n2 = psi.norm2(idx);
        double n4 = n2 * n2;
        if (!u.is_vanished()) {
            double un = ux[idx] * nu.x + uy[idx] * nu.y;
            grad_term[idx] = un * un - 0.5 * (ux[idx] * ux[idx] + uy[idx] * uy[idx]);
        }
        dens_term[idx] = eu * eu + F.value(idx) * n4;
        area_term[idx] = 2.0 * eu * eu - eu * n2 - n4 * rel.dot(F.gradient(idx));
        SpinorValue dnu{{dcx[0][idx] * nu.x + dcy[0][idx] * nu.y,
                         dcx[1][idx] * nu.x + dcy[1][idx] * nu.y},
                        {dcx[2][idx] * nu.x + dcy[2][idx] * nu.y,
                         dcx[3][idx] * nu.x + dcy[3][idx] * nu.y}};
        spinor_term[idx] =
            spinor_inner(clifford_mul(rel, psi.at(idx), rep), dnu).real();
    }

    Circle rim{center, R};
    double t_grad = u.is_vanished() ? 0.0 : R * integrate_circle(g, grad_term, rim);
    Domain ball = Domain::disk(center, R);
    double t_area = mark ? integrate(g, area_term, ball, *mark)
                         : integrate(g, area_term, ball);
    double t_dens = R * integrate_circle(g, dens_term, rim);
    double t_spin = integrate_circle(g, spinor_term, rim);
    return t_grad - t_area + t_dens - t_spin;
}

double local_mass(const ScalarField& u, const SpinorField& psi, Vec2 center,
                  double delta, std::optional<SingularMark> mark) {
    if (u.is_vanished()) return 0.0;
    const Grid& g = *u.grid();
    std::vector<double> vals(g.size(), 0.0);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        double eu = u.exp_u(idx);
        vals[idx] = 2.0 * eu * eu - eu * psi.norm2(idx);
    }
    Domain ball = Domain::disk(center, delta);
    return mark ? integrate(g, vals, ball, *mark) : integrate(g, vals, ball);
}

std::pair<double, double> radial_slope_identity(const ScalarField& u,
                                                const SpinorField& psi, Vec2 center,
                                                double r) {
    if (u.is_vanished())
        throw std::invalid_argument("radial averages are undefined for vanished u");
    const Grid& g = *u.grid();
    const double h = g.h();
    if (!(r - h > 0.0)) throw std::invalid_argument("radius must exceed one spacing");
    double up = circle_mean(g, u.values(), {center, r + h});
    double um = circle_mean(g, u.values(), {center, r - h});
    double lhs = r * (up - um) / (2.0 * h);
    double rhs = -local_mass(u, psi, center, r) / (2.0 * M_PI);
    return {lhs, rhs};
}

LogFit log_coefficient_fit(const ScalarField& u, Vec2 center, double r_inner,
                           double r_outer) {
    if (!(0.0 < r_inner && r_inner < r_outer))
        throw std::invalid_argument("log fit needs 0 < r_inner < r_outer");
    const Grid& g = *u.grid();
    double sl = 0, sll = 0, su = 0, slu = 0;
    long cnt = 0;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        if (g.kind(idx) == NodeKind::Exterior) continue;
        double r = (g.coord(idx) - center).norm();
        if (r < r_inner || r > r_outer) continue;
        double L = std::log(r);
        double val = u[idx];
        sl += L;
        sll += L * L;
        su += val;
        slu += L * val;
        ++cnt;
    }
    if (cnt < 16) throw std::invalid_argument("degenerate annulus: fewer than 16 nodes");
    double det = cnt * sll - sl * sl;
    LogFit fit;
    fit.c = (cnt * slu - sl * su) / det;
    fit.offset = (sll * su - sl * slu) / det;
    double ss = 0;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        if (g.kind(idx) == NodeKind::Exterior) continue;
        double r = (g.coord(idx) - center).norm();
        if (r < r_inner || r > r_outer) continue;
        double e = u[idx] - fit.c * std::log(r) - fit.offset;
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / cnt);
    return fit;
}

SingularityReport classify_singularity(const std::vector<FamilyMember>& family,
                                       const Domain& probe, double threshold) {
    require_family(family);
    SingularityReport rep;
    rep.threshold = threshold;
    for (const auto& [u, psi] : family) {
        const Grid& g = *u.grid();
        double max_u = -kInf, max_psi = 0.0;
        for (std::size_t idx = 0; idx < g.size(); ++idx) {
            if (g.kind(idx) == NodeKind::Exterior) continue;
            if (!probe.contains(g.coord(idx))) continue;
            if (!u.is_vanished()) max_u = std::max(max_u, u[idx]);
            max_psi = std::max(max_psi, std::sqrt(psi.norm2(idx)));
        }
        rep.a_n.push_back(max_u - 2.0 * std::log1p(max_psi));
    }
    double tail_min = kInf;
    for (std::size_t k = tail_start(static_cast<int>(rep.a_n.size())); k < rep.a_n.size();
         ++k)
        tail_min = std::min(tail_min, rep.a_n[k]);
    rep.first_type = tail_min >= -threshold;
    return rep;
}

NeckScan neck_scan(const ScalarField& u, const SpinorField& psi, Vec2 center,
                   double r_min, double r_max) {
    const Grid& g = *u.grid();
    NeckScan scan;
    scan.annuli = dyadic_annuli(center, r_min, r_max);
    for (const AnnulusRing& ring : scan.annuli) {
        scan.energies.push_back(
            energy(u, psi, Domain::annulus(center, ring.t, 2.0 * ring.t)));
        double fd = u.is_vanished()
                        ? -kInf
                        : circle_max(g, u.values(), {center, ring.t}) + std::log(ring.t);
        scan.fast_decay.push_back(fd);
        scan.sup = std::max(scan.sup, scan.energies.back());
    }
    return scan;
}

BMClassification brezis_merle_classify(const std::vector<FamilyMember>& family,
                                       double epsilon1) {
    require_family(family);
    if (!(epsilon1 > 0.0)) throw std::invalid_argument("epsilon1 must be positive");
    const Grid& g = *family.front().first.grid();
    const int N = static_cast<int>(family.size());
    const int t0 = tail_start(N);

    // tail-min energy density; concentration survives the min, transients don't
    std::vector<double> dens(g.size(), kInf);
    for (int n = t0; n < N; ++n) {
        const auto& [u, psi] = family[n];
        for (std::size_t idx = 0; idx < g.size(); ++idx) {
            if (g.kind(idx) == NodeKind::Exterior) continue;
            double eu = u.exp_u(idx);
            double n2 = psi.norm2(idx);
            dens[idx] = std::min(dens[idx], eu * eu + n2 * n2);
        }
    }

    const double Rdom = 0.5 * g.domain().min_extent();
    const std::vector<double> radii = {Rdom / 4, Rdom / 8, Rdom / 16, Rdom / 32};
    // a node can only pass the ball test if the smallest ball holds epsilon1
    const double dens_floor = epsilon1 / (M_PI * radii.back() * radii.back());

    BMClassification out;
    std::vector<std::size_t> cand;
    for (int j = 1; j + 1 < g.ny(); ++j) {
        for (int i = 1; i + 1 < g.nx(); ++i) {
            std::size_t idx = g.index(i, j);
            if (g.kind(idx) == NodeKind::Exterior) continue;
            double v = dens[idx];
            if (!(v >= dens_floor)) continue;
            bool is_max = true;
            for (int dj = -1; dj <= 1 && is_max; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    if (di == 0 && dj == 0) continue;
                    std::size_t nb = g.index(i + di, j + dj);
                    if (g.kind(nb) == NodeKind::Exterior || dens[nb] == kInf) continue;
                    // strict on later neighbors, loose on earlier: one winner per plateau
                    bool later = nb > idx;
                    if (later ? dens[nb] >= v : dens[nb] > v) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max) cand.push_back(idx);
        }
    }
    std::sort(cand.begin(), cand.end(),
              [&](std::size_t a, std::size_t b) { return dens[a] > dens[b]; });

    for (std::size_t idx : cand) {
        Vec2 p = g.coord(idx);
        bool dup = false;
        for (Vec2 q : out.sigma)
            if ((p - q).norm() <= 2.0 * g.h()) dup = true;
        if (dup) continue;
        bool fits = true;
        for (double r : radii)
            if (!g.domain().contains(p + Vec2{r, 0}) || !g.domain().contains(p - Vec2{r, 0}) ||
                !g.domain().contains(p + Vec2{0, r}) || !g.domain().contains(p - Vec2{0, r}))
                fits = false;
        if (!fits) continue;
        double worst = kInf;
        bool pass = true;
        for (double r : radii) {
            double emin = kInf;
            for (int n = t0; n < N; ++n)
                emin = std::min(emin, energy(family[n].first, family[n].second,
                                             Domain::disk(p, r)));
            worst = std::min(worst, emin);
            if (emin < epsilon1) {
                pass = false;
                break;
            }
        }
        if (pass) {
            out.sigma.push_back(p);
            out.point_energies.push_back(worst);
        }
    }

    const double excl = radii.front();
    for (int n = 0; n < N; ++n) {
        const auto& [u, psi] = family[n];
        double m = -kInf;
        if (!u.is_vanished()) {
            for (std::size_t idx = 0; idx < g.size(); ++idx) {
                if (g.kind(idx) == NodeKind::Exterior) continue;
                Vec2 p = g.coord(idx);
                bool off = true;
                for (Vec2 q : out.sigma)
                    if ((p - q).norm() <= excl) off = false;
                if (off) m = std::max(m, u[idx]);
            }
        }
        out.off_sigma_max.push_back(m);
    }
    const auto& om = out.off_sigma_max;
    out.off_sigma_diverges = om.size() >= 3 && om[om.size() - 1] < -20.0 &&
                             om[om.size() - 1] < om[om.size() - 2] &&
                             om[om.size() - 2] < om[om.size() - 3];
    if (!out.sigma.empty())
        out.label = BMClassification::Case::C;
    else
        out.label = out.off_sigma_diverges ? BMClassification::Case::B
                                           : BMClassification::Case::A;
    return out;
}

FamilyReport family_report(const std::vector<FamilyMember>& family,
                           const CouplingField& F, Vec2 center, double pohozaev_radius,
                           double mass_delta, double neck_r_min) {
    require_family(family);
    FamilyReport rep;
    rep.bm = brezis_merle_classify(family);
    const Grid& g = *family.front().first.grid();
    double probe_r = 0.45 * g.domain().min_extent();
    rep.singularity =
        classify_singularity(family, Domain::disk(center, probe_r), 10.0);
    std::string label = rep.singularity.first_type ? "first" : "second";
    for (int n = 0; n < static_cast<int>(family.size()); ++n) {
        const auto& [u, psi] = family[n];
        FamilyReportRow row;
        row.index = n;
        row.mass = local_mass(u, psi, center, mass_delta);
        row.pohozaev = pohozaev_constant(u, psi, F, center, pohozaev_radius);
        row.neck_sup = neck_scan(u, psi, center, neck_r_min, mass_delta).sup;
        row.a_n = rep.singularity.a_n[n];
        row.label = label;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace superl
