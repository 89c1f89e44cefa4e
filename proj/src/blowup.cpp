#include "superl/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "superl/diagnostics.hpp"
#include "superl/errors.hpp"

namespace superl {

namespace {

bool is_scalar_kind(BubbleKind k) { return k != BubbleKind::Yamabe; }

const BubbleTemplate* find_bubble(const FamilySpec& spec, bool scalar) {
    for (const auto& b : spec.bubbles)
        if (is_scalar_kind(b.kind) == scalar) return &b;
    return nullptr;
}

Vec2 audit_center(const FamilySpec& spec) {
    if (const auto* s = find_bubble(spec, true)) return s->center;
    if (const auto* y = find_bubble(spec, false)) return y->center;
    Vec2 lo, hi;
    spec.domain.bounds(lo, hi);
    return (lo + hi) * 0.5;
}

// Largest r with B_r(c) inside the domain, by bisection on direction probes.
double inscribed_radius(const Domain& dom, Vec2 c) {
    if (!dom.contains(c)) return 0.0;
    auto fits = [&](double r) {
        for (int k = 0; k < 32; ++k) {
            double a = 2.0 * M_PI * k / 32.0;
            if (!dom.contains(c + Vec2{std::cos(a), std::sin(a)} * r)) return false;
        }
        return true;
    };
    double lo = 0.0, hi = dom.min_extent();
    while (fits(hi)) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (fits(mid) ? lo : hi) = mid;
    }
    return lo;
}

std::pair<ScalarField, SpinorField> assemble(const FamilySpec& spec, int n, GridPtr g,
                                             const CliffordRep& rep) {
    std::optional<ScalarField> u;
    std::optional<SpinorField> psi;
    if (const auto* s = find_bubble(spec, true))
        u = std::move(make_bubble(s->at(n), g, rep).first);
    if (const auto* y = find_bubble(spec, false))
        psi = std::move(make_bubble(y->at(n), g, rep).second);
    if (!u) {
        if (spec.background)
            u = ScalarField(g, spec.background->level0 - spec.background->drift * n);
        else
            u = ScalarField::vanished(g);
    }
    if (!psi) psi = SpinorField(g);
    return {std::move(*u), std::move(*psi)};
}

}  // namespace

double BubbleTemplate::scale(int n) const { return lambda0 * std::pow(growth, n); }

BubbleParams BubbleTemplate::at(int n) const {
    BubbleParams p;
    p.kind = kind;
    p.lam = scale(n);
    p.center = center;
    p.beta = beta;
    p.mu = mu;
    p.phi0 = phi0;
    p.sign = sign;
    return p;
}

void FamilySpec::validate() const {
    if (n_min > n_max) throw ConfigError("family index range is empty");
    if (!(h > 0.0)) throw ConfigError("grid spacing must be positive");
    int scalars = 0, spinors = 0;
    for (const auto& b : bubbles) {
        if (!(b.lambda0 > 0.0)) throw ConfigError("bubble lambda0 must be positive");
        if (!(b.growth > 1.0))
            throw ConfigError("scale schedules must be strictly increasing (growth > 1)");
        b.at(n_min).validate();
        (is_scalar_kind(b.kind) ? scalars : spinors)++;
    }
    if (scalars > 1)
        throw ConfigError("unsupported layout: more than one scalar bubble");
    if (spinors > 1)
        throw ConfigError("unsupported layout: more than one yamabe bubble");
    if (scalars > 0 && background)
        throw ConfigError("unsupported layout: background level under a scalar bubble");
    if (scalars == 1 && spinors == 1) {
        const auto* s = find_bubble(*this, true);
        const auto* y = find_bubble(*this, false);
        if (!(y->growth > s->growth))
            throw ConfigError(
                "two-scale layouts need the inner (yamabe) growth above the outer");
    }
}

std::pair<ScalarField, SpinorField> generate_family(const FamilySpec& spec, int n,
                                                    GridPtr grid,
                                                    const CliffordRep& rep) {
    spec.validate();
    if (n < spec.n_min || n > spec.n_max)
        throw std::invalid_argument("family index outside the spec's range");
    if (!grid) grid = make_grid(spec.domain, spec.h);
    return assemble(spec, n, grid, rep);
}

AuditReport energy_identity_audit(const FamilySpec& spec, int n_lo, int n_hi,
                                  const CliffordRep& rep) {
    spec.validate();
    if (n_lo > n_hi || n_lo < spec.n_min || n_hi > spec.n_max)
        throw std::invalid_argument("audit range outside the spec's index range");
    GridPtr g = make_grid(spec.domain, spec.h);

    AuditReport out;
    for (const auto& b : spec.bubbles)
        (is_scalar_kind(b.kind) ? out.census_liouville : out.census_yamabe)++;
    if (out.census_liouville && out.census_yamabe)
        out.label = "super-liouville+yamabe";
    else if (out.census_liouville)
        out.label = "super-liouville";
    else if (out.census_yamabe)
        out.label = "yamabe";
    else
        out.label = "background";

    const Vec2 center = audit_center(spec);
    const double delta = 0.25 * spec.domain.min_extent();
    const BubbleTemplate* outer = find_bubble(spec, true);
    if (!outer) outer = find_bubble(spec, false);

    std::vector<double> e2u(g->size()), p4(g->size()), cross(g->size());
    for (int n = n_lo; n <= n_hi; ++n) {
        auto [u, psi] = assemble(spec, n, g, rep);
        for (std::size_t idx = 0; idx < g->size(); ++idx) {
            double eu = u.exp_u(idx);
            double n2 = psi.norm2(idx);
            e2u[idx] = eu * eu;
            p4[idx] = n2 * n2;
            cross[idx] = eu * n2;
        }
        AuditRow row;
        row.n = n;
        row.total_e2u = integrate(*g, e2u);
        row.total_psi4 = integrate(*g, p4);
        row.cross_term = integrate(*g, cross);
        for (const auto& b : spec.bubbles) {
            BubbleParams p = b.at(n);
            BubbleEnergy full = bubble_energy(p);
            double rho = inscribed_radius(spec.domain, b.center);
            BubbleEnergy held = bubble_energy(p, Domain::disk(b.center, rho));
            row.account_e2u += full.e2u;
            row.account_psi4 += full.psi4;
            row.tail_e2u += full.e2u - held.e2u;
            row.tail_psi4 += full.psi4 - held.psi4;
        }
        row.defect_e2u = row.total_e2u - row.account_e2u;
        row.defect_psi4 = row.total_psi4 - row.account_psi4;
        if (outer) {
            double r_min = std::clamp(10.0 / outer->scale(n), 4.0 * spec.h, delta / 4.0);
            row.neck_sup = neck_scan(u, psi, center, r_min, delta).sup;
        }
        row.local_mass = local_mass(u, psi, center, delta);
        out.rows.push_back(row);
    }
    return out;
}

AuditReport energy_identity_audit(const FamilySpec& spec, const CliffordRep& rep) {
    return energy_identity_audit(spec, spec.n_min, spec.n_max, rep);
}

QuantizationAudit quantization_audit(const FamilySpec& spec, Vec2 center,
                                     const std::vector<double>& delta_schedule,
                                     double tol_zero, double tol_rel,
                                     const CliffordRep& rep) {
    spec.validate();
    if (delta_schedule.empty())
        throw std::invalid_argument("quantization audit needs at least one delta");
    GridPtr g = make_grid(spec.domain, spec.h);
    auto [u, psi] = assemble(spec, spec.n_max, g, rep);

    QuantizationAudit out;
    for (double d : delta_schedule) {
        if (!(d > 0.0)) throw std::invalid_argument("delta schedule entries must be positive");
        out.deltas.push_back(d);
        out.masses.push_back(local_mass(u, psi, center, d));
    }
    out.limit = out.masses.back();
    const double four_pi = 4.0 * M_PI;
    if (std::abs(out.limit) < tol_zero)
        out.verdict = "zero";
    else if (std::abs(out.limit - four_pi) < tol_rel * four_pi)
        out.verdict = "4pi";
    else
        out.verdict = "other";
    return out;
}

}  // namespace superl
