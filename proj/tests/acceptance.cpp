// Release gate: one check per acceptance criterion, one PASS/FAIL line each.
// Every line carries the measured numbers so a red run is diagnosable from
// the log alone. Exits 1 if any criterion fails.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "superl/blowup.hpp"
#include "superl/diagnostics.hpp"
#include "superl/exact.hpp"
#include "superl/fields.hpp"
#include "superl/grid.hpp"
#include "superl/solver.hpp"
#include "superl/spin2d.hpp"
#include "testutil.hpp"

using namespace superl;
using testutil::kPi;
using testutil::rel_err;

namespace {

SpinorBC zero_spinor_bc() {
    return [](Vec2) { return SpinorValue{0.0, 0.0}; };
}

std::string num(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.4g", v);
    return b;
}

// Accumulates measured values (kept on PASS lines too) and failure reasons.
class Line {
public:
    void note(const std::string& s) { add(s); }
    void check(bool cond, const std::string& why) {
        if (!cond) {
            ok_ = false;
            add("FAILED: " + why);
        }
    }
    bool ok() const { return ok_; }
    const std::string& detail() const { return text_; }

private:
    void add(const std::string& s) {
        if (!text_.empty()) text_ += "; ";
        text_ += s;
    }
    bool ok_ = true;
    std::string text_;
};

// ---- shared family specs -------------------------------------------------

FamilySpec scalar_spec() {
    FamilySpec s;
    BubbleTemplate b;
    b.kind = BubbleKind::Liouville;
    b.lambda0 = 4.0;
    b.growth = 2.0;
    s.bubbles.push_back(b);
    s.h = 1.0 / 256.0;
    s.n_min = 0;
    s.n_max = 5;
    return s;
}

FamilySpec spinor_spec() {
    FamilySpec s = scalar_spec();
    s.bubbles[0].kind = BubbleKind::Yamabe;
    s.bubbles[0].mu = -0.5;
    return s;
}

// Scalar core at the origin plus a faster spinor scale off-center: the pair
// separates (growth 4 > 2) while both peaks stay well inside the disk.
FamilySpec mixed_spec() {
    FamilySpec s = scalar_spec();
    BubbleTemplate y;
    y.kind = BubbleKind::Yamabe;
    y.lambda0 = 16.0;
    y.growth = 4.0;
    y.center = {0.3, 0.0};
    y.mu = -0.5;
    s.bubbles.push_back(y);
    s.n_max = 4;
    return s;
}

// ---- criteria ------------------------------------------------------------

// 1. Local mass of sharp scalar bubbles over B_1 sits at 4 pi T/(1+T).
Line criterion1() {
    Line L;
    GridPtr g = make_grid(Domain::disk({0, 0}, 1.0), 1.0 / 512.0);
    double prev = -1.0;
    for (double lam : {10.0, 30.0, 100.0}) {
        auto [u, psi] = liouville_bubble(lam, {0, 0}, g);
        const double m = local_mass(u, psi, {0, 0}, 1.0);
        const double want = testutil::liouville_mass_disk(lam, 1.0);
        L.check(rel_err(m, want) < 0.01,
                "lam=" + num(lam) + " mass " + num(m) + " vs " + num(want));
        L.check(m > prev, "mass not increasing at lam=" + num(lam));
        prev = m;
        if (lam == 100.0) L.note("mass(100)=" + num(m) + " want " + num(want));
    }
    return L;
}

// 2. Conical Pohozaev constant equals pi beta^2 and is radius-independent.
Line criterion2() {
    Line L;
    GridPtr g = make_grid(Domain::disk({0, 0}, 1.0), 1.0 / 256.0);
    SpinorField psi(g);
    CouplingField F = CouplingField::constant(0.0);
    for (double beta : {0.25, 0.5}) {
        ScalarField u = conical_bubble(beta, 1.0, g);
        const double want = kPi * beta * beta;
        double lo = 1e300, hi = -1e300;
        for (double R : {0.25, 0.5, 0.75}) {
            const double C = pohozaev_constant(u, psi, F, {0, 0}, R,
                                               SingularMark{{0.0, 0.0}, -2.0 * beta});
            L.check(rel_err(C, want) < 0.02, "beta=" + num(beta) + " R=" + num(R) +
                                                 " C=" + num(C) + " vs " + num(want));
            lo = std::min(lo, C);
            hi = std::max(hi, C);
        }
        L.check((hi - lo) / want < 0.02,
                "beta=" + num(beta) + " spread " + num((hi - lo) / want));
        L.note("beta=" + num(beta) + " C in [" + num(lo) + "," + num(hi) + "] want " +
               num(want));
    }
    return L;
}

// 3. Pohozaev constant vanishes on the smooth catalog solutions.
Line criterion3() {
    Line L;
    GridPtr g = make_grid(Domain::disk({0, 0}, 1.0), 1.0 / 256.0);
    auto [lu, lp] = liouville_bubble(4.0, {0, 0}, g);
    auto [yu, yp] = yamabe_bubble(4.0, -0.5, {1.0, 0.0}, 0, {0, 0}, g);
    double worst = 0.0;
    for (double R : {0.25, 0.5, 0.75}) {
        const double cl =
            pohozaev_constant(lu, lp, CouplingField::constant(0.0), {0, 0}, R);
        const double cy =
            pohozaev_constant(yu, yp, CouplingField::constant(-0.5), {0, 0}, R);
        L.check(std::abs(cl) < 1e-2, "liouville R=" + num(R) + " C=" + num(cl));
        L.check(std::abs(cy) < 1e-2, "yamabe R=" + num(R) + " C=" + num(cy));
        worst = std::max({worst, std::abs(cl), std::abs(cy)});
    }
    L.note("max |C| = " + num(worst));
    return L;
}

// 4. Spinor-family defect shrinks monotonically and ends below 1%.
Line criterion4() {
    Line L;
    AuditReport a = energy_identity_audit(spinor_spec());
    L.check(a.rows.size() == 6, "expected 6 rows, got " + num(double(a.rows.size())));
    for (std::size_t k = 0; k + 1 < a.rows.size(); ++k)
        L.check(std::abs(a.rows[k + 1].defect_psi4) < std::abs(a.rows[k].defect_psi4),
                "|defect| not decreasing at n=" + num(double(k + 1)));
    const AuditRow& last = a.rows.back();
    L.check(std::abs(last.account_psi4 - 4.0 * kPi) < 1e-9 * 4.0 * kPi,
            "account " + num(last.account_psi4) + " vs 4pi");
    const double rel = std::abs(last.defect_psi4) / last.account_psi4;
    L.check(rel < 0.01, "final defect rel " + num(rel));
    L.note("final |defect|/account = " + num(rel));
    return L;
}

// 5. Family audits: scalar total at 2 pi, correct census, coupling decay.
Line criterion5() {
    Line L;
    AuditReport a = energy_identity_audit(scalar_spec());
    L.check(a.label == "super-liouville", "label '" + a.label + "'");
    L.check(a.census_liouville == 1 && a.census_yamabe == 0, "scalar census");
    const double total = a.rows.back().total_e2u;
    L.check(rel_err(total, 2.0 * kPi) < 0.01,
            "total e2u " + num(total) + " vs " + num(2.0 * kPi));
    AuditReport b = energy_identity_audit(mixed_spec());
    L.check(b.census_liouville == 1 && b.census_yamabe == 1, "mixed census");
    L.check(b.label == "super-liouville+yamabe", "mixed label '" + b.label + "'");
    const double c0 = b.rows.front().cross_term;
    const double cN = b.rows.back().cross_term;
    L.check(c0 > 0.0 && cN > 0.0, "cross terms not positive");
    L.check(cN < 0.05 * c0, "cross " + num(cN) + " vs initial " + num(c0));
    L.note("total=" + num(total) + "; cross " + num(c0) + " -> " + num(cN));
    return L;
}

// 6. Quantization verdicts across the three family types.
Line criterion6() {
    Line L;
    QuantizationAudit q1 = quantization_audit(scalar_spec(), {0, 0}, {0.5, 0.35, 0.25});
    L.check(q1.verdict == "4pi", "scalar verdict '" + q1.verdict + "'");
    QuantizationAudit q2 = quantization_audit(spinor_spec(), {0, 0}, {0.5, 0.25});
    L.check(q2.verdict == "zero", "spinor verdict '" + q2.verdict + "'");
    for (double m : q2.masses) L.check(m == 0.0, "spinor mass " + num(m));
    QuantizationAudit q3 = quantization_audit(mixed_spec(), {0, 0}, {0.5, 0.35, 0.25});
    L.check(q3.verdict == "4pi", "mixed verdict '" + q3.verdict + "'");
    L.note("limits " + num(q1.limit) + " / " + num(q2.limit) + " / " + num(q3.limit));
    return L;
}

// 7. Canned trichotomy families land on a, b, c with Sigma pinned.
Line criterion7() {
    Line L;
    auto classify = [](const FamilySpec& spec) {
        GridPtr g = make_grid(spec.domain, spec.h);
        std::vector<FamilyMember> fam;
        for (int n = spec.n_min; n <= spec.n_max; ++n)
            fam.push_back(generate_family(spec, n, g));
        return brezis_merle_classify(fam);
    };
    FamilySpec a;
    a.background = Background{0.25, 0.0};
    a.h = 1.0 / 64.0;
    a.n_min = 0;
    a.n_max = 5;
    BMClassification ca = classify(a);
    L.check(ca.label == BMClassification::Case::A, "case a mislabelled");
    L.check(ca.sigma.empty(), "case a has sigma points");

    FamilySpec b;
    b.background = Background{0.0, 1.0};
    b.h = 1.0 / 64.0;
    b.n_min = 10;
    b.n_max = 25;
    BMClassification cb = classify(b);
    L.check(cb.label == BMClassification::Case::B, "case b mislabelled");
    L.check(cb.off_sigma_diverges, "case b not diverging");

    FamilySpec c;
    BubbleTemplate t;
    t.lambda0 = 1.0;
    t.growth = 2.0;
    c.bubbles.push_back(t);
    c.h = 1.0 / 64.0;
    c.n_min = 30;
    c.n_max = 40;
    BMClassification cc = classify(c);
    L.check(cc.label == BMClassification::Case::C, "case c mislabelled");
    L.check(cc.sigma.size() == 1, "case c sigma count");
    if (!cc.sigma.empty()) {
        const double d = cc.sigma.front().norm();
        L.check(d <= c.h + 1e-12, "sigma off origin by " + num(d));
        L.note("sigma at distance " + num(d) + " (h=" + num(c.h) + ")");
    }
    return L;
}

// 8. Stencils and catalog residuals converge at second order.
Line criterion8() {
    Line L;
    auto check_orders = [&L](const char* name, double e0, double e1, double e2) {
        const double p01 = testutil::order(e0, e1);
        const double p12 = testutil::order(e1, e2);
        L.check(p01 > 1.7 && p01 < 2.3 && p12 > 1.7 && p12 < 2.3,
                std::string(name) + " orders " + num(p01) + "/" + num(p12));
        L.note(std::string(name) + " " + num(p01) + "/" + num(p12));
    };
    const double hs[3] = {1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0};

    auto d2_err = [](double h) {
        GridPtr g = make_grid(Domain::disk({0, 0}, 1.0), h);
        const Vec2 k{2.0, -1.0};
        SpinorField psi(g);
        for (std::size_t i = 0; i < g->size(); ++i)
            psi.set(i, {std::polar(1.0, k.dot(g->coord(i))), 0.0});
        SpinorField dd = dirac_apply(dirac_apply(psi));
        double m = 0.0;
        for (int j = 1; j + 1 < g->ny(); ++j)
            for (int i = 1; i + 1 < g->nx(); ++i) {
                if (g->kind(i, j) != NodeKind::Interior ||
                    g->kind(i - 1, j) != NodeKind::Interior ||
                    g->kind(i + 1, j) != NodeKind::Interior ||
                    g->kind(i, j - 1) != NodeKind::Interior ||
                    g->kind(i, j + 1) != NodeKind::Interior)
                    continue;
                const std::size_t idx = g->index(i, j);
                SpinorValue r = dd.at(idx) - psi.at(idx) * k.norm2();
                m = std::max(m, r.norm2());
            }
        return std::sqrt(m);
    };
    auto liou_err = [](double h) {
        GridPtr g = make_grid(Domain::disk({0, 0}, 1.0), h);
        auto [u, psi] = liouville_bubble(2.0, {0, 0}, g);
        return testutil::sup_interior(residuals(u, psi, CouplingField::constant(0.0)).res_u);
    };
    // Band sup keeps the fourth-derivative coefficient h-independent; nearest
    // interior nodes otherwise creep toward the inner rim as h shrinks.
    auto cone_err = [](double h) {
        GridPtr g = make_grid(Domain::annulus({0, 0}, 0.1, 1.0), h);
        ScalarField u = conical_bubble(0.5, 1.0, g);
        ScalarField r = residuals(u, SpinorField(g), CouplingField::constant(0.0)).res_u;
        double m = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) {
            if (g->kind(i) != NodeKind::Interior) continue;
            const double rad = g->coord(i).norm();
            if (rad < 0.2 || rad > 0.8) continue;
            m = std::max(m, std::abs(r[i]));
        }
        return m;
    };
    auto yam_err = [](double h) {
        GridPtr g = make_grid(Domain::disk({0, 0}, 1.0), h);
        auto [u, psi] = yamabe_bubble(1.0, -0.5, {1.0, 0.0}, 0, {0, 0}, g);
        return testutil::sup_interior(residuals(u, psi, CouplingField::constant(-0.5)).res_psi);
    };

    check_orders("D^2", d2_err(hs[0]), d2_err(hs[1]), d2_err(hs[2]));
    check_orders("liouville", liou_err(hs[0]), liou_err(hs[1]), liou_err(hs[2]));
    check_orders("conical", cone_err(hs[0]), cone_err(hs[1]), cone_err(hs[2]));
    check_orders("yamabe", yam_err(hs[0]), yam_err(hs[1]), yam_err(hs[2]));
    return L;
}

// 9. Residuals are the action gradient; Jacobian matches finite differences.
Line criterion9() {
    Line L;
    GridPtr g = make_grid(Domain::disk({0, 0}, 1.0), 1.0 / 32.0);
    CouplingField F = CouplingField::constant(0.4);
    double worst_var = 0.0, worst_jac = 0.0;
    for (unsigned seed = 0; seed < 10; ++seed) {
        testutil::SmoothState x = testutil::random_state(g, seed, 0.4);
        testutil::SmoothState d = testutil::random_direction(g, seed + 100);

        auto [fd, pairing] = variational_check(x.u, x.psi, F, d.u, d.psi, 1e-4);
        const double vrel =
            std::abs(fd - pairing) / std::max({std::abs(fd), std::abs(pairing), 1e-12});
        L.check(vrel < 1e-5, "seed " + num(double(seed)) + " variational rel " + num(vrel));
        worst_var = std::max(worst_var, vrel);

        auto [ju, jp] = jacobian_matvec(x.u, x.psi, F, d.u, d.psi);
        const double eps = 1e-5;
        ScalarField up(g), um(g);
        SpinorField pp(g), pm(g);
        for (std::size_t i = 0; i < g->size(); ++i) {
            up[i] = x.u[i] + eps * d.u[i];
            um[i] = x.u[i] - eps * d.u[i];
            pp.set(i, x.psi.at(i) + d.psi.at(i) * eps);
            pm.set(i, x.psi.at(i) - d.psi.at(i) * eps);
        }
        SystemResiduals rp = residuals(up, pp, F);
        SystemResiduals rm = residuals(um, pm, F);
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) {
            if (g->kind(i) != NodeKind::Interior) continue;
            const double fd_u = (rp.res_u[i] - rm.res_u[i]) / (2.0 * eps);
            worst = std::max(worst, std::abs(fd_u - ju[i]));
            scale = std::max(scale, std::abs(ju[i]));
            SpinorValue fd_p = (rp.res_psi.at(i) - rm.res_psi.at(i)) * (1.0 / (2.0 * eps));
            worst = std::max(worst, std::sqrt((fd_p - jp.at(i)).norm2()));
            scale = std::max(scale, std::sqrt(jp.at(i).norm2()));
        }
        const double jrel = worst / scale;
        L.check(jrel < 1e-5, "seed " + num(double(seed)) + " jacobian rel " + num(jrel));
        worst_jac = std::max(worst_jac, jrel);
    }
    L.note("worst variational " + num(worst_var) + ", worst jacobian " + num(worst_jac));
    return L;
}

// 10. Newton reconverges a perturbed bubble to lattice accuracy. R = 1/2
// keeps lam*R away from 1, where the dilation mode enters the Dirichlet
// kernel of the linearization.
Line criterion10() {
    Line L;
    const double h = 1.0 / 64.0;
    const double lam = 1.0;
    GridPtr g = make_grid(Domain::disk({0, 0}, 0.5), h);
    auto [exact_u, zero_psi] = liouville_bubble(lam, {0, 0}, g);
    ScalarField u0(g);
    for (std::size_t i = 0; i < g->size(); ++i)
        u0[i] = exact_u[i] + 0.01 * std::cos(0.5 * kPi * g->coord(i).norm());
    auto bc = [lam](Vec2 p) {
        return std::log(std::sqrt(2.0) * lam) - std::log1p(lam * lam * p.norm2());
    };
    SolveResult r =
        newton_solve(u0, SpinorField(g), CouplingField::constant(0.0), bc, zero_spinor_bc());
    L.check(r.report.converged, "did not converge");
    L.check(r.report.iterations <= 12,
            "iterations " + num(double(r.report.iterations)));
    const double res = std::max(r.report.final_residual_u, r.report.final_residual_psi);
    L.check(res < 1e-9, "final residual " + num(res));
    const double err = testutil::sup_diff_interior(r.u, exact_u);
    L.check(err <= 5.0 * h * h, "sup error " + num(err) + " vs " + num(5.0 * h * h));
    L.note(num(double(r.report.iterations)) + " iters, residual " + num(res) +
           ", sup err " + num(err));
    return L;
}

const char* kNames[10] = {
    "local mass of sharp scalar bubbles quantizes at 4 pi T/(1+T) over B_1",
    "conical Pohozaev constant equals pi beta^2, independent of the radius",
    "Pohozaev constant vanishes on smooth catalog solutions",
    "spinor-family energy defect decreases and ends below 1% of the account",
    "family audits: scalar total, census, and cross-coupling decay",
    "quantization verdicts: scalar 4pi, spinor zero, two-scale 4pi",
    "canned trichotomy families classify as a, b, c with Sigma at the origin",
    "stencils and catalog residuals converge at second order",
    "residuals match the action and the Jacobian matches finite differences",
    "Newton reconverges a perturbed bubble to lattice accuracy",
};

}  // namespace

int main() {
    Line (*criteria[10])() = {criterion1, criterion2, criterion3, criterion4,
                              criterion5, criterion6, criterion7, criterion8,
                              criterion9, criterion10};
    int failures = 0;
    for (int k = 0; k < 10; ++k) {
        Line line;
        try {
            line = criteria[k]();
        } catch (const std::exception& e) {
            line.check(false, std::string("unexpected exception: ") + e.what());
        }
        if (!line.ok()) ++failures;
        std::printf("%s — criterion %d: %s%s%s\n", line.ok() ? "PASS" : "FAIL", k + 1,
                    kNames[k], line.detail().empty() ? "" : " — ",
                    line.detail().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
