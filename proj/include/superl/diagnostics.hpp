#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "superl/fields.hpp"

namespace superl {

using FamilyMember = std::pair<ScalarField, SpinorField>;

/// C(u, psi; R) around center:
///   R oint(|d_nu u|^2 - 1/2|grad u|^2) ds
///   - int_{B_R}(2e^{2u} - e^u|psi|^2 - |psi|^4 (x-c).grad F) dx
///   + R oint(e^{2u} + F|psi|^4) ds
///   - oint Re<(x-c).psi, d_nu psi> ds.
/// Radius-independent for exact solutions; pass a mark when the center is a
/// cone point so the area term uses the excision quadrature.
double pohozaev_constant(const ScalarField& u, const SpinorField& psi,
                         const CouplingField& F, Vec2 center, double R,
                         std::optional<SingularMark> mark = {},
                         const CliffordRep& rep = CliffordRep::standard());

/// m = integral over B_delta(center) of 2e^{2u} - e^u|psi|^2; 0 for vanished u.
double local_mass(const ScalarField& u, const SpinorField& psi, Vec2 center,
                  double delta, std::optional<SingularMark> mark = {});

/// (lhs, rhs) of the slope law r dbar{u}/dr = -(1/2pi) m(r); |lhs-rhs| = O(h)
/// at non-singular centers.
std::pair<double, double> radial_slope_identity(const ScalarField& u,
                                                const SpinorField& psi, Vec2 center,
                                                double r);

struct LogFit {
    double c = 0.0;       // coefficient of ln|x - center|
    double offset = 0.0;
    double residual = 0.0;  // RMS of the fit
    double implied_mass() const { return -2.0 * M_PI * c; }
};

/// Least-squares u ~ c ln|x-center| + offset over annulus nodes (>= 16 nodes).
LogFit log_coefficient_fit(const ScalarField& u, Vec2 center, double r_inner,
                           double r_outer);

struct SingularityReport {
    std::vector<double> a_n;  // max u_n - 2 ln(1 + max |psi_n|) over the probe
    bool first_type = false;
    double threshold = 0.0;
};

/// First type iff the tail minimum of a_n stays above -threshold. The tail is
/// the last max(3, ceil(N/2)) indices — a finite proxy for the liminf.
SingularityReport classify_singularity(const std::vector<FamilyMember>& family,
                                       const Domain& probe, double threshold = 10.0);

struct NeckScan {
    std::vector<AnnulusRing> annuli;
    std::vector<double> energies;    // E(u, psi; B_2t \ B_t)
    std::vector<double> fast_decay;  // max over |x-c| = t of u + ln|x-c|
    double sup = 0.0;
};

NeckScan neck_scan(const ScalarField& u, const SpinorField& psi, Vec2 center,
                   double r_min, double r_max);

struct BMClassification {
    enum class Case { A, B, C };
    Case label = Case::A;
    std::vector<Vec2> sigma;             // estimated concentration points
    std::vector<double> point_energies;  // tail-min ball energy per sigma point
    std::vector<double> off_sigma_max;   // per index max of u_n off sigma
    bool off_sigma_diverges = false;     // finite proxy: last 3 maxima decreasing, final < -20
};

/// Thm-style trichotomy over a finite family: (a) bounded, (b) uniformly to
/// -infinity, (c) concentration at the estimated finite set Sigma.
BMClassification brezis_merle_classify(const std::vector<FamilyMember>& family,
                                       double epsilon1 = 0.1);

struct FamilyReportRow {
    int index = 0;
    double mass = 0.0;
    double pohozaev = 0.0;
    double neck_sup = 0.0;
    double a_n = 0.0;
    std::string label;
};

struct FamilyReport {
    std::vector<FamilyReportRow> rows;
    BMClassification bm;
    SingularityReport singularity;
};

/// Per-index diagnostics table around one blow-up center.
FamilyReport family_report(const std::vector<FamilyMember>& family,
                           const CouplingField& F, Vec2 center, double pohozaev_radius,
                           double mass_delta, double neck_r_min);

}  // namespace superl
