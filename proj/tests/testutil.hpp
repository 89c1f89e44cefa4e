#pragma once
// Shared closed-form oracles and deterministic generators for the test suite.
// Every formula here is derived independently from the bubble profiles
// (substitution T = lam^2 R^2 etc.) so the library is checked against frozen
// arithmetic, not against itself.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "superl/exact.hpp"
#include "superl/fields.hpp"
#include "superl/grid.hpp"

namespace testutil {

inline constexpr double kPi = 3.14159265358979323846;

// int_{B_R} e^{2 u_lam} = 2 pi T/(1+T), T = lam^2 R^2.
inline double liouville_e2u_disk(double lam, double R) {
    const double T = lam * lam * R * R;
    return 2.0 * kPi * T / (1.0 + T);
}

// int_{B_R} 2 e^{2 u_lam} (the scalar bubble's local mass).
inline double liouville_mass_disk(double lam, double R) {
    return 2.0 * liouville_e2u_disk(lam, R);
}

// int_{B_R} 2 e^{2u} for the conical bubble: 4 pi (1+beta) s/(1+s),
// s = lam^2 R^{2+2 beta}.
inline double conical_mass_disk(double beta, double lam, double R) {
    const double s = lam * lam * std::pow(R, 2.0 + 2.0 * beta);
    return 4.0 * kPi * (1.0 + beta) * s / (1.0 + s);
}

// int_{B_R} |psi_lam|^4 = 4 pi s^4 T/(1+T) with s = |2 mu|^{-1/2}.
inline double yamabe_psi4_disk(double lam, double mu, double R) {
    const double s2 = 1.0 / std::abs(2.0 * mu);
    const double T = lam * lam * R * R;
    return 4.0 * kPi * s2 * s2 * T / (1.0 + T);
}

// e^{2u} share of the dyadic ring B_{2t} \ B_t around a Liouville bubble:
// 2 pi [1/(1+T) - 1/(1+4T)], T = lam^2 t^2.
inline double liouville_ring_e2u(double lam, double t) {
    const double T = lam * lam * t * t;
    return 2.0 * kPi * (1.0 / (1.0 + T) - 1.0 / (1.0 + 4.0 * T));
}

// |psi|^4 share of the same ring around a Yamabe bubble.
inline double yamabe_ring_psi4(double lam, double mu, double t) {
    const double s2 = 1.0 / std::abs(2.0 * mu);
    const double T = lam * lam * t * t;
    return 4.0 * kPi * s2 * s2 * (1.0 / (1.0 + T) - 1.0 / (1.0 + 4.0 * T));
}

// Observed convergence order from errors at h and h/2.
inline double order(double err_coarse, double err_fine) {
    return std::log2(err_coarse / err_fine);
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}

inline double sup_interior(const superl::ScalarField& f) {
    const superl::Grid& g = *f.grid();
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.kind(i) == superl::NodeKind::Interior) m = std::max(m, std::abs(f[i]));
    return m;
}

inline double sup_interior(const superl::SpinorField& f) {
    const superl::Grid& g = *f.grid();
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.kind(i) == superl::NodeKind::Interior) m = std::max(m, f.norm2(i));
    return std::sqrt(m);
}

inline double sup_diff_interior(const superl::ScalarField& a, const superl::ScalarField& b) {
    const superl::Grid& g = *a.grid();
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.kind(i) == superl::NodeKind::Interior) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

struct SmoothState {
    superl::ScalarField u;
    superl::SpinorField psi;
};

// Low-frequency trig field: sum of 3 modes with coefficients drawn from the
// seeded engine. Amplitude stays modest so exponentials remain tame.
inline std::vector<double> trig_samples(const superl::Grid& g, std::mt19937_64& rng,
                                        double amp) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double a[3], kx[3], ky[3], ph[3];
    for (int m = 0; m < 3; ++m) {
        a[m] = amp * uni(rng);
        kx[m] = 2.0 * uni(rng);
        ky[m] = 2.0 * uni(rng);
        ph[m] = kPi * uni(rng);
    }
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        superl::Vec2 p = g.coord(i);
        double s = 0.0;
        for (int m = 0; m < 3; ++m) s += a[m] * std::sin(kx[m] * p.x + ky[m] * p.y + ph[m]);
        v[i] = s;
    }
    return v;
}

inline SmoothState random_state(superl::GridPtr grid, unsigned seed, double amp = 0.5) {
    std::mt19937_64 rng(seed);
    const superl::Grid& g = *grid;
    SmoothState st{superl::ScalarField(grid), superl::SpinorField(grid)};
    st.u.values() = trig_samples(g, rng, amp);
    for (int k = 0; k < 4; ++k) st.psi.comp(k) = trig_samples(g, rng, amp);
    return st;
}

// C^2 cutoff (1 - (r/r0)^2)^2 vanishing at r0 = 0.8 * half-extent: keeps the
// direction supported strictly inside the domain so boundary rows never move.
inline double bump(const superl::Grid& g, superl::Vec2 p) {
    superl::Vec2 lo, hi;
    g.domain().bounds(lo, hi);
    const superl::Vec2 c{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
    const double r0 = 0.4 * std::min(hi.x - lo.x, hi.y - lo.y);
    const double q = (p - c).norm2() / (r0 * r0);
    return q >= 1.0 ? 0.0 : (1.0 - q) * (1.0 - q);
}

inline SmoothState random_direction(superl::GridPtr grid, unsigned seed, double amp = 1.0) {
    SmoothState st = random_state(grid, seed ^ 0x9e3779b97f4a7c15ULL, amp);
    const superl::Grid& g = *grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double w = bump(g, g.coord(i));
        st.u[i] *= w;
        for (int k = 0; k < 4; ++k) st.psi.comp(k)[i] *= w;
    }
    return st;
}

}  // namespace testutil
