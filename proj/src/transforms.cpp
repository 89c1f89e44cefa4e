#include "superl/transforms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "superl/parallel.hpp"

namespace superl {

namespace {

bool in_lattice(const Grid& g, Vec2 p) {
    Vec2 lo = g.origin();
    Vec2 hi{lo.x + (g.nx() - 1) * g.h(), lo.y + (g.ny() - 1) * g.h()};
    const double tol = 1e-9 * g.h();
    return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol && p.y <= hi.y + tol;
}

SpinorValue interp_spinor(const SpinorField& psi, Vec2 p) {
    const Grid& g = *psi.grid();
    return {{g.interp(psi.comp(0), p), g.interp(psi.comp(1), p)},
            {g.interp(psi.comp(2), p), g.interp(psi.comp(3), p)}};
}

/// Containment with a relative slack so points that land exactly on the rim
/// survive rounding.
bool contains_loose(const Domain& d, Vec2 p) {
    if (d.contains(p)) return true;
    Vec2 q = p + (d.center() - p) * 1e-9;
    return d.contains(q);
}

/// Gauss-Legendre nodes/weights on (-1,1) by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int k = 0; k < n; ++k) {
        double t = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int m = 2; m <= n; ++m) {
                double p2 = ((2 * m - 1) * t * p1 - (m - 1) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[k] = t;
        w[k] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace

std::pair<ScalarField, SpinorField> rescale(const ScalarField& u, const SpinorField& psi,
                                            Vec2 x0, double lam, GridPtr target) {
    if (!(lam > 0.0)) throw std::invalid_argument("rescale factor must be positive");
    const Grid& src = *u.grid();
    const Grid& tgt = *target;
    ScalarField ut = u.is_vanished() ? ScalarField::vanished(target) : ScalarField(target);
    SpinorField pt(target);
    const double lnl = std::log(lam);
    const double sql = std::sqrt(lam);
    for (int j = 0; j < tgt.ny(); ++j) {
        for (int i = 0; i < tgt.nx(); ++i) {
            std::size_t idx = tgt.index(i, j);
            Vec2 q = tgt.coord(i, j) * lam + x0;
            bool active = tgt.kind(idx) != NodeKind::Exterior;
            if (active && !(contains_loose(src.domain(), q) && in_lattice(src, q)))
                throw std::domain_error("rescale window leaves the source domain");
            if (!in_lattice(src, q)) continue;  // unused exterior corner
            if (!ut.is_vanished()) ut[idx] = src.interp(u.values(), q) + lnl;
            pt.set(idx, interp_spinor(psi, q) * sql);
        }
    }
    return {std::move(ut), std::move(pt)};
}

std::pair<ScalarField, SpinorField> kelvin(const ScalarField& u, const SpinorField& psi,
                                           GridPtr target) {
    const Grid& tgt = *target;
    if (tgt.domain().contains({0.0, 0.0}))
        throw std::invalid_argument("kelvin target must exclude the origin");
    const Grid& src = *u.grid();
    ScalarField ut = u.is_vanished() ? ScalarField::vanished(target) : ScalarField(target);
    SpinorField pt(target);
    for (int j = 0; j < tgt.ny(); ++j) {
        for (int i = 0; i < tgt.nx(); ++i) {
            std::size_t idx = tgt.index(i, j);
            Vec2 x = tgt.coord(i, j);
            double r2 = x.norm2();
            bool active = tgt.kind(idx) != NodeKind::Exterior;
            if (r2 == 0.0) {
                if (active)
                    throw std::invalid_argument("kelvin target must exclude the origin");
                continue;
            }
            Vec2 q = x * (1.0 / r2);
            if (active && !(contains_loose(src.domain(), q) && in_lattice(src, q)))
                throw std::domain_error("kelvin image leaves the source domain");
            if (!in_lattice(src, q)) continue;
            if (!ut.is_vanished())
                ut[idx] = src.interp(u.values(), q) - std::log(r2);
            pt.set(idx, interp_spinor(psi, q) * (1.0 / std::sqrt(r2)));
        }
    }
    return {std::move(ut), std::move(pt)};
}

Vec2 SphereSample::plane_point(int it, int ip) const {
    double t = cos_theta[it];
    double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    double denom = 1.0 - t;
    double ph = phi(ip);
    return {s * std::cos(ph) / denom, s * std::sin(ph) / denom};
}

SphereSample make_sphere_sample(int n_theta, int n_phi, double theta_min) {
    if (n_theta < 2 || n_phi < 4)
        throw std::invalid_argument("sphere sample needs n_theta >= 2, n_phi >= 4");
    if (!(theta_min > 0.0) || !(theta_min < M_PI))
        throw std::invalid_argument("theta_min must lie in (0, pi)");
    SphereSample s;
    s.n_theta = n_theta;
    s.n_phi = n_phi;
    s.theta_min = theta_min;
    std::vector<double> x, w;
    gauss_legendre(n_theta, x, w);
    const double hi = std::cos(theta_min);  // integrate t in (-1, hi)
    s.cos_theta.resize(n_theta);
    s.weight.resize(n_theta);
    for (int k = 0; k < n_theta; ++k) {
        s.cos_theta[k] = 0.5 * (hi + 1.0) * x[k] + 0.5 * (hi - 1.0);
        s.weight[k] = w[k] * 0.5 * (hi + 1.0) * (2.0 * M_PI / n_phi);
    }
    return s;
}

SphereFields stereographic_pullback(const ScalarField& u, const SpinorField& psi,
                                    const SphereSample& sample) {
    const Grid& g = *u.grid();
    SphereFields out;
    out.u_vanished = u.is_vanished();
    out.v.assign(sample.size(), 0.0);
    out.phi_norm2.assign(sample.size(), 0.0);
    const double band_cos = std::cos(sample.theta_min + 0.1);
    double sup_band = 0.0;
    std::vector<double> e2v_terms(sample.size(), 0.0), phi4_terms(sample.size(), 0.0);
    for (int it = 0; it < sample.n_theta; ++it) {
        double lc = sample.lambda_conf(it);
        bool in_band = sample.cos_theta[it] >= band_cos;
        for (int ip = 0; ip < sample.n_phi; ++ip) {
            Vec2 p = sample.plane_point(it, ip);
            if (!contains_loose(g.domain(), p) || !in_lattice(g, p))
                throw std::domain_error(
                    "sphere sample maps outside the planar grid (theta_min too small)");
            std::size_t k = sample.index(it, ip);
            double n2 = interp_spinor(psi, p).norm2();
            out.phi_norm2[k] = lc * n2;
            double e2u = 0.0;
            if (out.u_vanished) {
                out.v[k] = -std::numeric_limits<double>::infinity();
            } else {
                double uv = g.interp(u.values(), p);
                out.v[k] = uv + std::log(lc);
                e2u = std::exp(2.0 * uv);
            }
            e2v_terms[k] = sample.weight[it] * lc * lc * e2u;
            phi4_terms[k] = sample.weight[it] * lc * lc * n2 * n2;
            if (in_band) sup_band = std::max(sup_band, std::abs(out.v[k]));
        }
    }
    out.e2v_integral = pairwise_sum(e2v_terms);
    out.phi4_integral = pairwise_sum(phi4_terms);
    out.sup_abs_v_near_pole =
        out.u_vanished ? std::numeric_limits<double>::infinity() : sup_band;
    return out;
}

}  // namespace superl
