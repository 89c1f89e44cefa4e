#pragma once

#include <utility>
#include <vector>

#include "superl/fields.hpp"

namespace superl {

/// Blow-up rescaling: utilde(x) = u(lam x + x0) + ln lam,
/// psitilde(x) = lam^{1/2} psi(lam x + x0), sampled on the target grid by
/// bilinear interpolation. Vanished u stays vanished.
std::pair<ScalarField, SpinorField> rescale(const ScalarField& u, const SpinorField& psi,
                                            Vec2 x0, double lam, GridPtr target);

/// Kelvin inversion: u1(x) = u(x/|x|^2) - 2 ln|x|, psi1(x) = |x|^{-1} psi(x/|x|^2).
/// The target domain must exclude the origin.
std::pair<ScalarField, SpinorField> kelvin(const ScalarField& u, const SpinorField& psi,
                                           GridPtr target);

/// Product quadrature on the sphere minus a polar cap: Gauss-Legendre in
/// cos(theta) on (-1, cos(theta_min)) crossed with uniform longitude samples.
/// theta = 0 is excluded exactly; lambda_conf = 1/(1 - cos theta) >= 1/2.
struct SphereSample {
    int n_theta = 0;
    int n_phi = 0;
    double theta_min = 0.0;
    std::vector<double> cos_theta;  // Gauss-Legendre nodes, ascending
    std::vector<double> weight;     // per-theta weight already times 2*pi/n_phi

    double lambda_conf(int it) const { return 1.0 / (1.0 - cos_theta[it]); }
    double phi(int ip) const { return 2.0 * M_PI * ip / n_phi; }
    /// Stereographic image from the north pole: |f| = cot(theta/2).
    Vec2 plane_point(int it, int ip) const;
    std::size_t size() const { return static_cast<std::size_t>(n_theta) * n_phi; }
    std::size_t index(int it, int ip) const {
        return static_cast<std::size_t>(it) * n_phi + ip;
    }
};

SphereSample make_sphere_sample(int n_theta, int n_phi, double theta_min);

struct SphereFields {
    std::vector<double> v;          // u∘f + ln lambda_conf
    std::vector<double> phi_norm2;  // lambda_conf * |psi∘f|^2
    double e2v_integral = 0.0;      // sphere quadrature of e^{2v}
    double phi4_integral = 0.0;     // sphere quadrature of |phi|^4
    double sup_abs_v_near_pole = 0.0;  // over the band theta <= theta_min + 0.1
    bool u_vanished = false;
};

/// Pulls planar fields back to the sphere sample. Throws std::domain_error if
/// any sample maps outside the planar grid (theta_min too small for the grid).
SphereFields stereographic_pullback(const ScalarField& u, const SpinorField& psi,
                                    const SphereSample& sample);

}  // namespace superl
