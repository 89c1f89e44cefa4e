#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "superl/exact.hpp"
#include "superl/fields.hpp"
#include "superl/transforms.hpp"
#include "testutil.hpp"

using namespace superl;
using testutil::kPi;

TEST_SUITE("transforms") {

TEST_CASE("rescale with lam = 1 at the origin is the identity") {
    GridPtr g = make_grid(Domain::disk({0, 0}, 1.0), 1.0 / 32.0);
    auto [u, psi] = liouville_bubble(2.0, {0.1, -0.2}, g);
    GridPtr target = make_grid(Domain::disk({0, 0}, 0.5), 1.0 / 32.0);
    auto [ru, rpsi] = rescale(u, psi, {0, 0}, 1.0, target);
    for (std::size_t i = 0; i < target->size(); ++i) {
        Vec2 p = target->coord(i);
        double want = std::log(std::sqrt(2.0) * 2.0) -
                      std::log1p(4.0 * (p - Vec2{0.1, -0.2}).norm2());
        if (target->kind(i) != NodeKind::Exterior)
            CHECK(ru[i] == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("rescale maps the bubble family to itself") {
    // rescale(u_mu, lam) = u_{lam mu} within interpolation error.
    const double mu = 1.0, lam = 2.0;
    GridPtr src = make_grid(Domain::disk({0, 0}, 1.0), 1.0 / 128.0);
    auto [u, psi] = liouville_bubble(mu, {0, 0}, src);
    GridPtr target = make_grid(Domain::disk({0, 0}, 0.4), 1.0 / 128.0);
    auto [ru, rpsi] = rescale(u, psi, {0, 0}, lam, target);
    auto [want, wpsi] = liouville_bubble(lam * mu, {0, 0}, target);
    double worst = testutil::sup_diff_interior(ru, want);
    CHECK(worst < 5e-4);  // bilinear O(h^2)
    CHECK(ru.is_vanished() == false);
}

TEST_CASE("rescale preserves the conformal energies") {
    // E(utilde, psitilde; B_1) = E(u, psi; B_lam) for lam < 1 windows.
    GridPtr src = make_grid(Domain::disk({0, 0}, 1.0), 1.0 / 128.0);
    auto [u, psi] = yamabe_bubble(2.0, -0.5, {1.0, 0.0}, 0, {0, 0}, src);
    const double lam = 0.5;
    GridPtr target = make_grid(Domain::disk({0, 0}, 1.0), 1.0 / 128.0);
    auto [ru, rpsi] = rescale(u, psi, {0, 0}, lam, target);
    double lhs = energy(ru, rpsi, Domain::disk({0, 0}, 1.0));
    double rhs = energy(u, psi, Domain::disk({0, 0}, lam));
    CHECK(lhs == doctest::Approx(rhs).epsilon(5e-3));
    // vanished u survives the transform as vanished
    CHECK(ru.is_vanished());
}

TEST_CASE("rescale window must stay inside the source") {
    GridPtr src = make_grid(Domain::disk({0, 0}, 1.0), 1.0 / 32.0);
    auto [u, psi] = liouville_bubble(1.0, {0, 0}, src);
    GridPtr target = make_grid(Domain::disk({0, 0}, 1.0), 1.0 / 32.0);
    CHECK_THROWS_AS(rescale(u, psi, {0, 0}, 2.0, target), std::domain_error);
    CHECK_THROWS_AS(rescale(u, psi, {0, 0}, -1.0, target), std::invalid_argument);
}

TEST_CASE("kelvin maps u_lam to u_{1/lam}") {
    const double lam = 2.0;
    GridPtr src = make_grid(Domain::disk({0, 0}, 4.0), 1.0 / 64.0);
    auto [u, psi] = liouville_bubble(lam, {0, 0}, src);
    GridPtr target = make_grid(Domain::annulus({0, 0}, 0.5, 2.0), 1.0 / 64.0);
    auto [ku, kpsi] = kelvin(u, psi, target);
    auto [want, wpsi] = liouville_bubble(1.0 / lam, {0, 0}, target);
    CHECK(testutil::sup_diff_interior(ku, want) < 5e-3);
}

TEST_CASE("kelvin is an involution") {
    GridPtr src = make_grid(Domain::disk({0, 0}, 4.0), 1.0 / 32.0);
    testutil::SmoothState st = testutil::random_state(src, 3, 0.3);
    GridPtr mid = make_grid(Domain::annulus({0, 0}, 0.4, 2.2), 1.0 / 64.0);
    auto [ku, kpsi] = kelvin(st.u, st.psi, mid);
    GridPtr back = make_grid(Domain::annulus({0, 0}, 0.55, 1.8), 1.0 / 64.0);
    auto [bu, bpsi] = kelvin(ku, kpsi, back);
    // compare against the original sampled on the back grid
    double worst = 0.0;
    for (std::size_t i = 0; i < back->size(); ++i) {
        if (back->kind(i) != NodeKind::Interior) continue;
        worst = std::max(worst,
                         std::abs(bu[i] - src->interp(st.u.values(), back->coord(i))));
    }
    CHECK(worst < 2e-2);

    // |psi1(x)| = |x|^{-1} |psi(x/|x|^2)| exactly at sample points (the weight
    // multiplies the component-interpolated source values).
    for (std::size_t i = 0; i < mid->size(); i += 97) {
        if (mid->kind(i) == NodeKind::Exterior) continue;
        Vec2 x = mid->coord(i);
        Vec2 inv = x * (1.0 / x.norm2());
        double n2 = 0.0;
        for (int k = 0; k < 4; ++k) {
            double c = src->interp(st.psi.comp(k), inv);
            n2 += c * c;
        }
        double want = std::sqrt(n2) / x.norm();
        CHECK(std::sqrt(kpsi.norm2(i)) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("kelvin target must exclude the origin") {
    GridPtr src = make_grid(Domain::disk({0, 0}, 4.0), 1.0 / 16.0);
    auto [u, psi] = liouville_bubble(1.0, {0, 0}, src);
    GridPtr bad = make_grid(Domain::disk({0, 0}, 1.0), 1.0 / 16.0);
    CHECK_THROWS_AS(kelvin(u, psi, bad), std::invalid_argument);
}

TEST_CASE("sphere sample covers the capped sphere area") {
    SphereSample s = make_sphere_sample(24, 32, 0.3);
    double area = 0.0;
    for (int it = 0; it < s.n_theta; ++it)
        for (int ip = 0; ip < s.n_phi; ++ip) area += s.weight[it];
    // int over theta in (theta_min, pi) of sin = 1 + cos(theta_min)
    CHECK(area == doctest::Approx(2.0 * kPi * (1.0 + std::cos(0.3))).epsilon(1e-10));
    for (int it = 0; it < s.n_theta; ++it) CHECK(s.lambda_conf(it) >= 0.5);
    CHECK_THROWS_AS(make_sphere_sample(1, 32, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(make_sphere_sample(8, 32, -0.1), std::invalid_argument);
}

TEST_CASE("stereographic pullback of the unit bubble is constant") {
    // v = u_{lam=1} o f + ln lambda_conf = -ln(2)/2 identically; the sphere
    // energy of e^{2v} is then (almost) 4 pi / 2 = 2 pi = int e^{2u}.
    GridPtr g = make_grid(Domain::disk({0, 0}, 11.5), 1.0 / 24.0);
    auto [u, psi] = liouville_bubble(1.0, {0, 0}, g);
    SphereSample s = make_sphere_sample(32, 48, 0.18);  // cot(0.09) = 11.08 < 11.5
    SphereFields f = stereographic_pullback(u, psi, s);
    const double half_ln2 = 0.5 * std::log(2.0);
    for (double v : f.v) CHECK(v == doctest::Approx(-half_ln2).epsilon(2e-3));
    // capped closed form: e^{2v} = 1/2 over area 2 pi (1 + cos theta_min)
    CHECK(f.e2v_integral ==
          doctest::Approx(kPi * (1.0 + std::cos(0.18))).epsilon(3e-3));
    // within 1e-2 of the full-plane value 2 pi (cap loss is theta^2/4 = 0.8%)
    CHECK(f.e2v_integral == doctest::Approx(2.0 * kPi).epsilon(1e-2));
    CHECK(f.sup_abs_v_near_pole == doctest::Approx(half_ln2).epsilon(2e-3));
    CHECK(!f.u_vanished);
}

TEST_CASE("pullback rejects samples that leave the planar grid") {
    GridPtr g = make_grid(Domain::disk({0, 0}, 2.0), 1.0 / 16.0);
    auto [u, psi] = liouville_bubble(1.0, {0, 0}, g);
    // theta_min = 0.2 -> |f| up to cot(0.1) = 10 > 2
    SphereSample s = make_sphere_sample(16, 24, 0.2);
    CHECK_THROWS_AS(stereographic_pullback(u, psi, s), std::domain_error);
}

}  // TEST_SUITE
