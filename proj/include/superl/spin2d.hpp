#pragma once

#include <array>
#include <complex>
#include <vector>

#include "superl/geometry.hpp"

namespace superl {

using cplx = std::complex<double>;
using Mat2c = std::array<std::array<cplx, 2>, 2>;  // [row][col]
using Mat4r = std::array<std::array<double, 4>, 4>;

/// Pointwise 2-component spinor.
struct SpinorValue {
    cplx c1{};
    cplx c2{};

    double norm2() const { return std::norm(c1) + std::norm(c2); }
    SpinorValue operator+(const SpinorValue& o) const { return {c1 + o.c1, c2 + o.c2}; }
    SpinorValue operator-(const SpinorValue& o) const { return {c1 - o.c1, c2 - o.c2}; }
    SpinorValue operator*(cplx s) const { return {s * c1, s * c2}; }
    SpinorValue operator*(double s) const { return {s * c1, s * c2}; }
};

/// Hermitian pairing <a,b> = a1*conj(b1) + a2*conj(b2).
inline cplx spinor_inner(const SpinorValue& a, const SpinorValue& b) {
    return a.c1 * std::conj(b.c1) + a.c2 * std::conj(b.c2);
}

inline SpinorValue mat_apply(const Mat2c& m, const SpinorValue& s) {
    return {m[0][0] * s.c1 + m[0][1] * s.c2, m[1][0] * s.c1 + m[1][1] * s.c2};
}

/// Generators of the flat 2D Clifford algebra. Both matrices must be
/// skew-Hermitian and satisfy gi*gj + gj*gi = -2*delta_ij exactly.
struct CliffordRep {
    Mat2c gamma1;
    Mat2c gamma2;

    /// gamma1 = i*sigma1, gamma2 = i*sigma2 (relations hold exactly in floats).
    static const CliffordRep& standard();

    /// Throws std::invalid_argument if the algebra relations fail.
    void verify() const;
};

/// Clifford action (v1*gamma1 + v2*gamma2) s; |result| = |v|*|s|.
SpinorValue clifford_mul(Vec2 v, const SpinorValue& s,
                         const CliffordRep& rep = CliffordRep::standard());

/// Real 4x4 block of a complex 2x2 matrix acting on (Re c1, Im c1, Re c2, Im c2).
Mat4r real_block(const Mat2c& m);

class Grid;
class ScalarField;
class SpinorField;

/// D psi = gamma1 d1 psi + gamma2 d2 psi. Centered second-order differences at
/// interior nodes, one-sided second-order at boundary nodes. Valid on interior.
SpinorField dirac_apply(const SpinorField& psi,
                        const CliffordRep& rep = CliffordRep::standard());

/// 5-point Laplacian at interior nodes; boundary/exterior left at zero.
ScalarField laplacian_apply(const ScalarField& f);
SpinorField laplacian_apply(const SpinorField& f);

/// Per-node first derivatives of sampled values: centered at interior nodes,
/// one-sided second-order into the domain at boundary nodes, zero outside.
void gradient(const Grid& g, const std::vector<double>& v, std::vector<double>& dx,
              std::vector<double>& dy);

}  // namespace superl
