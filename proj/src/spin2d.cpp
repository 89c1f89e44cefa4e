#include "superl/spin2d.hpp"

#include <cmath>
#include <stdexcept>

#include "superl/fields.hpp"
#include "superl/parallel.hpp"

namespace superl {

namespace {

Mat2c add(const Mat2c& a, const Mat2c& b) {
    Mat2c r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = a[i][j] + b[i][j];
    return r;
}

Mat2c mul(const Mat2c& a, const Mat2c& b) {
    Mat2c r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

double max_abs_dev(const Mat2c& m, const Mat2c& target) {
    double d = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(m[i][j] - target[i][j]));
    return d;
}

/// Per-node first derivative: centered where both axis neighbors are usable,
/// one-sided second-order into the domain otherwise, 0 when neither fits.
void diff_axis(const Grid& g, const std::vector<double>& v, int axis,
               std::vector<double>& out) {
    const double inv2h = 1.0 / (2.0 * g.h());
    const int di = axis == 0 ? 1 : 0;
    const int dj = axis == 0 ? 0 : 1;
    parallel_rows(g.ny(), [&](int j) {
        for (int i = 0; i < g.nx(); ++i) {
            std::size_t idx = g.index(i, j);
            if (g.kind(idx) == NodeKind::Exterior) {
                out[idx] = 0.0;
                continue;
            }
            auto usable = [&](int s) {
                int ii = i + s * di, jj = j + s * dj;
                return ii >= 0 && ii < g.nx() && jj >= 0 && jj < g.ny() &&
                       g.kind(ii, jj) != NodeKind::Exterior;
            };
            if (usable(1) && usable(-1))
                out[idx] = (v[g.index(i + di, j + dj)] - v[g.index(i - di, j - dj)]) * inv2h;
            else if (usable(1) && usable(2))
                out[idx] = (-3.0 * v[idx] + 4.0 * v[g.index(i + di, j + dj)] -
                            v[g.index(i + 2 * di, j + 2 * dj)]) *
                           inv2h;
            else if (usable(-1) && usable(-2))
                out[idx] = (3.0 * v[idx] - 4.0 * v[g.index(i - di, j - dj)] +
                            v[g.index(i - 2 * di, j - 2 * dj)]) *
                           inv2h;
            else
                out[idx] = 0.0;
        }
    });
}

}  // namespace

const CliffordRep& CliffordRep::standard() {
    // gamma1 = i*sigma1, gamma2 = i*sigma2
    static const CliffordRep rep{
        Mat2c{{{cplx(0, 0), cplx(0, 1)}, {cplx(0, 1), cplx(0, 0)}}},
        Mat2c{{{cplx(0, 0), cplx(1, 0)}, {cplx(-1, 0), cplx(0, 0)}}}};
    return rep;
}

void CliffordRep::verify() const {
    const double tol = 1e-14;
    const Mat2c zero{};
    const Mat2c minus2I{{{cplx(-2, 0), cplx(0, 0)}, {cplx(0, 0), cplx(-2, 0)}}};
    for (const Mat2c* g : {&gamma1, &gamma2}) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (std::abs((*g)[i][j] + std::conj((*g)[j][i])) > tol)
                    throw std::invalid_argument("Clifford generator not skew-Hermitian");
    }
    if (max_abs_dev(add(mul(gamma1, gamma1), mul(gamma1, gamma1)), minus2I) > tol ||
        max_abs_dev(add(mul(gamma2, gamma2), mul(gamma2, gamma2)), minus2I) > tol ||
        max_abs_dev(add(mul(gamma1, gamma2), mul(gamma2, gamma1)), zero) > tol)
        throw std::invalid_argument("Clifford relations violated");
}

SpinorValue clifford_mul(Vec2 v, const SpinorValue& s, const CliffordRep& rep) {
    Mat2c m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m[i][j] = v.x * rep.gamma1[i][j] + v.y * rep.gamma2[i][j];
    return mat_apply(m, s);
}

Mat4r real_block(const Mat2c& m) {
    Mat4r r{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            double re = m[i][j].real(), im = m[i][j].imag();
            r[2 * i][2 * j] = re;
            r[2 * i][2 * j + 1] = -im;
            r[2 * i + 1][2 * j] = im;
            r[2 * i + 1][2 * j + 1] = re;
        }
    }
    return r;
}

SpinorField dirac_apply(const SpinorField& psi, const CliffordRep& rep) {
    const Grid& g = *psi.grid();
    if (g.nx() < 5 || g.ny() < 5)
        throw std::invalid_argument("dirac_apply needs at least 5 nodes per axis");
    std::vector<std::vector<double>> dx(4, std::vector<double>(g.size()));
    std::vector<std::vector<double>> dy(4, std::vector<double>(g.size()));
    for (int k = 0; k < 4; ++k) {
        diff_axis(g, psi.comp(k), 0, dx[k]);
        diff_axis(g, psi.comp(k), 1, dy[k]);
    }
    SpinorField out(psi.grid());
    parallel_rows(g.ny(), [&](int j) {
        for (int i = 0; i < g.nx(); ++i) {
            std::size_t idx = g.index(i, j);
            if (g.kind(idx) == NodeKind::Exterior) continue;
            SpinorValue vx{{dx[0][idx], dx[1][idx]}, {dx[2][idx], dx[3][idx]}};
            SpinorValue vy{{dy[0][idx], dy[1][idx]}, {dy[2][idx], dy[3][idx]}};
            out.set(idx, mat_apply(rep.gamma1, vx) + mat_apply(rep.gamma2, vy));
        }
    });
    return out;
}

ScalarField laplacian_apply(const ScalarField& f) {
    const Grid& g = *f.grid();
    if (g.nx() < 5 || g.ny() < 5)
        throw std::invalid_argument("laplacian_apply needs at least 5 nodes per axis");
    if (f.is_vanished()) return ScalarField::vanished(f.grid());
    ScalarField out(f.grid());
    const double invh2 = 1.0 / (g.h() * g.h());
    const auto& v = f.values();
    parallel_rows(g.ny(), [&](int j) {
        for (int i = 0; i < g.nx(); ++i) {
            std::size_t idx = g.index(i, j);
            if (g.kind(idx) != NodeKind::Interior) continue;
            out[idx] = (v[g.index(i + 1, j)] + v[g.index(i - 1, j)] + v[g.index(i, j + 1)] +
                        v[g.index(i, j - 1)] - 4.0 * v[idx]) *
                       invh2;
        }
    });
    return out;
}

void gradient(const Grid& g, const std::vector<double>& v, std::vector<double>& dx,
              std::vector<double>& dy) {
    dx.resize(g.size());
    dy.resize(g.size());
    diff_axis(g, v, 0, dx);
    diff_axis(g, v, 1, dy);
}

SpinorField laplacian_apply(const SpinorField& f) {
    const Grid& g = *f.grid();
    if (g.nx() < 5 || g.ny() < 5)
        throw std::invalid_argument("laplacian_apply needs at least 5 nodes per axis");
    SpinorField out(f.grid());
    const double invh2 = 1.0 / (g.h() * g.h());
    for (int k = 0; k < 4; ++k) {
        const auto& v = f.comp(k);
        auto& o = out.comp(k);
        parallel_rows(g.ny(), [&](int j) {
            for (int i = 0; i < g.nx(); ++i) {
                std::size_t idx = g.index(i, j);
                if (g.kind(idx) != NodeKind::Interior) continue;
                o[idx] = (v[g.index(i + 1, j)] + v[g.index(i - 1, j)] +
                          v[g.index(i, j + 1)] + v[g.index(i, j - 1)] - 4.0 * v[idx]) *
                         invh2;
            }
        });
    }
    return out;
}

}  // namespace superl
