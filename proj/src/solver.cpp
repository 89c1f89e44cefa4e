#include "superl/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <limits>

#include "superl/errors.hpp"

namespace superl {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Trip = Eigen::Triplet<double>;

constexpr double kExpClamp = 50.0;
constexpr std::pair<int, int> kAxisDirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

struct Layout {
    const Grid* g = nullptr;
    std::vector<int> compact;        // lattice index -> node number, -1 if exterior
    std::vector<std::size_t> nodes;  // node number -> lattice index
    int count = 0;

    explicit Layout(const Grid& grid) : g(&grid), compact(grid.size(), -1) {
        for (std::size_t idx = 0; idx < grid.size(); ++idx) {
            if (grid.kind(idx) == NodeKind::Exterior) continue;
            compact[idx] = count++;
            nodes.push_back(idx);
        }
    }
    int base(std::size_t lattice_idx) const { return 5 * compact[lattice_idx]; }
    int unknowns() const { return 5 * count; }
};

struct St {
    std::size_t idx;
    double c;
};

/// First-derivative stencil along an axis: centered when both neighbors are
/// usable, else one-sided second-order into the domain. Same rules as
/// dirac_apply, so assembled rows match the operator exactly.
int axis_stencil(const Grid& g, int i, int j, int axis, St out[3]) {
    const double inv2h = 1.0 / (2.0 * g.h());
    const int di = axis == 0 ? 1 : 0;
    const int dj = axis == 0 ? 0 : 1;
    auto usable = [&](int s) {
        int ii = i + s * di, jj = j + s * dj;
        return ii >= 0 && ii < g.nx() && jj >= 0 && jj < g.ny() &&
               g.kind(ii, jj) != NodeKind::Exterior;
    };
    std::size_t idx = g.index(i, j);
    if (usable(1) && usable(-1)) {
        out[0] = {g.index(i + di, j + dj), inv2h};
        out[1] = {g.index(i - di, j - dj), -inv2h};
        return 2;
    }
    if (usable(1) && usable(2)) {
        out[0] = {idx, -3.0 * inv2h};
        out[1] = {g.index(i + di, j + dj), 4.0 * inv2h};
        out[2] = {g.index(i + 2 * di, j + 2 * dj), -inv2h};
        return 3;
    }
    if (usable(-1) && usable(-2)) {
        out[0] = {idx, 3.0 * inv2h};
        out[1] = {g.index(i - di, j - dj), -4.0 * inv2h};
        out[2] = {g.index(i - 2 * di, j - 2 * dj), -inv2h};
        return 3;
    }
    return 0;
}

Mat4r mat4_mul(const Mat4r& a, const Mat4r& b) {
    Mat4r r{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

std::array<double, 4> mat4_apply(const Mat4r& a, const std::array<double, 4>& v) {
    std::array<double, 4> r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i] += a[i][j] * v[j];
    return r;
}

Mat4r identity4() {
    Mat4r r{};
    for (int i = 0; i < 4; ++i) r[i][i] = 1.0;
    return r;
}

struct System {
    const Layout& lay;
    const CouplingField& F;
    const ScalarBC& bc_u;
    const SpinorBC& bc_psi;
    const CliffordRep& rep;
    Mat4r G1, G2;

    System(const Layout& l, const CouplingField& f, const ScalarBC& bu, const SpinorBC& bp,
           const CliffordRep& r)
        : lay(l), F(f), bc_u(bu), bc_psi(bp), rep(r),
          G1(real_block(r.gamma1)), G2(real_block(r.gamma2)) {}

    const Grid& grid() const { return *lay.g; }

    double exp_u(double u, bool clamp) const {
        return std::exp(clamp ? std::min(u, kExpClamp) : u);
    }

    std::array<double, 4> psi_at(const Vec& x, std::size_t idx) const {
        int b = lay.base(idx);
        return {x[b + 1], x[b + 2], x[b + 3], x[b + 4]};
    }

    /// One Dirac value (real 4-vector) from the stencil rows of both axes.
    std::array<double, 4> dirac_value(const Vec& x, int i, int j) const {
        std::array<double, 4> acc{};
        St st[3];
        for (int axis = 0; axis < 2; ++axis) {
            const Mat4r& G = axis == 0 ? G1 : G2;
            int n = axis_stencil(grid(), i, j, axis, st);
            for (int e = 0; e < n; ++e) {
                auto p = psi_at(x, st[e].idx);
                auto gp = mat4_apply(G, p);
                for (int r = 0; r < 4; ++r) acc[r] += st[e].c * gp[r];
            }
        }
        return acc;
    }

    Vec residual(const Vec& x, bool clamp) const {
        const Grid& g = grid();
        Vec out = Vec::Zero(lay.unknowns());
        const double invh2 = 1.0 / (g.h() * g.h());
        for (int n = 0; n < lay.count; ++n) {
            std::size_t idx = lay.nodes[n];
            int i = static_cast<int>(idx % g.nx());
            int j = static_cast<int>(idx / g.nx());
            int b = 5 * n;
            double u = x[b + 0];
            auto p = psi_at(x, idx);
            double n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
            double eu = exp_u(u, clamp);
            double e2u = eu * eu;
            double Fv = F.value(idx);
            if (g.kind(idx) == NodeKind::Interior) {
                double lap = (x[lay.base(g.index(i + 1, j))] +
                              x[lay.base(g.index(i - 1, j))] +
                              x[lay.base(g.index(i, j + 1))] +
                              x[lay.base(g.index(i, j - 1))] - 4.0 * u) *
                             invh2;
                out[b + 0] = -lap - 2.0 * e2u + eu * n2;
                auto dv = dirac_value(x, i, j);
                double c = eu + 2.0 * Fv * n2;
                for (int r = 0; r < 4; ++r) out[b + 1 + r] = dv[r] + c * p[r];
            } else {
                Vec2 pos = g.coord(i, j);
                out[b + 0] = u - bc_u(pos);
                Mat4r P = real_block(chiral_bag_projector(
                    g.domain().outward_normal(pos), rep));
                SpinorValue bc = bc_psi(pos);
                std::array<double, 4> diff = {p[0] - bc.c1.real(), p[1] - bc.c1.imag(),
                                              p[2] - bc.c2.real(), p[3] - bc.c2.imag()};
                auto proj = mat4_apply(P, diff);
                auto dv = dirac_value(x, i, j);
                double c = eu + 2.0 * Fv * n2;
                std::array<double, 4> res;
                for (int r = 0; r < 4; ++r) res[r] = dv[r] + c * p[r];
                Mat4r M = identity4();
                for (int r = 0; r < 4; ++r)
                    for (int cc = 0; cc < 4; ++cc) M[r][cc] -= P[r][cc];
                auto tail = mat4_apply(M, res);
                for (int r = 0; r < 4; ++r) out[b + 1 + r] = proj[r] + tail[r];
            }
        }
        return out;
    }

    SpMat jacobian(const Vec& x) const {
        const Grid& g = grid();
        const double invh2 = 1.0 / (g.h() * g.h());
        std::vector<Trip> trips;
        trips.reserve(static_cast<std::size_t>(lay.count) * 120);
        St st[3];
        for (int n = 0; n < lay.count; ++n) {
            std::size_t idx = lay.nodes[n];
            int i = static_cast<int>(idx % g.nx());
            int j = static_cast<int>(idx / g.nx());
            int b = 5 * n;
            double u = x[b + 0];
            auto p = psi_at(x, idx);
            double n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
            double eu = std::exp(std::min(u, kExpClamp));
            double Fv = F.value(idx);
            bool interior = g.kind(idx) == NodeKind::Interior;

            if (interior) {
                trips.emplace_back(b, b, 4.0 * invh2 - 4.0 * eu * eu + eu * n2);
                for (auto [di, dj] : kAxisDirs)
                    trips.emplace_back(b, lay.base(g.index(i + di, j + dj)), -invh2);
                for (int k = 0; k < 4; ++k)
                    trips.emplace_back(b, b + 1 + k, 2.0 * eu * p[k]);
                // psi rows: Dirac stencil + (e^u + 2F|psi|^2) I + 4F p p^T; u column e^u p
                for (int axis = 0; axis < 2; ++axis) {
                    const Mat4r& G = axis == 0 ? G1 : G2;
                    int ns = axis_stencil(g, i, j, axis, st);
                    for (int e = 0; e < ns; ++e) {
                        int be = lay.base(st[e].idx);
                        for (int r = 0; r < 4; ++r)
                            for (int c = 0; c < 4; ++c)
                                if (G[r][c] != 0.0)
                                    trips.emplace_back(b + 1 + r, be + 1 + c,
                                                       st[e].c * G[r][c]);
                    }
                }
                double dc = eu + 2.0 * Fv * n2;
                for (int r = 0; r < 4; ++r) {
                    trips.emplace_back(b + 1 + r, b + 0, eu * p[r]);
                    for (int c = 0; c < 4; ++c) {
                        double v = 4.0 * Fv * p[r] * p[c] + (r == c ? dc : 0.0);
                        if (v != 0.0) trips.emplace_back(b + 1 + r, b + 1 + c, v);
                    }
                }
            } else {
                trips.emplace_back(b, b, 1.0);
                Vec2 pos = g.coord(i, j);
                Mat4r P = real_block(chiral_bag_projector(
                    g.domain().outward_normal(pos), rep));
                Mat4r M = identity4();
                for (int r = 0; r < 4; ++r)
                    for (int c = 0; c < 4; ++c) M[r][c] -= P[r][c];
                // rows: P + M * (Dirac + diag); u column: M * (e^u p)
                for (int axis = 0; axis < 2; ++axis) {
                    const Mat4r& G = axis == 0 ? G1 : G2;
                    Mat4r MG = mat4_mul(M, G);
                    int ns = axis_stencil(g, i, j, axis, st);
                    for (int e = 0; e < ns; ++e) {
                        int be = lay.base(st[e].idx);
                        for (int r = 0; r < 4; ++r)
                            for (int c = 0; c < 4; ++c)
                                if (MG[r][c] != 0.0)
                                    trips.emplace_back(b + 1 + r, be + 1 + c,
                                                       st[e].c * MG[r][c]);
                    }
                }
                double dc = eu + 2.0 * Fv * n2;
                Mat4r D{};
                for (int r = 0; r < 4; ++r) {
                    D[r][r] = dc;
                    for (int c = 0; c < 4; ++c) D[r][c] += 4.0 * Fv * p[r] * p[c];
                }
                Mat4r MD = mat4_mul(M, D);
                std::array<double, 4> ucol = mat4_apply(M, {eu * p[0], eu * p[1],
                                                            eu * p[2], eu * p[3]});
                for (int r = 0; r < 4; ++r) {
                    trips.emplace_back(b + 1 + r, b + 0, ucol[r]);
                    for (int c = 0; c < 4; ++c) {
                        double v = P[r][c] + MD[r][c];
                        if (v != 0.0) trips.emplace_back(b + 1 + r, b + 1 + c, v);
                    }
                }
            }
        }
        SpMat A(lay.unknowns(), lay.unknowns());
        A.setFromTriplets(trips.begin(), trips.end());
        return A;
    }
};

Vec pack(const Layout& lay, const ScalarField& u, const SpinorField& psi) {
    Vec x(lay.unknowns());
    for (int n = 0; n < lay.count; ++n) {
        std::size_t idx = lay.nodes[n];
        x[5 * n + 0] = u[idx];
        SpinorValue s = psi.at(idx);
        x[5 * n + 1] = s.c1.real();
        x[5 * n + 2] = s.c1.imag();
        x[5 * n + 3] = s.c2.real();
        x[5 * n + 4] = s.c2.imag();
    }
    return x;
}

void unpack(const Layout& lay, const Vec& x, ScalarField& u, SpinorField& psi) {
    for (int n = 0; n < lay.count; ++n) {
        std::size_t idx = lay.nodes[n];
        u[idx] = x[5 * n + 0];
        psi.set(idx, {{x[5 * n + 1], x[5 * n + 2]}, {x[5 * n + 3], x[5 * n + 4]}});
    }
}

void split_norms(const Layout& lay, const Vec& r, double& nu, double& npsi) {
    nu = 0.0;
    npsi = 0.0;
    for (int n = 0; n < lay.count; ++n) {
        nu = std::max(nu, std::abs(r[5 * n]));
        for (int k = 1; k < 5; ++k) npsi = std::max(npsi, std::abs(r[5 * n + k]));
    }
}

}  // namespace

void SolverConfig::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (!(backtrack > 0.0 && backtrack < 1.0))
        throw std::invalid_argument("backtracking factor must lie in (0,1)");
    if (!(min_step > 0.0)) throw std::invalid_argument("min_step must be positive");
}

Mat2c chiral_bag_projector(Vec2 nu, const CliffordRep& rep) {
    Mat2c p;
    const cplx mi(0.0, -1.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            cplx ng = nu.x * rep.gamma1[i][j] + nu.y * rep.gamma2[i][j];
            p[i][j] = 0.5 * ((i == j ? 1.0 : 0.0) + mi * ng);
        }
    return p;
}

ScalarField linear_poisson_solve(const ScalarField& rhs, const ScalarBC& bc) {
    const Grid& g = *rhs.grid();
    if (rhs.is_vanished())
        throw std::invalid_argument("poisson right-hand side must not be vanished");
    Layout lay(g);
    const double invh2 = 1.0 / (g.h() * g.h());
    std::vector<Trip> trips;
    Vec b = Vec::Zero(lay.count);
    trips.reserve(static_cast<std::size_t>(lay.count) * 5);
    for (int n = 0; n < lay.count; ++n) {
        std::size_t idx = lay.nodes[n];
        int i = static_cast<int>(idx % g.nx());
        int j = static_cast<int>(idx / g.nx());
        if (g.kind(idx) == NodeKind::Interior) {
            trips.emplace_back(n, n, 4.0 * invh2);
            for (auto [di, dj] : kAxisDirs)
                trips.emplace_back(n, lay.compact[g.index(i + di, j + dj)], -invh2);
            b[n] = rhs[idx];
        } else {
            trips.emplace_back(n, n, 1.0);
            b[n] = bc(g.coord(i, j));
        }
    }
    SpMat A(lay.count, lay.count);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<SpMat> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw ComputeError("poisson factorization failed: " + lu.lastErrorMessage());
    Vec sol = lu.solve(b);
    if (lu.info() != Eigen::Success) throw ComputeError("poisson solve failed");
    ScalarField out(rhs.grid());
    for (int n = 0; n < lay.count; ++n) out[lay.nodes[n]] = sol[n];
    return out;
}

SolveResult newton_solve(const ScalarField& u0, const SpinorField& psi0,
                         const CouplingField& F, const ScalarBC& bc_u,
                         const SpinorBC& bc_psi, const SolverConfig& config,
                         const CliffordRep& rep) {
    config.validate();
    if (u0.is_vanished())
        throw std::invalid_argument("newton_solve needs a non-vanished initial u");
    const Grid& g = *u0.grid();
    Layout lay(g);
    System sys(lay, F, bc_u, bc_psi, rep);

    Vec x = pack(lay, u0, psi0);
    SolveReport rep_out;
    Vec res = sys.residual(x, false);
    double norm = res.lpNorm<Eigen::Infinity>();
    rep_out.residual_history.push_back(norm);

    for (int it = 0; it < config.max_iter && norm >= config.tol; ++it) {
        SpMat A = sys.jacobian(x);
        Eigen::SparseLU<SpMat> lu;
        lu.compute(A);
        if (lu.info() != Eigen::Success)
            throw ComputeError("singular Jacobian at iteration " + std::to_string(it) +
                               ": " + lu.lastErrorMessage());
        Vec step = lu.solve(-res);
        if (lu.info() != Eigen::Success)
            throw ComputeError("Jacobian back-substitution failed at iteration " +
                               std::to_string(it));

        double t = 1.0;
        bool accepted = false;
        while (t >= config.min_step) {
            Vec trial = x + t * step;
            double trial_norm = sys.residual(trial, true).lpNorm<Eigen::Infinity>();
            if (std::isfinite(trial_norm) && trial_norm <= (1.0 - 1e-4 * t) * norm) {
                x = std::move(trial);
                res = sys.residual(x, false);
                norm = res.lpNorm<Eigen::Infinity>();
                accepted = true;
                break;
            }
            t *= config.backtrack;
        }
        rep_out.iterations = it + 1;
        if (!accepted) break;  // damping floor: return best iterate, converged=false
        rep_out.residual_history.push_back(norm);
    }

    rep_out.converged = norm < config.tol;
    split_norms(lay, res, rep_out.final_residual_u, rep_out.final_residual_psi);
    ScalarField u(u0.grid());
    SpinorField psi(u0.grid());
    unpack(lay, x, u, psi);
    return {std::move(u), std::move(psi), std::move(rep_out)};
}

std::pair<ScalarField, SpinorField> jacobian_matvec(
    const ScalarField& u, const SpinorField& psi, const CouplingField& F,
    const ScalarField& du, const SpinorField& dpsi, const CliffordRep& rep) {
    const Grid& g = *u.grid();
    if (u.is_vanished())
        throw std::invalid_argument("jacobian_matvec needs a non-vanished u");
    ScalarField lap_du = laplacian_apply(du);
    SpinorField d_dpsi = dirac_apply(dpsi, rep);
    ScalarField ju(u.grid());
    SpinorField jpsi(u.grid());
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        if (g.kind(idx) != NodeKind::Interior) continue;
        double eu = std::exp(u[idx]);
        double n2 = psi.norm2(idx);
        SpinorValue p = psi.at(idx);
        SpinorValue dp = dpsi.at(idx);
        double re_pair = spinor_inner(dp, p).real();
        ju[idx] = -lap_du[idx] + (-4.0 * eu * eu + eu * n2) * du[idx] +
                  2.0 * eu * re_pair;
        double Fv = F.value(idx);
        SpinorValue jp = d_dpsi.at(idx) + dp * (eu + 2.0 * Fv * n2) +
                         p * (4.0 * Fv * re_pair) + p * (eu * du[idx]);
        jpsi.set(idx, jp);
    }
    return {std::move(ju), std::move(jpsi)};
}

}  // namespace superl
