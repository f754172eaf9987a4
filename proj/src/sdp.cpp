#include "bellrand/sdp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace bellrand {

void SparseSym::add(int r, int c, double v) {
    if (r > c) std::swap(r, c);
    entries.push_back({r, c, v});
}

Mat SparseSym::dense(int size) const {
    Mat m(size);
    for (const auto& e : entries) {
        m(e.row, e.col) += e.value;
        if (e.row != e.col) m(e.col, e.row) += e.value;
    }
    return m;
}

void BlockProblem::validate() const {
    if (num_vars <= 0) throw std::invalid_argument("problem has no variables");
    if (static_cast<int>(objective.size()) != num_vars)
        throw std::invalid_argument("objective length does not match num_vars");
    if (blocks.empty()) throw std::invalid_argument("problem has no blocks");
    for (const auto& bl : blocks) {
        if (bl.size <= 0) throw std::invalid_argument("block size must be positive");
        auto check = [&bl](const SparseSym& s) {
            for (const auto& e : s.entries)
                if (e.row < 0 || e.col < 0 || e.row >= bl.size || e.col >= bl.size ||
                    e.row > e.col)
                    throw std::invalid_argument("basis entry outside upper triangle");
        };
        check(bl.constant);
        for (const auto& [var, s] : bl.basis) {
            if (var < 0 || var >= num_vars)
                throw std::invalid_argument("basis variable index out of range");
            check(s);
        }
    }
    for (const auto& eq : equalities)
        for (const auto& [var, coeff] : eq.row) {
            (void)coeff;
            if (var < 0 || var >= num_vars)
                throw std::invalid_argument("equality variable index out of range");
        }
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::near_optimal: return "near_optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::numerical_trouble: return "numerical_trouble";
    }
    return "unknown";
}

namespace {

// Cholesky with a deterministic ridge escalation schedule. Returns false if
// even the largest ridge fails.
bool chol_ridge(const Mat& m, Mat& out) {
    double maxdiag = 1.0;
    for (int i = 0; i < m.n; ++i) maxdiag = std::max(maxdiag, std::abs(m(i, i)));
    static constexpr double kEps[] = {0.0, 1e-14, 1e-12, 1e-10, 1e-8, 1e-6};
    for (double eps : kEps) {
        out = m;
        for (int i = 0; i < m.n; ++i) out(i, i) += eps * maxdiag;
        if (cholesky_in_place(out)) return true;
    }
    return false;
}

struct BlockWork {
    int size = 0;
    Mat f0;                                        // dense constant part
    std::vector<std::pair<int, Mat>> basis_dense;  // kept sparse too in problem
    const BlockProblem::Block* spec = nullptr;

    Mat x, z;                // current iterates
    Mat xchol, xchol_inv;    // lower factor of X and its inverse
    Mat pmat, pinv;          // NT factor: W = P P^T, W^{-1} = Pinv^T Pinv
    Mat winv;
    std::vector<double> d;   // NT spectrum squared
    Mat dxa, dza, dxc, dzc;  // affine and corrector directions
};

double sparse_inner(const SparseSym& s, const Mat& m) {
    double acc = 0.0;
    for (const auto& e : s.entries)
        acc += (e.row == e.col ? 1.0 : 2.0) * e.value * m(e.row, e.col);
    return acc;
}

// T += v * (u_r u_c^T + u_c u_r^T), with u_i = column i of W (symmetric)
void accumulate_outer(Mat& t, const Mat& w, int r, int c, double v) {
    const int n = w.n;
    const double* ur = &w.a[static_cast<size_t>(r) * n];  // row r == column r
    const double* uc = &w.a[static_cast<size_t>(c) * n];
    for (int i = 0; i < n; ++i) {
        double* trow = &t.a[static_cast<size_t>(i) * n];
        const double vr = v * ur[i];
        const double vc = v * uc[i];
        for (int j = 0; j < n; ++j) trow[j] += vr * uc[j] + vc * ur[j];
    }
}

// W S W for sparse symmetric S (upper-triangle entries)
Mat sandwich_sparse(const Mat& w, const SparseSym& s) {
    Mat t(w.n);
    for (const auto& e : s.entries)
        accumulate_outer(t, w, e.row, e.col, e.row == e.col ? 0.5 * e.value : e.value);
    // diagonal entries were halved above so the mirrored add is uniform
    return t;
}

}  // namespace

SolveReport solve(const BlockProblem& prob, double tol, const SolveOptions& opts) {
    if (!(tol >= 1e-10)) throw std::invalid_argument("tol must be at least 1e-10");
    prob.validate();

    const int n = prob.num_vars;
    const int num_blocks = static_cast<int>(prob.blocks.size());

    // --- presolve: independent equality rows (deterministic elimination) ---
    const int m_all = static_cast<int>(prob.equalities.size());
    std::vector<int> kept;  // indices of independent rows
    {
        std::vector<std::vector<double>> rows;  // dense echelon workspace
        std::vector<double> rhs;
        for (int k = 0; k < m_all; ++k) {
            std::vector<double> r(n + 1, 0.0);
            for (const auto& [var, coeff] : prob.equalities[k].row) r[var] += coeff;
            r[n] = prob.equalities[k].rhs;
            // eliminate against accepted rows
            for (size_t i = 0; i < rows.size(); ++i) {
                int piv = -1;
                for (int j = 0; j < n; ++j)
                    if (rows[i][j] != 0.0) { piv = j; break; }
                if (piv < 0) continue;
                const double f = r[piv] / rows[i][piv];
                if (f != 0.0)
                    for (int j = 0; j <= n; ++j) r[j] -= f * rows[i][j];
            }
            double maxabs = 0.0;
            for (int j = 0; j < n; ++j) maxabs = std::max(maxabs, std::abs(r[j]));
            if (maxabs > 1e-11) {
                rows.push_back(r);
                kept.push_back(k);
            } else if (std::abs(r[n]) > 1e-9) {
                SolveReport rep;  // dependent row with inconsistent rhs
                rep.status = SolveStatus::infeasible;
                rep.variables.assign(n, 0.0);
                rep.eq_multipliers.assign(m_all, 0.0);
                return rep;
            }
        }
    }
    const int m = static_cast<int>(kept.size());
    std::vector<std::vector<std::pair<int, double>>> arow(m);
    std::vector<double> bvec(m);
    for (int k = 0; k < m; ++k) {
        arow[k] = prob.equalities[kept[k]].row;
        bvec[k] = prob.equalities[kept[k]].rhs;
    }

    // --- variable components (Schur matrix is block-diagonal over them) ---
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&parent, &find](int i) {
        return parent[i] == i ? i : parent[i] = find(parent[i]);
    };
    for (const auto& bl : prob.blocks)
        for (size_t j = 1; j < bl.basis.size(); ++j) {
            int a = find(bl.basis[0].first), b = find(bl.basis[j].first);
            if (a != b) parent[b] = a;
        }
    std::vector<int> comp_of(n), local_of(n);
    std::vector<std::vector<int>> comp_vars;
    {
        std::vector<int> root_to_comp(n, -1);
        for (int i = 0; i < n; ++i) {
            const int r = find(i);
            if (root_to_comp[r] < 0) {
                root_to_comp[r] = static_cast<int>(comp_vars.size());
                comp_vars.emplace_back();
            }
            comp_of[i] = root_to_comp[r];
            local_of[i] = static_cast<int>(comp_vars[comp_of[i]].size());
            comp_vars[comp_of[i]].push_back(i);
        }
    }
    const int num_comps = static_cast<int>(comp_vars.size());

    // --- workspaces ---
    std::vector<BlockWork> work(num_blocks);
    int ntot = 0;
    for (int e = 0; e < num_blocks; ++e) {
        auto& w = work[e];
        w.spec = &prob.blocks[e];
        w.size = w.spec->size;
        ntot += w.size;
        w.f0 = w.spec->constant.dense(w.size);
        for (const auto& [var, s] : w.spec->basis)
            w.basis_dense.emplace_back(var, s.dense(w.size));
        w.z = Mat::identity(w.size);
    }

    std::vector<double> y(n, 0.0), lam(m, 0.0);

    auto build_x = [&work, &y]() {
        for (auto& w : work) {
            w.x = w.f0;
            for (const auto& [var, f] : w.basis_dense)
                for (size_t i = 0; i < w.x.a.size(); ++i) w.x.a[i] += y[var] * f.a[i];
        }
    };

    // starting point: make every X strictly positive definite, preferring a
    // basis matrix equal to the identity on the block (the moment structure
    // provides one: the empty-word indicator)
    build_x();
    for (auto& w : work) {
        std::vector<double> vals;
        jacobi_eigen(w.x, vals, nullptr);
        if (vals.front() < 1e-6) {
            int id_var = -1;
            for (const auto& [var, f] : w.basis_dense) {
                bool is_id = true;
                for (int i = 0; i < w.size && is_id; ++i)
                    for (int j = 0; j < w.size; ++j)
                        if (std::abs(f(i, j) - (i == j ? 1.0 : 0.0)) > 0.0) {
                            is_id = false;
                            break;
                        }
                if (is_id) { id_var = var; break; }
            }
            if (id_var < 0)
                throw std::invalid_argument(
                    "no strictly feasible starting point: block lacks an identity "
                    "basis matrix and its constant part is not positive definite");
            y[id_var] += 1.0 - std::min(vals.front(), 0.0);
        }
    }
    build_x();

    const double bscale = [&bvec] {
        double s = 0.0;
        for (double v : bvec) s = std::max(s, std::abs(v));
        return 1.0 + s;
    }();
    const double cscale = [&prob] {
        double s = 0.0;
        for (double v : prob.objective) s = std::max(s, std::abs(v));
        return 1.0 + s;
    }();

    struct Snapshot {
        double merit = 1e300;
        std::vector<double> y, lam;
        std::vector<Mat> z;
        double pobj = 0, dobj = 0, relgap = 1, rpn = 0, rdn = 0;
        int iter = 0;
    } best;

    SolveReport rep;
    rep.eq_multipliers.assign(m_all, 0.0);
    bool infeasible_flag = false;
    int small_steps = 0;
    int it = 0;

    std::vector<Mat> zview(num_blocks);
    std::vector<double> lam_full(m_all, 0.0);

    for (it = 0; it < opts.max_iterations; ++it) {
        // residuals and objectives
        std::vector<double> rp(m, 0.0);
        for (int k = 0; k < m; ++k) {
            double s = bvec[k];
            for (const auto& [var, coeff] : arow[k]) s -= coeff * y[var];
            rp[k] = s;
        }
        std::vector<double> ftz(n, 0.0);
        for (const auto& w : work)
            for (const auto& [var, s] : w.spec->basis) ftz[var] += sparse_inner(s, w.z);
        std::vector<double> rd(n, 0.0);
        for (int j = 0; j < n; ++j) rd[j] = -prob.objective[j] - ftz[j];
        for (int k = 0; k < m; ++k)
            for (const auto& [var, coeff] : arow[k]) rd[var] += coeff * lam[k];

        double mu = 0.0;
        for (const auto& w : work) mu += frob_inner(w.x, w.z);
        mu /= ntot;
        double pobj = 0.0;
        for (int j = 0; j < n; ++j) pobj += prob.objective[j] * y[j];
        double dobj = 0.0;
        for (int k = 0; k < m; ++k) dobj += bvec[k] * lam[k];
        for (const auto& w : work) dobj += frob_inner(w.f0, w.z);
        const double relgap = std::abs(dobj - pobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        double rpn = 0.0, rdn = 0.0;
        for (double v : rp) rpn = std::max(rpn, std::abs(v));
        for (double v : rd) rdn = std::max(rdn, std::abs(v));

        if (opts.debug_checks) {
            // weak-duality identity: dobj - pobj = lam.rp + rd.y + <X,Z>
            double lr = 0.0, ry = 0.0, xz = 0.0;
            for (int k = 0; k < m; ++k) lr += lam[k] * rp[k];
            for (int j = 0; j < n; ++j) ry += rd[j] * y[j];
            for (const auto& w : work) xz += frob_inner(w.x, w.z);
            assert(xz >= 0.0);
            assert(std::abs((dobj - pobj) - (lr + ry + xz)) <=
                   1e-9 * (1.0 + std::abs(pobj) + std::abs(dobj) + xz));
        }

        if (opts.observer) {
            for (int e = 0; e < num_blocks; ++e) zview[e] = work[e].z;
            for (int k = 0; k < m; ++k) lam_full[kept[k]] = lam[k];
            opts.observer(IterateView{it, y, lam_full, zview, pobj, dobj, rpn, rdn});
        }

        const double merit = relgap + rpn / bscale + rdn / cscale;
        if (merit < best.merit) {
            best.merit = merit;
            best.y = y;
            best.lam = lam;
            best.z.clear();
            for (const auto& w : work) best.z.push_back(w.z);
            best.pobj = pobj;
            best.dobj = dobj;
            best.relgap = relgap;
            best.rpn = rpn;
            best.rdn = rdn;
            best.iter = it;
        }

        const bool at_optimum = relgap <= tol &&
                                std::abs(dobj - pobj) <=
                                    std::max(tol, 1e-8) * (1.0 + std::abs(pobj)) &&
                                rpn <= 10 * tol * bscale && rdn <= 10 * tol * cscale;
        if (at_optimum) break;

        // primal infeasibility certificate: (lam, Z psd) with
        // F*(Z) = A^T lam and b.lam + <F0, Z> < 0
        if (m > 0) {
            // A^T lam - F*(Z) = rd + c
            double certres = 0.0;
            for (int j = 0; j < n; ++j)
                certres = std::max(certres, std::abs(rd[j] + prob.objective[j]));
            double certval = 0.0;
            for (int k = 0; k < m; ++k) certval += bvec[k] * lam[k];
            for (const auto& w : work) certval += frob_inner(w.f0, w.z);
            double scale = 1.0;
            for (double v : lam) scale = std::max(scale, std::abs(v));
            for (const auto& w : work)
                for (double v : w.z.a) scale = std::max(scale, std::abs(v));
            if (certval / scale < -1e-7 && certres / scale < 1e-9) {
                infeasible_flag = true;
                break;
            }
        }
        if (mu < 1e-17 * (1.0 + std::abs(pobj))) break;

        // --- NT scaling per block ---
        bool scaling_ok = true;
        for (auto& w : work) {
            if (!chol_ridge(w.x, w.xchol)) { scaling_ok = false; break; }
            w.xchol_inv = lower_inverse(w.xchol);
            // Q = L^T Z L
            Mat q = matmul(transpose(w.xchol), matmul(w.z, w.xchol));
            q.symmetrize();
            Mat u;
            jacobi_eigen(q, w.d, &u);
            double dmax = 1e-300;
            for (double v : w.d) dmax = std::max(dmax, v);
            for (double& v : w.d) v = std::max(v, std::max(1e-14 * dmax, 1e-300));
            // P = L U d^{-1/4}, Pinv = d^{1/4} U^T L^{-1}
            w.pmat = matmul(w.xchol, u);
            w.pinv = Mat(w.size);
            for (int i = 0; i < w.size; ++i) {
                const double dq = std::pow(w.d[i], 0.25);
                for (int r = 0; r < w.size; ++r) w.pmat(r, i) /= dq;
            }
            Mat ut = transpose(u);
            for (int i = 0; i < w.size; ++i) {
                const double dq = std::pow(w.d[i], 0.25);
                for (int c = 0; c < w.size; ++c) {
                    double s = 0.0;
                    for (int k = 0; k < w.size; ++k) s += ut(i, k) * w.xchol_inv(k, c);
                    w.pinv(i, c) = dq * s;
                }
            }
            w.winv = matmul(transpose(w.pinv), w.pinv);
            w.winv.symmetrize();
        }
        if (!scaling_ok) break;

        // --- Schur complement, block-diagonal over variable components ---
        std::vector<Mat> ncomp(num_comps);
        for (int ci = 0; ci < num_comps; ++ci)
            ncomp[ci] = Mat(static_cast<int>(comp_vars[ci].size()));
        for (const auto& w : work) {
            const auto& basis = w.spec->basis;
            for (const auto& [vk, sk] : basis) {
                const Mat t = sandwich_sparse(w.winv, sk);
                const int ci = comp_of[vk];
                Mat& nc = ncomp[ci];
                const int lk = local_of[vk];
                for (const auto& [vj, sj] : basis) {
                    nc(local_of[vj], lk) += sparse_inner(sj, t);
                }
            }
        }
        std::vector<Mat> nchol(num_comps);
        bool nok = true;
        for (int ci = 0; ci < num_comps; ++ci) {
            ncomp[ci].symmetrize();
            if (!chol_ridge(ncomp[ci], nchol[ci])) { nok = false; break; }
        }
        if (!nok) break;

        auto nsolve = [&](std::vector<double>& v) {
            for (int ci = 0; ci < num_comps; ++ci) {
                const auto& vars = comp_vars[ci];
                std::vector<double> loc(vars.size());
                for (size_t i = 0; i < vars.size(); ++i) loc[i] = v[vars[i]];
                cholesky_solve(nchol[ci], loc);
                for (size_t i = 0; i < vars.size(); ++i) v[vars[i]] = loc[i];
            }
        };

        Mat schur(m);
        Mat schur_chol;
        std::vector<std::vector<double>> ainv_rows(m);
        if (m > 0) {
            for (int k = 0; k < m; ++k) {
                std::vector<double> t(n, 0.0);
                for (const auto& [var, coeff] : arow[k]) t[var] += coeff;
                nsolve(t);
                ainv_rows[k] = std::move(t);
            }
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    double s = 0.0;
                    for (const auto& [var, coeff] : arow[l]) s += coeff * ainv_rows[k][var];
                    schur(k, l) = s;
                }
            schur.symmetrize();
            if (!chol_ridge(schur, schur_chol)) break;
        }

        // newton(): scaled complementarity rhs Rhat per block (Rhat in the
        // NT v-space; the unscaled equation is dX + W dZ W = P Rhat P^T)
        auto newton = [&](const std::vector<Mat>& rhat, std::vector<double>& dy,
                          std::vector<double>& dlam, std::vector<Mat>& dz) {
            std::vector<double> h(n, 0.0);
            for (int e = 0; e < num_blocks; ++e) {
                const auto& w = work[e];
                Mat t = matmul(transpose(w.pinv), matmul(rhat[e], w.pinv));
                t.symmetrize();
                for (const auto& [var, s] : w.spec->basis) h[var] += sparse_inner(s, t);
            }
            std::vector<double> rhs1(n);
            for (int j = 0; j < n; ++j) rhs1[j] = h[j] - rd[j];
            dy = rhs1;
            nsolve(dy);
            dlam.assign(m, 0.0);
            if (m > 0) {
                std::vector<double> rhs2(m);
                for (int k = 0; k < m; ++k) {
                    double s = -rp[k];
                    for (const auto& [var, coeff] : arow[k]) s += coeff * dy[var];
                    rhs2[k] = s;
                }
                cholesky_solve(schur_chol, rhs2);
                dlam = rhs2;
                std::vector<double> adj(n, 0.0);
                for (int k = 0; k < m; ++k)
                    for (const auto& [var, coeff] : arow[k]) adj[var] += coeff * dlam[k];
                for (int j = 0; j < n; ++j) dy[j] = rhs1[j] - adj[j];
                nsolve(dy);
            }
            dz.assign(num_blocks, Mat());
            for (int e = 0; e < num_blocks; ++e) {
                const auto& w = work[e];
                Mat dx(w.size);
                for (const auto& [var, f] : w.basis_dense)
                    for (size_t i = 0; i < dx.a.size(); ++i) dx.a[i] += dy[var] * f.a[i];
                // dZ = Pinv^T (Rhat - Pinv dX Pinv^T) Pinv
                Mat dxh = matmul(w.pinv, matmul(dx, transpose(w.pinv)));
                Mat diff(w.size);
                for (size_t i = 0; i < diff.a.size(); ++i)
                    diff.a[i] = rhat[e].a[i] - dxh.a[i];
                Mat dzb = matmul(transpose(w.pinv), matmul(diff, w.pinv));
                dzb.symmetrize();
                dz[e] = std::move(dzb);
            }
        };

        auto dx_from_dy = [&](const std::vector<double>& dy, int e) {
            const auto& w = work[e];
            Mat dx(w.size);
            for (const auto& [var, f] : w.basis_dense)
                for (size_t i = 0; i < dx.a.size(); ++i) dx.a[i] += dy[var] * f.a[i];
            return dx;
        };

        // largest step in [0,1] keeping M + alpha dM positive definite,
        // found by bisection on Cholesky feasibility (undershoots)
        auto max_step = [](const Mat& mbase, const Mat& dm) {
            Mat trial = mbase;
            for (size_t i = 0; i < trial.a.size(); ++i) trial.a[i] += dm.a[i];
            if (cholesky_in_place(trial)) return 1.0;
            double lo = 0.0, hi = 1.0;
            for (int iter2 = 0; iter2 < 20; ++iter2) {
                const double mid = 0.5 * (lo + hi);
                trial = mbase;
                for (size_t i = 0; i < trial.a.size(); ++i) trial.a[i] += mid * dm.a[i];
                if (cholesky_in_place(trial))
                    lo = mid;
                else
                    hi = mid;
            }
            return lo;
        };

        // --- predictor (affine scaling) ---
        std::vector<Mat> rhat(num_blocks);
        for (int e = 0; e < num_blocks; ++e) {
            const auto& w = work[e];
            Mat r(w.size);
            for (int i = 0; i < w.size; ++i) r(i, i) = -std::sqrt(w.d[i]);
            rhat[e] = std::move(r);
        }
        std::vector<double> dya, dlama;
        std::vector<Mat> dza;
        newton(rhat, dya, dlama, dza);

        double apa = 1.0, ada = 1.0;
        for (int e = 0; e < num_blocks; ++e) {
            work[e].dxa = dx_from_dy(dya, e);
            apa = std::min(apa, max_step(work[e].x, work[e].dxa));
            ada = std::min(ada, max_step(work[e].z, dza[e]));
        }
        apa = std::min(1.0, 0.99 * apa);
        ada = std::min(1.0, 0.99 * ada);

        double mu_aff = 0.0;
        for (int e = 0; e < num_blocks; ++e) {
            const auto& w = work[e];
            Mat xn = w.x, zn = w.z;
            for (size_t i = 0; i < xn.a.size(); ++i) {
                xn.a[i] += apa * w.dxa.a[i];
                zn.a[i] += ada * dza[e].a[i];
            }
            mu_aff += frob_inner(xn, zn);
        }
        mu_aff /= ntot;
        double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
        sigma = std::clamp(sigma, 1e-8, 1.0);
        const double infeas = rpn / bscale + rdn / cscale;
        if (infeas > 100.0 * mu) sigma = std::max(sigma, 0.3);

        // --- corrector ---
        for (int e = 0; e < num_blocks; ++e) {
            const auto& w = work[e];
            Mat dxh = matmul(w.pinv, matmul(w.dxa, transpose(w.pinv)));
            Mat dzh = matmul(transpose(w.pmat), matmul(dza[e], w.pmat));
            Mat chat = matmul(dxh, dzh);
            {
                Mat c2 = matmul(dzh, dxh);
                for (size_t i = 0; i < chat.a.size(); ++i)
                    chat.a[i] = 0.5 * (chat.a[i] + c2.a[i]);
            }
            Mat& r = rhat[e];
            for (int i = 0; i < w.size; ++i)
                for (int j = 0; j < w.size; ++j) {
                    double num = -chat(i, j);
                    if (i == j) num += sigma * mu - w.d[i];
                    r(i, j) = 2.0 * num / (std::sqrt(w.d[i]) + std::sqrt(w.d[j]));
                }
            r.symmetrize();
        }
        std::vector<double> dy, dlam;
        std::vector<Mat> dz;
        newton(rhat, dy, dlam, dz);

        double ap = 1.0, ad = 1.0;
        for (int e = 0; e < num_blocks; ++e) {
            work[e].dxc = dx_from_dy(dy, e);
            ap = std::min(ap, max_step(work[e].x, work[e].dxc));
            ad = std::min(ad, max_step(work[e].z, dz[e]));
        }
        ap = std::min(1.0, 0.99 * ap);
        ad = std::min(1.0, 0.99 * ad);
        if (infeas > std::max(100.0 * mu, 1e-2)) ap = ad = std::min(ap, ad);

        // centrality safeguard: keep eig(L^T Z L) >= beta * mu_new
        const double beta = 1e-4;
        for (int trial = 0; trial < 8; ++trial) {
            bool ok = true;
            double mu_new = 0.0;
            std::vector<Mat> qn(num_blocks);
            for (int e = 0; e < num_blocks && ok; ++e) {
                const auto& w = work[e];
                Mat xn = w.x, zn = w.z;
                for (size_t i = 0; i < xn.a.size(); ++i) {
                    xn.a[i] += ap * w.dxc.a[i];
                    zn.a[i] += ad * dz[e].a[i];
                }
                Mat ln = xn;
                if (!cholesky_in_place(ln)) { ok = false; break; }
                Mat q = matmul(transpose(ln), matmul(zn, ln));
                q.symmetrize();
                for (int i = 0; i < w.size; ++i) mu_new += q(i, i);
                qn[e] = std::move(q);
            }
            if (ok) {
                mu_new /= ntot;
                for (int e = 0; e < num_blocks && ok; ++e) {
                    Mat test = qn[e];
                    for (int i = 0; i < test.n; ++i) test(i, i) -= beta * mu_new;
                    if (!cholesky_in_place(test)) ok = false;
                }
            }
            if (ok) break;
            ap *= 0.7;
            ad *= 0.7;
        }

        for (int j = 0; j < n; ++j) y[j] += ap * dy[j];
        for (int k = 0; k < m; ++k) lam[k] += ad * dlam[k];
        for (int e = 0; e < num_blocks; ++e) {
            auto& w = work[e];
            for (size_t i = 0; i < w.z.a.size(); ++i) w.z.a[i] += ad * dz[e].a[i];
        }
        build_x();

        if (std::max(ap, ad) < 1e-5) {
            if (++small_steps >= 6) { ++it; break; }
        } else {
            small_steps = 0;
        }
        // stalled: the balanced merit has not improved for a long window
        if (it - best.iter > 25) { ++it; break; }
    }

    rep.iterations = it;
    rep.primal_objective = best.pobj;
    rep.dual_objective = best.dobj;
    rep.gap = std::abs(best.dobj - best.pobj);
    rep.variables = best.y.empty() ? y : best.y;
    rep.primal_residual = best.rpn;
    rep.dual_residual = best.rdn;
    for (int k = 0; k < m; ++k) rep.eq_multipliers[kept[k]] = best.lam.empty() ? lam[k] : best.lam[k];
    if (!best.z.empty())
        rep.dual_blocks = best.z;
    else
        for (const auto& w : work) rep.dual_blocks.push_back(w.z);

    if (infeasible_flag) {
        rep.status = SolveStatus::infeasible;
        return rep;
    }
    const bool feas_opt =
        best.rpn <= 10 * tol * bscale && best.rdn <= 10 * tol * cscale;
    if (best.relgap <= tol && feas_opt &&
        rep.gap <= std::max(tol, 1e-8) * (1.0 + std::abs(best.pobj))) {
        rep.status = SolveStatus::optimal;
    } else if (best.relgap <= 1e4 * tol && best.rpn <= 1e5 * tol * bscale &&
               best.rdn <= 1e5 * tol * cscale) {
        rep.status = SolveStatus::near_optimal;
    } else {
        rep.status = SolveStatus::numerical_trouble;
    }
    return rep;
}

}  // namespace bellrand
