#ifndef BELLRAND_SDP_HPP
#define BELLRAND_SDP_HPP

#include <functional>
#include <string>
#include <vector>

#include "bellrand/linalg.hpp"

namespace bellrand {

/// Sparse symmetric matrix: upper-triangle entries (row <= col), the mirror
/// entry is implied.
struct SparseSym {
    struct Entry {
        int row;
        int col;
        double value;
    };
    std::vector<Entry> entries;

    void add(int r, int c, double v);
    Mat dense(int size) const;
};

/// Block-diagonal linear matrix inequality problem with equality constraints:
///
///   maximize    objective . y
///   subject to  equalities:  row_k . y = rhs_k
///               per block e: X_e := constant_e + sum_j y_j basis_{e,j}  PSD
///
/// Variables may appear in several blocks. Basis matrices are symmetric by
/// storage convention.
struct BlockProblem {
    struct Block {
        int size = 0;
        SparseSym constant;                            // F_0 part
        std::vector<std::pair<int, SparseSym>> basis;  // (variable, F_j)
    };
    struct Equality {
        std::vector<std::pair<int, double>> row;
        double rhs = 0.0;
    };

    int num_vars = 0;
    std::vector<Block> blocks;
    std::vector<double> objective;
    std::vector<Equality> equalities;

    void validate() const;  // throws std::invalid_argument on bad dimensions
};

enum class SolveStatus { optimal, near_optimal, infeasible, numerical_trouble };

std::string to_string(SolveStatus s);

struct SolveReport {
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double gap = 0.0;  // |dual - primal|
    SolveStatus status = SolveStatus::numerical_trouble;
    std::vector<double> variables;
    std::vector<double> eq_multipliers;  // one per equality, dropped rows get 0
    std::vector<Mat> dual_blocks;        // PSD dual matrix per block
    double primal_residual = 0.0;        // ||b - A y||_inf
    double dual_residual = 0.0;          // ||A^T lam - c - F*(Z)||_inf
    int iterations = 0;
};

/// Read-only view of one interior-point iterate, for observers. The dual
/// (eq_multipliers, dual_blocks) of every iterate is strictly inside the
/// cone; certification layers can harvest bounds from it.
struct IterateView {
    int iteration;
    const std::vector<double>& variables;
    const std::vector<double>& eq_multipliers;
    const std::vector<Mat>& dual_blocks;
    double primal_objective;
    double dual_objective;
    double primal_residual;
    double dual_residual;
};

struct SolveOptions {
    int max_iterations = 200;
    std::function<void(const IterateView&)> observer;  // called once per iteration
    bool debug_checks = false;  // assert the weak-duality identity per iterate
};

/// Primal-dual interior-point method (NT scaling, Mehrotra predictor-
/// corrector, infeasible start from identity-scaled blocks). Deterministic:
/// fixed iteration schedule, no randomization. Requires tol >= 1e-10.
SolveReport solve(const BlockProblem& p, double tol = 1e-8, const SolveOptions& opts = {});

}  // namespace bellrand

#endif
