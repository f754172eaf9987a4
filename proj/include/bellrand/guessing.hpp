#ifndef BELLRAND_GUESSING_HPP
#define BELLRAND_GUESSING_HPP

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "bellrand/moments.hpp"
#include "bellrand/scenario.hpp"
#include "bellrand/sdp.hpp"

namespace bellrand {

/// Deterministic guess of an outcome pair per supported setting pair.
/// guess[x*2+y] is a*2+b, or -1 outside the settings support.
struct GuessingStrategy {
    std::array<int, 4> guess{-1, -1, -1, -1};
};

enum class ProgramMode {
    case1_chsh_only = 1,   // constrain the CHSH value only
    case2_fixed_full = 2,  // constrain the full behavior, randomness at fixed settings
    case3_all_full = 3,    // full behavior, all settings used uniformly
};

struct ProgramSpec {
    ProgramMode mode = ProgramMode::case2_fixed_full;
    SettingsDistribution settings_distribution;
    Behavior observed;
    std::optional<std::pair<int, int>> fixed_settings;

    static ProgramSpec case1(const Behavior& observed, int x0, int y0);
    static ProgramSpec case2(const Behavior& observed, int x0, int y0);
    static ProgramSpec case3(const Behavior& observed);

    /// mode/settings consistency (cases 1-2: point mass at fixed_settings;
    /// case 3: uniform weights). Throws std::invalid_argument.
    void validate() const;
};

/// Cases 1-2: one strategy per outcome pair at the fixed settings (4 total).
/// Case 3: all functions from the 4 setting pairs to the 4 outcome pairs
/// (256 total), in lexicographic order with setting (0,0) most significant.
std::vector<GuessingStrategy> enumerate_strategies(const ProgramSpec& spec);

/// The block LMI problem: one 25x25 moment block per strategy, per-block
/// variables are the canonical moment values (subnormalized; the empty-word
/// moment is the block weight). Equalities: data rows + normalization last.
struct AssembledProgram {
    BlockProblem problem;
    std::vector<GuessingStrategy> strategies;
    int num_data_rows = 0;  // 1 (case 1: CHSH) or 8 (cases 2-3: quantities)
};

AssembledProgram assemble(const ProgramSpec& spec);

/// Dual Bell-expression certificate: G <= quantity_coeffs . q(P) + offset,
/// backed by one PSD witness matrix per strategy block. For case 1 the
/// coefficients are the CHSH direction scaled by its multiplier.
struct DualCertificate {
    std::array<double, 8> quantity_coeffs{};
    double offset = 0.0;
    bool chsh_only = false;
    double chsh_multiplier = 0.0;
    std::vector<Mat> witnesses;  // may be empty (see verify_certificate)
};

/// The certificate as a Bell expression on probability-table entries
/// (marginal coefficients spread evenly over the other party's settings).
BellExpression dual_bell_expression(const DualCertificate& cert);

/// The always-valid certificate G <= 1 (all-zero Bell part, offset 1), with
/// explicit sum-of-squares witnesses.
DualCertificate trivial_certificate(const ProgramSpec& spec);

struct CertificateCheck {
    bool ok = false;
    double min_eigenvalue = 0.0;   // worst witness eigenvalue across blocks
    double residual_slack = 0.0;   // max over blocks of the L1 linear residual
    double certified_bound = 0.0;  // rigorous bound including the slack
};

/// Weak-duality check, independent of the solver path: re-assembles the
/// program, verifies each witness is PSD (eigenvalues >= -1e-9) and that its
/// class sums reproduce multipliers-minus-objective; residuals are folded
/// into the certified bound. A certificate without witnesses falls back to
/// the class-averaged reconstruction (sound, not complete).
CertificateCheck verify_certificate(const DualCertificate& cert, const ProgramSpec& spec);

struct CertifiedResult {
    double guessing_upper = 1.0;  // certified upper bound on G(P)
    double hmin_bits = 0.0;       // -log2(guessing_upper)
    DualCertificate certificate;
    double gap = 0.0;  // solver duality gap (certification uncertainty)
    SolveStatus status = SolveStatus::numerical_trouble;
    double chsh_value = 0.0;  // CHSH of the observed behavior
    double solver_primal = 0.0;
    double solver_dual = 0.0;
    int iterations = 0;
};

/// Solve the guessing program. guessing_upper is harvested from the best
/// exactly-repaired dual certificate along the interior-point iterates (the
/// repair fixes class sums inside each witness and restores positive
/// semidefiniteness through the normalization multiplier), never from an
/// unverified solver claim. Throws on infeasibility (inconsistent observed
/// data).
CertifiedResult certify(const ProgramSpec& spec);

/// The certified statement of a result: G <= expression(P) + offset.
std::pair<BellExpression, double> extract_dual_bell(const CertifiedResult& result);

/// Local relabeling of the scenario: optional swap of each party's setting
/// labels plus per-setting outcome flips (64 elements). Used to transfer
/// certificates between setting pairs when the observed behavior is
/// invariant under the relabeling.
struct Relabeling {
    bool swap_x = false;
    bool swap_y = false;
    std::array<bool, 2> flip_a{};  // indexed by the original setting
    std::array<bool, 2> flip_b{};
};

Behavior relabel(const Behavior& b, const Relabeling& g);
std::pair<int, int> relabel_settings(const Relabeling& g, std::pair<int, int> s);

/// Certificate of the guessing program at some fixed settings mapped onto
/// the program at relabel_settings(g, .): quantity coefficients pick up the
/// outcome-flip signs, witnesses are conjugated by the induced signed
/// permutation of the index words. Valid for the same observed behavior
/// exactly when relabel(observed, g) == observed; callers re-verify.
DualCertificate relabel_certificate(const DualCertificate& cert, const Relabeling& g,
                                    std::pair<int, int> source_settings);

/// Cases 1-2: run certify at all four setting pairs and return the per-pair
/// results. Each case-2 result is tightened with the case-1 certificate at
/// the same pair when that is sharper (a CHSH-only certificate stays valid
/// under more constraints), and certificates travel between pairs along
/// behavior-preserving relabelings; every tightening is gated by
/// verify_certificate.
std::array<CertifiedResult, 4> certify_all_settings(ProgramMode mode,
                                                    const Behavior& observed);

/// Cases 1-2: the argmax of hmin_bits over the four setting pairs (ties
/// resolved toward the lexicographically first pair).
std::pair<std::pair<int, int>, CertifiedResult> best_fixed_settings(
    ProgramMode mode, const Behavior& observed);

/// Case 3 with the compositional tightening: besides the direct solve, the
/// average of the four case-2 certificates is itself a valid case-3
/// certificate (the case-3 objective of each strategy is the settings
/// average of case-2 objectives); the sharper verified bound wins.
CertifiedResult certify_case3_tightened(const Behavior& observed);

}  // namespace bellrand

#endif
