#ifndef BELLRAND_SCENARIO_HPP
#define BELLRAND_SCENARIO_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bellrand {

/// Measurement scenario: number of inputs and outputs per party.
///
/// Only the 2-input / 2-output scenario for two parties is supported; the
/// field layout is kept general so that file formats stay forward
/// compatible. Outcomes are stored as indices {0,1} with the convention
/// 0 -> +1, 1 -> -1 when converting to correlators. This convention is
/// fixed here and used everywhere else.
struct Scenario {
    int inputs_a = 2;
    int inputs_b = 2;
    int outputs_a = 2;
    int outputs_b = 2;

    Scenario() = default;
    Scenario(int ia, int ib, int oa, int ob);

    bool operator==(const Scenario&) const = default;
};

/// Sign of an outcome index under the 0 -> +1, 1 -> -1 convention.
inline double outcome_sign(int a) { return a == 0 ? 1.0 : -1.0; }

/// Conditional probability table P(a,b|x,y) for the 2222 scenario.
struct Behavior {
    Scenario scenario;
    std::array<double, 16> table{};  // indexed by index(a,b,x,y)

    static constexpr int index(int a, int b, int x, int y) {
        return ((x * 2 + y) * 2 + a) * 2 + b;
    }
    double at(int a, int b, int x, int y) const { return table[index(a, b, x, y)]; }
    double& at(int a, int b, int x, int y) { return table[index(a, b, x, y)]; }

    /// <A_x B_y> = sum_ab s_a s_b P(ab|xy)
    double correlator(int x, int y) const;
    /// <A_x>, averaged over Bob's setting (equal for each y when no-signaling holds)
    double marginal_a(int x) const;
    double marginal_b(int y) const;

    /// The eight physical quantities in the fixed order
    /// [<A0>, <A1>, <B0>, <B1>, <A0B0>, <A0B1>, <A1B0>, <A1B1>].
    std::array<double, 8> quantities() const;
};

/// Fixed order used for behavior quantities throughout the library.
enum class Quantity : int {
    a0 = 0, a1 = 1, b0 = 2, b1 = 3,
    a0b0 = 4, a0b1 = 5, a1b0 = 6, a1b1 = 7,
};

struct ValidationIssue {
    std::string constraint;
    double magnitude = 0.0;
};

struct ValidationReport {
    bool ok = true;
    std::vector<ValidationIssue> violations;
};

inline constexpr double kNormalizationTol = 1e-12;
inline constexpr double kNoSignalingTol = 1e-10;
inline constexpr double kFacetSlackTol = 1e-10;

/// Checks entry range, per-setting normalization and no-signaling.
/// Never throws; violations are listed with their magnitudes.
ValidationReport validate_behavior(const Behavior& b);

/// Linear functional on behaviors, with an optional classical bound.
struct BellExpression {
    Scenario scenario;
    std::array<double, 16> coefficients{};
    std::optional<double> classical_bound;
};

/// sum of coefficient * table entry. Throws std::invalid_argument on
/// scenario mismatch.
double evaluate_bell(const BellExpression& expr, const Behavior& b);

/// CHSH in table coefficients: S = <A0B0> + <A0B1> + <A1B0> - <A1B1>,
/// classical bound 2.
BellExpression chsh_expression();

/// Distribution p(x,y) over setting pairs, indexed by x*2+y.
struct SettingsDistribution {
    std::array<double, 4> weights{};

    static SettingsDistribution uniform();
    static SettingsDistribution point_mass(int x, int y);
    double at(int x, int y) const { return weights[x * 2 + y]; }
    /// weights nonnegative and summing to 1 within 1e-12
    bool valid() const;
};

/// Local deterministic point: P(ab|xy) = [a = fa(x)][b = fb(y)].
Behavior deterministic_behavior(const std::array<int, 2>& fa, const std::array<int, 2>& fb);

/// All 16 deterministic behaviors in lexicographic (fa, fb) order, where a
/// response function maps to the index f(0)*2 + f(1).
const std::vector<Behavior>& deterministic_behaviors();

/// Entry-wise convex combination. Throws if the weight sum deviates from 1
/// by more than 1e-12 or any weight is negative.
Behavior mix(const std::vector<std::pair<double, Behavior>>& terms);

/// Result of the exact 2222 locality test.
struct LocalityReport {
    bool local = false;
    double max_facet_value = 0.0;  // largest CHSH symmetrization value
    int facet_index = 0;           // 0..7, see is_local_2222
    BellExpression facet;          // the maximizing symmetrization
    std::string relabeling;        // human-readable description
};

/// Exact locality test for valid 2222 behaviors: the local polytope's
/// nontrivial facets are the eight CHSH symmetrizations (choice of the
/// minus-sign position, times overall sign). Local iff all of them
/// evaluate to <= 2 + 1e-10.
LocalityReport is_local_2222(const Behavior& b);

/// Plain-text serialization: header line `# behavior 2 2 2 2`, then one
/// line per (x, y, a, b, value) with 17 significant digits.
std::string behavior_to_text(const Behavior& b);
Behavior behavior_from_text(const std::string& text);

}  // namespace bellrand

#endif
