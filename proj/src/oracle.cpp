#include "bellrand/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bellrand {

ExplicitDecomposition ExplicitDecomposition::make(
    std::vector<std::pair<double, Behavior>> terms, Behavior target) {
    double wsum = 0.0;
    for (const auto& [w, t] : terms) {
        if (w < -1e-12) throw std::invalid_argument("decomposition weight is negative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-10)
        throw std::invalid_argument("decomposition weights do not sum to 1");
    for (int i = 0; i < 16; ++i) {
        double v = 0.0;
        for (const auto& [w, t] : terms) v += w * t.table[i];
        if (std::abs(v - target.table[i]) > 1e-9)
            throw std::invalid_argument("decomposition does not reproduce the target");
    }
    ExplicitDecomposition d;
    d.terms = std::move(terms);
    d.target = std::move(target);
    return d;
}

double decomposition_guess_value(const ExplicitDecomposition& d,
                                 const SettingsDistribution& dist) {
    double total = 0.0;
    for (const auto& [w, t] : d.terms) {
        if (w <= 0.0) continue;
        double g = 0.0;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                const double px = dist.at(x, y);
                if (px == 0.0) continue;
                double best = 0.0;
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) best = std::max(best, t.at(a, b, x, y));
                g += px * best;
            }
        total += w * g;
    }
    return total;
}

namespace {

// phase-1 simplex with Bland's rule: find w >= 0 with sum_i w_i t_i = q,
// where t_i = (1, quantities of deterministic point i). Returns false when
// the system has no nonnegative solution.
bool decompose_over_deterministic(const Behavior& target, std::array<double, 16>& w) {
    constexpr int kRows = 9, kVars = 16;
    const auto& dets = deterministic_behaviors();

    double a[kRows][kVars + kRows];
    double rhs[kRows];
    {
        const auto q = target.quantities();
        rhs[0] = 1.0;
        for (int k = 0; k < 8; ++k) rhs[k + 1] = q[k];
        for (int i = 0; i < kVars; ++i) {
            const auto qi = dets[i].quantities();
            a[0][i] = 1.0;
            for (int k = 0; k < 8; ++k) a[k + 1][i] = qi[k];
        }
    }
    for (int r = 0; r < kRows; ++r) {
        if (rhs[r] < 0.0) {
            rhs[r] = -rhs[r];
            for (int i = 0; i < kVars; ++i) a[r][i] = -a[r][i];
        }
        for (int c = 0; c < kRows; ++c) a[r][kVars + c] = (r == c) ? 1.0 : 0.0;
    }
    int basis[kRows];
    for (int r = 0; r < kRows; ++r) basis[r] = kVars + r;

    // reduced costs for min sum(artificials): z_j - c_j = sum over rows of a
    for (int iter = 0; iter < 4096; ++iter) {
        int enter = -1;
        for (int j = 0; j < kVars + kRows; ++j) {
            double red = 0.0;
            for (int r = 0; r < kRows; ++r)
                if (basis[r] >= kVars) red += a[r][j];
            if (j < kVars && red > 1e-11) { enter = j; break; }  // Bland: lowest index
        }
        if (enter < 0) break;
        int leave = -1;
        double best_ratio = 0.0;
        for (int r = 0; r < kRows; ++r) {
            if (a[r][enter] > 1e-11) {
                const double ratio = rhs[r] / a[r][enter];
                if (leave < 0 || ratio < best_ratio - 1e-15 ||
                    (std::abs(ratio - best_ratio) <= 1e-15 && basis[r] < basis[leave])) {
                    leave = r;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) break;  // unbounded column; cannot happen in phase 1
        const double piv = a[leave][enter];
        for (int j = 0; j < kVars + kRows; ++j) a[leave][j] /= piv;
        rhs[leave] /= piv;
        for (int r = 0; r < kRows; ++r) {
            if (r == leave) continue;
            const double f = a[r][enter];
            if (f == 0.0) continue;
            for (int j = 0; j < kVars + kRows; ++j) a[r][j] -= f * a[leave][j];
            rhs[r] -= f * rhs[leave];
        }
        basis[leave] = enter;
    }
    double artificial = 0.0;
    for (int r = 0; r < kRows; ++r)
        if (basis[r] >= kVars) artificial += rhs[r];
    if (artificial > 1e-10) return false;
    w.fill(0.0);
    for (int r = 0; r < kRows; ++r)
        if (basis[r] < kVars) w[basis[r]] = std::max(0.0, rhs[r]);
    return true;
}

}  // namespace

ExplicitDecomposition greedy_local_extraction(const Behavior& b) {
    const auto& dets = deterministic_behaviors();
    std::array<double, 16> weights{};
    Behavior residue = b;

    for (int pass = 0; pass < 64; ++pass) {
        double progress = 0.0;
        for (int i = 0; i < 16; ++i) {
            double take = 1e300;
            for (int j = 0; j < 16; ++j)
                if (dets[i].table[j] > 0.5) take = std::min(take, residue.table[j]);
            if (take > 0.0) {
                weights[i] += take;
                for (int j = 0; j < 16; ++j)
                    residue.table[j] -= take * dets[i].table[j];
                progress += take;
            }
        }
        double rmax = 0.0;
        for (double v : residue.table) rmax = std::max(rmax, v);
        if (rmax <= 1e-9 || progress <= 1e-11) break;
    }

    double rmax = 0.0;
    for (double v : residue.table) rmax = std::max(rmax, v);

    std::vector<std::pair<double, Behavior>> terms;
    if (rmax <= 1e-9) {
        for (int i = 0; i < 16; ++i)
            if (weights[i] > 0.0) terms.emplace_back(weights[i], dets[i]);
        // round the weight sum exactly onto 1 (greedy leaves ~1e-12 dust)
        double s = 0.0;
        for (auto& [w, t] : terms) s += w;
        if (s > 0.0)
            for (auto& [w, t] : terms) w /= s;
        return ExplicitDecomposition::make(std::move(terms), b);
    }

    // greedy got stuck: try an exact decomposition of the original target
    std::array<double, 16> w{};
    if (decompose_over_deterministic(b, w)) {
        double s = 0.0;
        for (double v : w) s += v;
        for (int i = 0; i < 16; ++i)
            if (w[i] > 0.0) terms.emplace_back(w[i] / s, dets[i]);
        return ExplicitDecomposition::make(std::move(terms), b);
    }

    // genuinely nonlocal: keep the greedy part plus a quantum remainder
    double rweight = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int bb = 0; bb < 2; ++bb) rweight += residue.at(a, bb, 0, 0);
    for (int i = 0; i < 16; ++i)
        if (weights[i] > 0.0) terms.emplace_back(weights[i], dets[i]);
    Behavior rem = residue;
    for (double& v : rem.table) v /= rweight;
    terms.emplace_back(rweight, rem);
    return ExplicitDecomposition::make(std::move(terms), b);
}

bool fully_deterministic(const ExplicitDecomposition& d) {
    for (const auto& [w, t] : d.terms) {
        if (w <= 1e-9) continue;
        for (double v : t.table)
            if (v > 1e-9 && v < 1.0 - 1e-9) return false;
    }
    return true;
}

SandwichReport sandwich_check(const ProgramSpec& spec, const CertifiedResult& result) {
    SandwichReport rep;
    const ExplicitDecomposition trivial =
        ExplicitDecomposition::make({{1.0, spec.observed}}, spec.observed);
    rep.lower = decomposition_guess_value(trivial, spec.settings_distribution);
    // the greedy extraction only counts when it is all-deterministic: a
    // leftover remainder has no quantum-membership guarantee, so its value
    // is not a sound bound
    const auto greedy = greedy_local_extraction(spec.observed);
    if (fully_deterministic(greedy))
        rep.lower = std::max(
            rep.lower, decomposition_guess_value(greedy, spec.settings_distribution));
    rep.upper = result.guessing_upper;
    rep.gap = rep.upper - rep.lower;
    rep.ok = rep.lower <= rep.upper + 1e-6;
    return rep;
}

}  // namespace bellrand
