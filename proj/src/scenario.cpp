#include "bellrand/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace bellrand {

Scenario::Scenario(int ia, int ib, int oa, int ob)
    : inputs_a(ia), inputs_b(ib), outputs_a(oa), outputs_b(ob) {
    if (ia != 2 || ib != 2 || oa != 2 || ob != 2)
        throw std::invalid_argument("only the 2-input/2-output scenario is supported");
}

double Behavior::correlator(int x, int y) const {
    double s = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            s += outcome_sign(a) * outcome_sign(b) * at(a, b, x, y);
    return s;
}

double Behavior::marginal_a(int x) const {
    double s = 0.0;
    for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                s += 0.5 * outcome_sign(a) * at(a, b, x, y);
    return s;
}

double Behavior::marginal_b(int y) const {
    double s = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                s += 0.5 * outcome_sign(b) * at(a, b, x, y);
    return s;
}

std::array<double, 8> Behavior::quantities() const {
    return {marginal_a(0), marginal_a(1), marginal_b(0), marginal_b(1),
            correlator(0, 0), correlator(0, 1), correlator(1, 0), correlator(1, 1)};
}

ValidationReport validate_behavior(const Behavior& b) {
    ValidationReport rep;
    auto flag = [&rep](const std::string& what, double mag) {
        rep.ok = false;
        rep.violations.push_back({what, mag});
    };
    for (int i = 0; i < 16; ++i) {
        const double v = b.table[i];
        if (!(v == v) || v < -kNormalizationTol || v > 1.0 + kNormalizationTol) {
            flag("entry out of [0,1] at index " + std::to_string(i),
                 v < 0 ? -v : v - 1.0);
        }
    }
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            double s = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int bb = 0; bb < 2; ++bb)
                    s += b.at(a, bb, x, y);
            if (std::abs(s - 1.0) > kNormalizationTol)
                flag("normalization at (x,y)=(" + std::to_string(x) + "," +
                         std::to_string(y) + ")",
                     std::abs(s - 1.0));
        }
    }
    // no-signaling: Alice's marginal independent of y, Bob's independent of x
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a) {
            double m0 = b.at(a, 0, x, 0) + b.at(a, 1, x, 0);
            double m1 = b.at(a, 0, x, 1) + b.at(a, 1, x, 1);
            if (std::abs(m0 - m1) > kNoSignalingTol)
                flag("no-signaling A marginal, (a,x)=(" + std::to_string(a) + "," +
                         std::to_string(x) + ")",
                     std::abs(m0 - m1));
        }
    for (int y = 0; y < 2; ++y)
        for (int bb = 0; bb < 2; ++bb) {
            double m0 = b.at(0, bb, 0, y) + b.at(1, bb, 0, y);
            double m1 = b.at(0, bb, 1, y) + b.at(1, bb, 1, y);
            if (std::abs(m0 - m1) > kNoSignalingTol)
                flag("no-signaling B marginal, (b,y)=(" + std::to_string(bb) + "," +
                         std::to_string(y) + ")",
                     std::abs(m0 - m1));
        }
    return rep;
}

double evaluate_bell(const BellExpression& expr, const Behavior& b) {
    if (!(expr.scenario == b.scenario))
        throw std::invalid_argument("bell expression / behavior scenario mismatch");
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += expr.coefficients[i] * b.table[i];
    return s;
}

namespace {

// CHSH symmetrization with the minus sign at setting pair (mx,my),
// multiplied by overall sign.
BellExpression chsh_variant(int mx, int my, double sign) {
    BellExpression e;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const double term = (x == mx && y == my) ? -1.0 : 1.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    e.coefficients[Behavior::index(a, b, x, y)] =
                        sign * term * outcome_sign(a) * outcome_sign(b);
        }
    e.classical_bound = 2.0;
    return e;
}

}  // namespace

BellExpression chsh_expression() { return chsh_variant(1, 1, 1.0); }

SettingsDistribution SettingsDistribution::uniform() {
    return {{0.25, 0.25, 0.25, 0.25}};
}

SettingsDistribution SettingsDistribution::point_mass(int x, int y) {
    SettingsDistribution d;
    d.weights[x * 2 + y] = 1.0;
    return d;
}

bool SettingsDistribution::valid() const {
    double s = 0.0;
    for (double w : weights) {
        if (w < 0.0) return false;
        s += w;
    }
    return std::abs(s - 1.0) <= 1e-12;
}

Behavior deterministic_behavior(const std::array<int, 2>& fa, const std::array<int, 2>& fb) {
    for (int v : fa)
        if (v != 0 && v != 1) throw std::invalid_argument("fa values must be 0 or 1");
    for (int v : fb)
        if (v != 0 && v != 1) throw std::invalid_argument("fb values must be 0 or 1");
    Behavior b;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) b.at(fa[x], fb[y], x, y) = 1.0;
    return b;
}

const std::vector<Behavior>& deterministic_behaviors() {
    static const std::vector<Behavior> pts = [] {
        std::vector<Behavior> v;
        v.reserve(16);
        for (int ia = 0; ia < 4; ++ia)
            for (int ib = 0; ib < 4; ++ib)
                v.push_back(deterministic_behavior({ia / 2, ia % 2}, {ib / 2, ib % 2}));
        return v;
    }();
    return pts;
}

Behavior mix(const std::vector<std::pair<double, Behavior>>& terms) {
    double wsum = 0.0;
    for (const auto& [w, t] : terms) {
        if (w < 0.0) throw std::invalid_argument("mixture weight is negative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw std::invalid_argument("mixture weights do not sum to 1");
    Behavior out;
    for (const auto& [w, t] : terms)
        for (int i = 0; i < 16; ++i) out.table[i] += w * t.table[i];
    return out;
}

LocalityReport is_local_2222(const Behavior& b) {
    LocalityReport rep;
    rep.max_facet_value = -1e300;
    for (int k = 0; k < 8; ++k) {
        const int mx = (k / 2) / 2;
        const int my = (k / 2) % 2;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        BellExpression f = chsh_variant(mx, my, sign);
        const double v = evaluate_bell(f, b);
        if (v > rep.max_facet_value) {
            rep.max_facet_value = v;
            rep.facet_index = k;
            rep.facet = f;
            std::ostringstream os;
            os << (sign > 0 ? "+" : "-") << "CHSH with minus sign at (x,y)=(" << mx
               << "," << my << ")";
            rep.relabeling = os.str();
        }
    }
    rep.local = rep.max_facet_value <= 2.0 + kFacetSlackTol;
    return rep;
}

std::string behavior_to_text(const Behavior& b) {
    std::ostringstream os;
    os << "# behavior " << b.scenario.inputs_a << " " << b.scenario.inputs_b << " "
       << b.scenario.outputs_a << " " << b.scenario.outputs_b << "\n";
    char buf[64];
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int bb = 0; bb < 2; ++bb) {
                    std::snprintf(buf, sizeof(buf), "%d %d %d %d %.17g\n", x, y, a, bb,
                                  b.at(a, bb, x, y));
                    os << buf;
                }
    return os.str();
}

Behavior behavior_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty behavior text");
    {
        std::istringstream hs(line);
        std::string hash, word;
        int ia, ib, oa, ob;
        if (!(hs >> hash >> word >> ia >> ib >> oa >> ob) || hash != "#" ||
            word != "behavior")
            throw std::invalid_argument("bad behavior header: " + line);
        if (ia != 2 || ib != 2 || oa != 2 || ob != 2)
            throw std::invalid_argument("unsupported scenario in behavior header");
    }
    Behavior b;
    std::array<bool, 16> seen{};
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        int x, y, a, bb;
        double v;
        if (!(ls >> x >> y >> a >> bb >> v))
            throw std::invalid_argument("bad behavior line: " + line);
        if (x < 0 || x > 1 || y < 0 || y > 1 || a < 0 || a > 1 || bb < 0 || bb > 1)
            throw std::invalid_argument("behavior indices out of range: " + line);
        b.at(a, bb, x, y) = v;
        seen[Behavior::index(a, bb, x, y)] = true;
    }
    for (bool s : seen)
        if (!s) throw std::invalid_argument("behavior text is missing entries");
    return b;
}

}  // namespace bellrand
