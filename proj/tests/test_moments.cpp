#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "bellrand/linalg.hpp"
#include "bellrand/moments.hpp"

using namespace bellrand;

namespace {

Word make_word(std::initializer_list<int> letters) {
    Word w;
    for (int l : letters) w.letters[w.len++] = static_cast<std::uint8_t>(l);
    return w;
}

// independent canonicalization used as the oracle: tracks words as strings
// and reduces with its own code path
std::string reduce_str(std::string s) {
    std::string out;
    for (char c : s) {
        if (!out.empty() && out.back() == c)
            out.pop_back();
        else
            out.push_back(c);
    }
    return out;
}

std::pair<std::string, std::string> oracle_canonical(std::string wa, std::string wb) {
    wa = reduce_str(wa);
    wb = reduce_str(wb);
    std::string ra(wa.rbegin(), wa.rend()), rb(wb.rbegin(), wb.rend());
    if (std::make_pair(ra, rb) < std::make_pair(wa, wb)) return {ra, rb};
    return {wa, wb};
}

std::string word_string(const Word& w) {
    std::string s;
    for (int i = 0; i < w.len; ++i) s.push_back(static_cast<char>('0' + w.letters[i]));
    return s;
}

QuantumModel random_model(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    auto rand_obs = [&]() {
        // random +/-1 observable: unit Bloch vector n . sigma
        double nx = g(rng), ny = g(rng), nz = g(rng);
        const double r = std::sqrt(nx * nx + ny * ny + nz * nz);
        nx /= r;
        ny /= r;
        nz /= r;
        Mat2 o;
        o(0, 0) = nz;
        o(1, 1) = -nz;
        o(0, 1) = c64{nx, -ny};
        o(1, 0) = c64{nx, ny};
        return o;
    };
    // random pure state from a complex gaussian vector
    std::array<c64, 4> psi;
    double norm = 0.0;
    for (auto& v : psi) {
        v = c64{g(rng), g(rng)};
        norm += std::norm(v);
    }
    norm = std::sqrt(norm);
    QuantumModel m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m.state.m(i, j) = psi[i] * std::conj(psi[j]) / (norm * norm);
    m.alice_obs = {rand_obs(), rand_obs()};
    m.bob_obs = {rand_obs(), rand_obs()};
    return m;
}

}  // namespace

TEST_CASE("word reduction and canonicalization basics") {
    // A0 A0 -> empty
    CHECK(reduce_concat(Word::single(0), Word::single(0)).len == 0);
    // adjoint of A0A1 is A1A0, shared canonical representative
    const Word w01 = make_word({0, 1});
    const Word w10 = make_word({1, 0});
    CHECK(word_adjoint(w01) == w10);
    const auto c1 = canonicalize({w01, Word::empty()});
    const auto c2 = canonicalize({w10, Word::empty()});
    CHECK(c1.monomial == c2.monomial);
    CHECK(c1.reversed != c2.reversed);
    // (A0A1)~ . A0 = A1 A0 A0 = A1
    const auto p = canonicalize_product({w01, Word::empty()}, {Word::single(0), Word::empty()});
    CHECK(p.monomial.alice == Word::single(1));
    CHECK(p.monomial.bob.len == 0);
}

TEST_CASE("canonicalize is idempotent") {
    const auto& ms = MomentStructure::instance();
    for (const auto& m : ms.canonical_monomials()) {
        const auto again = canonicalize(m);
        CHECK(again.monomial == m);
        CHECK_FALSE(again.reversed);
    }
}

TEST_CASE("structure dimensions") {
    const auto& ms = MomentStructure::instance();
    CHECK(ms.index_list().size() == 25);
    // count cross-checked against the independent string-based enumeration
    std::map<std::pair<std::string, std::string>, int> classes;
    const char* words[5] = {"", "0", "1", "01", "10"};
    for (int ua = 0; ua < 5; ++ua)
        for (int va = 0; va < 5; ++va)
            for (int ub = 0; ub < 5; ++ub)
                for (int vb = 0; vb < 5; ++vb) {
                    std::string wa(words[ua]);
                    std::string wb(words[va]);
                    std::string rev_a(wa.rbegin(), wa.rend());
                    std::string rev_b(wb.rbegin(), wb.rend());
                    auto key = oracle_canonical(rev_a + std::string(words[ub]),
                                                rev_b + std::string(words[vb]));
                    classes[key]++;
                }
    CHECK(ms.monomial_count() == static_cast<int>(classes.size()));
    // every position covered exactly once
    int total = 0;
    for (int i = 0; i < ms.monomial_count(); ++i) total += ms.position_count(i);
    CHECK(total == 625);
    // the matching class sizes
    for (int i = 0; i < ms.monomial_count(); ++i) {
        const auto& mon = ms.canonical_monomials()[i];
        auto key = oracle_canonical(word_string(mon.alice), word_string(mon.bob));
        REQUIRE(classes.count(key) == 1);
        CHECK(classes[key] == ms.position_count(i));
    }
}

TEST_CASE("indicators are symmetric and identity sits on the diagonal") {
    const auto& ms = MomentStructure::instance();
    for (int i = 0; i < ms.monomial_count(); ++i) {
        for (const auto& [r, c] : ms.positions(i))
            CHECK(ms.monomial_at(c, r) == i);
    }
    const int id = ms.identity_index();
    CHECK(ms.position_count(id) == 25);
    for (const auto& [r, c] : ms.positions(id)) CHECK(r == c);
}

TEST_CASE("equal canonical monomials across distinct positions") {
    const auto& ms = MomentStructure::instance();
    // ((1,1),(A0,B0)) and ((A0,1),(1,B0)) both carry A0 (x) B0
    // index order per party: 1, X0, X1, X0X1, X1X0; pair index = a*5 + b
    const int row1 = 0 * 5 + 0, col1 = 1 * 5 + 1;
    const int row2 = 1 * 5 + 0, col2 = 0 * 5 + 1;
    CHECK(ms.monomial_at(row1, col1) == ms.monomial_at(row2, col2));
    CHECK(ms.monomial_at(row1, col1) == ms.quantity_index(Quantity::a0b0));
}

TEST_CASE("behavior rows") {
    const auto& ms = MomentStructure::instance();
    const auto idrow = ms.behavior_constraint_row(-1);
    int nonzero = 0;
    for (size_t i = 0; i < idrow.size(); ++i)
        if (idrow[i] != 0.0) {
            ++nonzero;
            CHECK(static_cast<int>(i) == ms.identity_index());
        }
    CHECK(nonzero == 1);

    // sum of the four probability rows at fixed (x,y) is the identity row
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            std::vector<double> acc(ms.monomial_count(), 0.0);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const auto r = ms.probability_row(a, b, x, y);
                    for (size_t i = 0; i < acc.size(); ++i) acc[i] += r[i];
                }
            for (size_t i = 0; i < acc.size(); ++i)
                CHECK(acc[i] == doctest::Approx(idrow[i]).epsilon(1e-15));
        }

    // row(+,-,0,0) + row(+,+,0,0) = marginal row (1 + <A0>)/2
    {
        const auto r1 = ms.probability_row(0, 0, 0, 0);
        const auto r2 = ms.probability_row(0, 1, 0, 0);
        std::vector<double> want(ms.monomial_count(), 0.0);
        want[ms.identity_index()] = 0.5;
        want[ms.quantity_index(Quantity::a0)] = 0.5;
        for (int i = 0; i < ms.monomial_count(); ++i)
            CHECK(r1[i] + r2[i] == doctest::Approx(want[i]).epsilon(1e-15));
    }
}

TEST_CASE("model moments reproduce the behavior") {
    const auto& ms = MomentStructure::instance();
    const QuantumModel model = white_noise_model(1.0);
    const auto mom = ms.model_moments(model);
    const Behavior b = behavior_from_model(model);
    // probability rows evaluated on the moment vector match the table
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int bb = 0; bb < 2; ++bb) {
                    const auto row = ms.probability_row(a, bb, x, y);
                    double v = 0.0;
                    for (int i = 0; i < ms.monomial_count(); ++i) v += row[i] * mom[i];
                    CHECK(v == doctest::Approx(b.at(a, bb, x, y)).epsilon(1e-12));
                }
    CHECK(mom[ms.identity_index()] == doctest::Approx(1.0).epsilon(1e-14));
    // corner value (2+sqrt 2)/8 via the row route
    const auto row = ms.probability_row(0, 0, 0, 0);
    double v = 0.0;
    for (int i = 0; i < ms.monomial_count(); ++i) v += row[i] * mom[i];
    CHECK(v == doctest::Approx((2.0 + std::sqrt(2.0)) / 8.0).epsilon(1e-12));
}

TEST_CASE("moment matrix of quantum models is positive semidefinite") {
    const auto& ms = MomentStructure::instance();
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const QuantumModel model = random_model(rng);
        const auto mom = ms.model_moments(model);
        Mat gamma(MomentStructure::kMatrixSize);
        for (int i = 0; i < ms.monomial_count(); ++i)
            for (const auto& [r, c] : ms.positions(i)) gamma(r, c) = mom[i];
        // symmetric by construction of the position lists
        for (int r = 0; r < gamma.n; ++r)
            for (int c = 0; c < gamma.n; ++c)
                CHECK(gamma(r, c) == doctest::Approx(gamma(c, r)).epsilon(1e-12));
        CHECK(min_eigenvalue(gamma) > -1e-9);
    }
}

TEST_CASE("basis reconstruction round trip") {
    const auto& ms = MomentStructure::instance();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> y(ms.monomial_count());
    for (double& v : y) v = uni(rng);
    Mat gamma(MomentStructure::kMatrixSize);
    for (int i = 0; i < ms.monomial_count(); ++i)
        for (const auto& [r, c] : ms.positions(i)) gamma(r, c) = y[i];
    for (int i = 0; i < ms.monomial_count(); ++i)
        for (const auto& [r, c] : ms.positions(i)) CHECK(gamma(r, c) == y[i]);
}
