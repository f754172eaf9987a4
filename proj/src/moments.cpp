#include "bellrand/moments.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace bellrand {

Word Word::single(int letter) {
    Word w;
    w.len = 1;
    w.letters[0] = static_cast<std::uint8_t>(letter);
    return w;
}

int Word::key() const {
    int k = 1;  // leading bit encodes the length
    for (int i = 0; i < len; ++i) k = k * 2 + letters[i];
    return k;
}

std::string Word::str(char symbol) const {
    if (len == 0) return "1";
    std::string s;
    for (int i = 0; i < len; ++i) {
        s += symbol;
        s += static_cast<char>('0' + letters[i]);
    }
    return s;
}

Word reduce_concat(const Word& lhs, const Word& rhs) {
    std::array<std::uint8_t, 8> buf{};
    int n = 0;
    auto push = [&buf, &n](std::uint8_t ch) {
        if (n > 0 && buf[n - 1] == ch)
            --n;  // X^2 = 1
        else
            buf[n++] = ch;
    };
    for (int i = 0; i < lhs.len; ++i) push(lhs.letters[i]);
    for (int i = 0; i < rhs.len; ++i) push(rhs.letters[i]);
    if (n > 4) throw std::logic_error("reduced word longer than 4");
    Word out;
    out.len = static_cast<std::uint8_t>(n);
    for (int i = 0; i < n; ++i) out.letters[i] = buf[i];
    return out;
}

Word word_adjoint(const Word& w) {
    Word out;
    out.len = w.len;
    for (int i = 0; i < w.len; ++i) out.letters[i] = w.letters[w.len - 1 - i];
    return out;
}

std::string Monomial::str() const {
    if (alice.len == 0 && bob.len == 0) return "1";
    if (alice.len == 0) return bob.str('B');
    if (bob.len == 0) return alice.str('A');
    return alice.str('A') + bob.str('B');
}

CanonicalMonomial canonicalize(const Monomial& m) {
    Monomial reduced{reduce_concat(Word::empty(), m.alice),
                     reduce_concat(Word::empty(), m.bob)};
    Monomial adj{word_adjoint(reduced.alice), word_adjoint(reduced.bob)};
    if (adj.key() < reduced.key()) return {adj, true};
    return {reduced, false};
}

CanonicalMonomial canonicalize_product(const Monomial& row, const Monomial& col) {
    Monomial prod{reduce_concat(word_adjoint(row.alice), col.alice),
                  reduce_concat(word_adjoint(row.bob), col.bob)};
    return canonicalize(prod);
}

namespace {

std::vector<Word> level2_words() {
    // fixed order: 1, X0, X1, X0X1, X1X0
    std::vector<Word> out;
    out.push_back(Word::empty());
    out.push_back(Word::single(0));
    out.push_back(Word::single(1));
    Word w01;
    w01.len = 2;
    w01.letters = {0, 1, 0, 0};
    Word w10;
    w10.len = 2;
    w10.letters = {1, 0, 0, 0};
    out.push_back(w01);
    out.push_back(w10);
    return out;
}

}  // namespace

MomentStructure::MomentStructure() {
    const auto words = level2_words();
    for (const Word& u : words)
        for (const Word& v : words) index_words_.push_back({u, v});

    std::map<int, int> key_to_index;
    mon_at_.assign(kMatrixSize * kMatrixSize, -1);
    for (int r = 0; r < kMatrixSize; ++r) {
        for (int c = 0; c < kMatrixSize; ++c) {
            const auto canon = canonicalize_product(index_words_[r], index_words_[c]);
            const int key = canon.monomial.key();
            auto it = key_to_index.find(key);
            int idx;
            if (it == key_to_index.end()) {
                idx = static_cast<int>(monomials_.size());
                key_to_index.emplace(key, idx);
                monomials_.push_back(canon.monomial);
                positions_.emplace_back();
            } else {
                idx = it->second;
            }
            positions_[idx].emplace_back(r, c);
            mon_at_[r * kMatrixSize + c] = idx;
        }
    }

    identity_index_ = index_of({Word::empty(), Word::empty()});
    const auto canon_q = [this](Word a, Word b) {
        return index_of(canonicalize({a, b}).monomial);
    };
    quantity_index_[static_cast<int>(Quantity::a0)] = canon_q(Word::single(0), Word::empty());
    quantity_index_[static_cast<int>(Quantity::a1)] = canon_q(Word::single(1), Word::empty());
    quantity_index_[static_cast<int>(Quantity::b0)] = canon_q(Word::empty(), Word::single(0));
    quantity_index_[static_cast<int>(Quantity::b1)] = canon_q(Word::empty(), Word::single(1));
    quantity_index_[static_cast<int>(Quantity::a0b0)] = canon_q(Word::single(0), Word::single(0));
    quantity_index_[static_cast<int>(Quantity::a0b1)] = canon_q(Word::single(0), Word::single(1));
    quantity_index_[static_cast<int>(Quantity::a1b0)] = canon_q(Word::single(1), Word::single(0));
    quantity_index_[static_cast<int>(Quantity::a1b1)] = canon_q(Word::single(1), Word::single(1));
    for (int q : quantity_index_)
        if (q < 0) throw std::logic_error("behavior quantity monomial missing");
    if (identity_index_ < 0) throw std::logic_error("identity monomial missing");
}

const MomentStructure& MomentStructure::instance() {
    static const MomentStructure s;
    return s;
}

int MomentStructure::index_of(const Monomial& m) const {
    const auto canon = canonicalize(m);
    for (int i = 0; i < monomial_count(); ++i)
        if (monomials_[i] == canon.monomial) return i;
    return -1;
}

std::vector<double> MomentStructure::behavior_constraint_row(int quantity_or_minus1) const {
    std::vector<double> row(monomial_count(), 0.0);
    if (quantity_or_minus1 < 0) {
        row[identity_index_] = 1.0;
        return row;
    }
    if (quantity_or_minus1 > 7) throw std::invalid_argument("unknown behavior quantity");
    row[quantity_index_[quantity_or_minus1]] = 1.0;
    return row;
}

std::vector<double> MomentStructure::probability_row(int a, int b, int x, int y) const {
    if ((a | b | x | y) & ~1) throw std::invalid_argument("outcome/setting index out of range");
    std::vector<double> row(monomial_count(), 0.0);
    const double sa = outcome_sign(a), sb = outcome_sign(b);
    row[identity_index_] += 0.25;
    row[quantity_index_[x]] += 0.25 * sa;          // <A_x>
    row[quantity_index_[2 + y]] += 0.25 * sb;      // <B_y>
    row[quantity_index_[4 + x * 2 + y]] += 0.25 * sa * sb;
    return row;
}

std::vector<double> MomentStructure::chsh_row() const {
    std::vector<double> row(monomial_count(), 0.0);
    row[quantity_index_[static_cast<int>(Quantity::a0b0)]] = 1.0;
    row[quantity_index_[static_cast<int>(Quantity::a0b1)]] = 1.0;
    row[quantity_index_[static_cast<int>(Quantity::a1b0)]] = 1.0;
    row[quantity_index_[static_cast<int>(Quantity::a1b1)]] = -1.0;
    return row;
}

std::vector<double> MomentStructure::model_moments(const QuantumModel& m) const {
    auto word_op = [](const Word& w, const std::array<Mat2, 2>& obs) {
        Mat2 acc = Mat2::identity();
        for (int i = 0; i < w.len; ++i) acc = acc * obs[w.letters[i]];
        return acc;
    };
    std::vector<double> mom(monomial_count(), 0.0);
    for (int i = 0; i < monomial_count(); ++i) {
        const Mat2 wa = word_op(monomials_[i].alice, m.alice_obs);
        const Mat2 wb = word_op(monomials_[i].bob, m.bob_obs);
        mom[i] = pair_expectation(m.state.m, wa, wb);
    }
    return mom;
}

}  // namespace bellrand
