#ifndef BELLRAND_MOMENTS_HPP
#define BELLRAND_MOMENTS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bellrand/quantum.hpp"
#include "bellrand/scenario.hpp"

namespace bellrand {

/// Word over one party's observables {X0, X1}, reduced (no adjacent repeated
/// letter, since each observable squares to the identity). Length up to 4 is
/// enough for products of two level-2 words.
struct Word {
    std::uint8_t len = 0;
    std::array<std::uint8_t, 4> letters{};

    static Word empty() { return {}; }
    static Word single(int letter);
    bool operator==(const Word&) const = default;
    /// encoding that orders words by (length, letters lexicographic)
    int key() const;
    std::string str(char symbol) const;  // e.g. "A0A1"
};

Word reduce_concat(const Word& lhs, const Word& rhs);  // applies X^2 = 1
Word word_adjoint(const Word& w);                      // reversal (letters Hermitian)

/// Product monomial: one word per party (cross-party operators commute).
struct Monomial {
    Word alice;
    Word bob;

    bool operator==(const Monomial&) const = default;
    int key() const { return alice.key() * 64 + bob.key(); }
    std::string str() const;
};

struct CanonicalMonomial {
    Monomial monomial;
    bool reversed = false;  // true if the adjoint representative was chosen
};

/// Maps a monomial and its adjoint to one representative: words are reduced,
/// and of {m, m-adjoint} the one with the smaller (alice, bob) key is kept.
/// With real symmetric moment matrices both carry the same moment value.
CanonicalMonomial canonicalize(const Monomial& m);
CanonicalMonomial canonicalize_product(const Monomial& row, const Monomial& col);

/// Local-level-2 moment matrix structure for the 2222 scenario.
///
/// Index words per party: {1, X0, X1, X0X1, X1X0}, giving the 25 products
/// u (x) v. Entry ((u,v),(u',v')) of the moment matrix carries the moment of
/// canonicalize(u~u' (x) v~v') where ~ denotes adjoint-times. The distinct
/// canonical monomials partition the 625 positions; each class's indicator
/// matrix is symmetric.
class MomentStructure {
  public:
    static const MomentStructure& instance();  // built once, immutable

    static constexpr int kMatrixSize = 25;

    int monomial_count() const { return static_cast<int>(monomials_.size()); }
    const std::vector<Monomial>& canonical_monomials() const { return monomials_; }
    const std::vector<Monomial>& index_list() const { return index_words_; }

    /// positions (r,c) whose entry carries monomial m; mirrored pairs are
    /// both listed, so the indicator is symmetric by construction
    const std::vector<std::pair<int, int>>& positions(int mon) const {
        return positions_[mon];
    }
    int position_count(int mon) const { return static_cast<int>(positions_[mon].size()); }
    /// monomial index at a single matrix position
    int monomial_at(int r, int c) const { return mon_at_[r * kMatrixSize + c]; }

    int index_of(const Monomial& m) const;  // -1 when absent

    /// canonical monomial index of the empty word (block weight q_lambda)
    int identity_index() const { return identity_index_; }
    /// canonical monomial index of one of the 8 behavior quantities
    int quantity_index(Quantity q) const { return quantity_index_[static_cast<int>(q)]; }

    /// Row over canonical monomials extracting one physical quantity
    /// (identity -> block weight). `quantity` is -1 for the identity.
    std::vector<double> behavior_constraint_row(int quantity_or_minus1) const;

    /// Row encoding P(ab|xy) = (q + s_a <A_x> + s_b <B_y> + s_a s_b <A_x B_y>)/4
    /// on a (subnormalized) block moment vector.
    std::vector<double> probability_row(int a, int b, int x, int y) const;

    /// CHSH functional on a block moment vector.
    std::vector<double> chsh_row() const;

    /// Moments of all canonical monomials for a quantum model,
    /// Tr[rho (w_A (x) w_B)]; used to build feasible points and by tests.
    std::vector<double> model_moments(const QuantumModel& m) const;

  private:
    MomentStructure();

    std::vector<Monomial> index_words_;
    std::vector<Monomial> monomials_;
    std::vector<std::vector<std::pair<int, int>>> positions_;
    std::vector<int> mon_at_;
    int identity_index_ = -1;
    std::array<int, 8> quantity_index_{};
};

}  // namespace bellrand

#endif
