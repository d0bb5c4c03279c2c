#pragma once

// Degree-2 truncated Magnus expansion: the image of a free word in the free
// class-2 nilpotent quotient F/gamma_3(F), and the resulting decision
// procedure for membership in [G, G'] = gamma_3(G) for the free group, the
// one-relator group <a, b | [a,b]^l> and the genus-l surface group.
//
// Each generator x_i maps to 1 + X_i; products are truncated beyond degree 2.
// An element is the pair (v, E) with v the linear coefficients (exponent sums)
// and E(i, j) the coefficient of X_i X_j.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sclforge/rational.hpp"
#include "sclforge/word.hpp"

namespace sclforge {

class Nil2Element {
 public:
  explicit Nil2Element(std::size_t rank = 0) : rank_(rank), v_(rank), e_(rank * rank) {}

  std::size_t rank() const { return rank_; }
  const Integer& v(std::size_t i) const { return v_.at(i); }
  Integer& v(std::size_t i) { return v_.at(i); }
  const Integer& E(std::size_t i, std::size_t j) const { return e_.at(i * rank_ + j); }
  Integer& E(std::size_t i, std::size_t j) { return e_.at(i * rank_ + j); }

  bool is_identity() const {
    for (const auto& x : v_)
      if (x != 0) return false;
    for (const auto& x : e_)
      if (x != 0) return false;
    return true;
  }

  bool linear_part_vanishes() const {
    for (const auto& x : v_)
      if (x != 0) return false;
    return true;
  }

  bool operator==(const Nil2Element& o) const {
    return rank_ == o.rank_ && v_ == o.v_ && e_ == o.e_;
  }

  /// (-v, -E + v v^T)
  Nil2Element inverse() const {
    Nil2Element r(rank_);
    for (std::size_t i = 0; i < rank_; ++i) r.v_[i] = -v_[i];
    for (std::size_t i = 0; i < rank_; ++i)
      for (std::size_t j = 0; j < rank_; ++j) r.E(i, j) = -E(i, j) + v_[i] * v_[j];
    return r;
  }

  /// x_i^k: v = k e_i, E(i,i) = k(k-1)/2.
  static Nil2Element generator_power(std::size_t rank, std::size_t i, std::int64_t k) {
    Nil2Element r(rank);
    r.v_.at(i) = Integer(static_cast<long>(k));
    Integer kk(static_cast<long>(k));
    r.E(i, i) = kk * (kk - 1) / 2;
    return r;
  }

 private:
  std::size_t rank_;
  std::vector<Integer> v_;
  std::vector<Integer> e_;
};

/// v = v_p + v_q, E = E_p + E_q + v_p v_q^T
inline Nil2Element nil2_mul(const Nil2Element& p, const Nil2Element& q) {
  if (p.rank() != q.rank())
    throw std::invalid_argument("nil2_mul rank mismatch: " + std::to_string(p.rank()) + " vs " +
                                std::to_string(q.rank()));
  const std::size_t n = p.rank();
  Nil2Element r(n);
  for (std::size_t i = 0; i < n; ++i) r.v(i) = p.v(i) + q.v(i);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.E(i, j) = p.E(i, j) + q.E(i, j) + p.v(i) * q.v(j);
  return r;
}

inline Nil2Element magnus2(const Word& w, const Alphabet& alphabet) {
  const std::size_t n = alphabet.rank();
  Nil2Element acc(n);
  for (const auto& b : w.blocks()) {
    auto pos = alphabet.position(b.gen);
    if (!pos) throw std::invalid_argument("generator " + b.gen.str() + " not in alphabet");
    // Right-multiplying by x_i^k only touches column i and the (i,i) entry.
    const std::size_t i = *pos;
    Integer k(static_cast<long>(b.exp));
    for (std::size_t r = 0; r < n; ++r) acc.E(r, i) += acc.v(r) * k;
    acc.E(i, i) += k * (k - 1) / 2;
    acc.v(i) += k;
  }
  return acc;
}

/// Sublattice of antisymmetric integer matrices spanned by relator images.
/// Every group kind used here has a lattice of rank at most one.
class RelatorLattice {
 public:
  enum class Kind { free, one_relator, surface };

  static RelatorLattice free(std::size_t rank) {
    RelatorLattice L(Kind::free, rank == 2 ? Alphabet::two_generator() : generic_alphabet(rank));
    return L;
  }

  static RelatorLattice free(const Alphabet& alphabet) {
    return RelatorLattice(Kind::free, alphabet);
  }

  /// Z * l (e_a ^ e_b)
  static RelatorLattice one_relator(unsigned ell) {
    RelatorLattice L(Kind::one_relator, Alphabet::two_generator());
    L.ell_ = ell;
    L.generator_ = std::vector<Integer>(4);
    (*L.generator_)[0 * 2 + 1] = Integer(static_cast<long>(ell));
    (*L.generator_)[1 * 2 + 0] = -Integer(static_cast<long>(ell));
    return L;
  }

  /// Z * sum_i (e_{a_i} ^ e_{b_i})
  static RelatorLattice surface(unsigned genus) {
    RelatorLattice L(Kind::surface, Alphabet::surface(genus));
    L.ell_ = genus;
    const std::size_t n = 2 * genus;
    L.generator_ = std::vector<Integer>(n * n);
    for (std::size_t i = 0; i < genus; ++i) {
      (*L.generator_)[(2 * i) * n + 2 * i + 1] = 1;
      (*L.generator_)[(2 * i + 1) * n + 2 * i] = -1;
    }
    return L;
  }

  Kind kind() const { return kind_; }
  unsigned ell() const { return ell_; }
  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t rank() const { return alphabet_.rank(); }

  /// Lattice generator as a rank x rank row-major matrix, if nonzero.
  const std::optional<std::vector<Integer>>& generator() const { return generator_; }

  std::string name() const {
    switch (kind_) {
      case Kind::free: return "free(" + std::to_string(rank()) + ")";
      case Kind::one_relator: return "one-relator(" + std::to_string(ell_) + ")";
      case Kind::surface: return "surface(" + std::to_string(ell_) + ")";
    }
    return "?";
  }

  /// The integer s with antisym(E) = s * generator, if one exists. Requires
  /// zero linear part. For the free lattice s is 0 when it exists.
  std::optional<Integer> multiplicity(const Nil2Element& x) const {
    if (!x.linear_part_vanishes()) return std::nullopt;
    const std::size_t n = rank();
    std::optional<Integer> s;
    if (!generator_) s = Integer(0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        // With v = 0 the matrix is antisymmetric, so the (i,j) entry above
        // the diagonal carries the whole (i,j) coefficient.
        const Integer& e = x.E(i, j);
        const Integer g = generator_ ? (*generator_)[i * n + j] : Integer(0);
        if (g == 0) {
          if (e != 0) return std::nullopt;
          continue;
        }
        if (e % g != 0) return std::nullopt;
        Integer q = e / g;
        if (s && *s != q) return std::nullopt;
        s = q;
      }
    }
    if (!s) s = Integer(0);
    return s;
  }

 private:
  RelatorLattice(Kind k, Alphabet alphabet) : kind_(k), alphabet_(std::move(alphabet)) {}

  static Alphabet generic_alphabet(std::size_t rank) {
    std::vector<Generator> g;
    for (std::size_t i = 1; i <= rank; ++i) g.emplace_back("x", static_cast<unsigned>(i));
    return Alphabet(std::move(g));
  }

  Kind kind_;
  Alphabet alphabet_;
  unsigned ell_ = 0;
  std::optional<std::vector<Integer>> generator_;
};

/// Membership of w in [G, G'] for the group described by the lattice.
inline bool gamma3_membership(const Word& w, const RelatorLattice& lattice) {
  Nil2Element x = magnus2(w, lattice.alphabet());
  return lattice.multiplicity(x).has_value();
}

/// Word for the lattice generator's relator: [a,b]^l, prod [a_i,b_i], or 1.
inline Word relator_word(const RelatorLattice& lattice) {
  switch (lattice.kind()) {
    case RelatorLattice::Kind::free: return Word();
    case RelatorLattice::Kind::one_relator: {
      Word a = Word::letter(Generator("a")), b = Word::letter(Generator("b"));
      return commutator(a, b).pow(lattice.ell());
    }
    case RelatorLattice::Kind::surface: {
      Word r;
      for (unsigned i = 1; i <= lattice.ell(); ++i)
        r.append(commutator(Word::letter(Generator("a", i)), Word::letter(Generator("b", i))));
      return r;
    }
  }
  return Word();
}

}  // namespace sclforge
