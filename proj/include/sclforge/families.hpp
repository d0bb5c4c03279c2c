#pragma once

// The explicit word families behind the non-equivalence witnesses for the
// one-relator group R_l = <a, b | [a,b]^l> and the genus-l surface group, and
// the free-group identities they satisfy.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sclforge/word.hpp"

namespace sclforge {

struct WordFamilies {
  unsigned ell = 0;
  std::int64_t n = 0;
  std::vector<Word> g;  // g_1 .. g_{l-1}
  std::vector<Word> w;  // w_1 .. w_{l-1}
  Word y, z;            // over {a, b}
  std::vector<Word> yi, zi;  // y_1..y_l, z_1..z_l over {a_i, b_i}
  Word x_n;             // [y_1^n, z_1] ... [y_l^n, z_l]
};

namespace detail {

inline Word gen_a(std::optional<unsigned> i = std::nullopt) { return Word::letter(Generator("a", i)); }
inline Word gen_b(std::optional<unsigned> i = std::nullopt) { return Word::letter(Generator("b", i)); }

inline void require_genus(unsigned ell) {
  if (ell < 2) throw std::invalid_argument("ell must be at least 2, got " + std::to_string(ell));
}

}  // namespace detail

/// g_i for 1 <= i <= l-1 (the family does not depend on l).
inline Word word_g(unsigned i) {
  using detail::gen_a, detail::gen_b;
  if (i == 0) throw std::invalid_argument("g_i is indexed from 1");
  if (i == 1) return conjugate(gen_b(), gen_a());
  const std::int64_t k = static_cast<std::int64_t>(i);
  return conjugate(gen_b() * gen_a().pow(2 - k) * gen_b().inverse(), gen_a().pow(k - 1));
}

inline Word word_w(unsigned i) {
  using detail::gen_a, detail::gen_b;
  if (i == 0) throw std::invalid_argument("w_i is indexed from 1");
  if (i == 1) return commutator(gen_b(), gen_a());
  const std::int64_t k = static_cast<std::int64_t>(i);
  return conjugate(gen_b() * gen_a().pow(2 - k) * gen_b().inverse(),
                   commutator(gen_b(), gen_a().inverse()));
}

/// y = {}^{b a^2} b^-1 over generators (a_i, b_i), or (a, b) when index is empty.
inline Word word_y(std::optional<unsigned> i = std::nullopt) {
  using detail::gen_a, detail::gen_b;
  return conjugate(gen_b(i) * gen_a(i).pow(2), gen_b(i).inverse());
}

/// z = {}^{b a^2} a^-l
inline Word word_z(unsigned ell, std::optional<unsigned> i = std::nullopt) {
  using detail::gen_a, detail::gen_b;
  return conjugate(gen_b(i) * gen_a(i).pow(2), gen_a(i).pow(-static_cast<std::int64_t>(ell)));
}

/// [y_1^n, z_1] ... [y_l^n, z_l]
inline Word word_x(unsigned ell, std::int64_t n) {
  detail::require_genus(ell);
  Word x;
  for (unsigned i = 1; i <= ell; ++i) x.append(commutator(word_y(i).pow(n), word_z(ell, i)));
  return x;
}

/// b a^2 b^-1 a^-2 [a,b]^l a^{2-l} b a^{l-2} b^-1
inline Word relation_target(unsigned ell) {
  using detail::gen_a, detail::gen_b;
  const std::int64_t l = ell;
  Word a = gen_a(), b = gen_b();
  return b * a.pow(2) * b.inverse() * a.pow(-2) * commutator(a, b).pow(l) * a.pow(2 - l) * b *
         a.pow(l - 2) * b.inverse();
}

/// [g_1, w_1] ... [g_{l-1}, w_{l-1}] as a free word.
inline Word relation_product(unsigned ell) {
  Word p;
  for (unsigned i = 1; i + 1 <= ell; ++i) p.append(commutator(word_g(i), word_w(i)));
  return p;
}

/// Surface relator [a_1,b_1] ... [a_l,b_l].
inline Word surface_relator(unsigned genus) {
  Word r;
  for (unsigned i = 1; i <= genus; ++i)
    r.append(commutator(detail::gen_a(i), detail::gen_b(i)));
  return r;
}

/// One-relator relator [a,b]^l.
inline Word one_relator(unsigned ell) {
  return commutator(detail::gen_a(), detail::gen_b()).pow(static_cast<std::int64_t>(ell));
}

inline WordFamilies build_word_families(unsigned ell, std::int64_t n) {
  detail::require_genus(ell);
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  WordFamilies pw;
  pw.ell = ell;
  pw.n = n;
  for (unsigned i = 1; i + 1 <= ell; ++i) {
    pw.g.push_back(word_g(i));
    pw.w.push_back(word_w(i));
  }
  pw.y = word_y();
  pw.z = word_z(ell);
  for (unsigned i = 1; i <= ell; ++i) {
    pw.yi.push_back(word_y(i));
    pw.zi.push_back(word_z(ell, i));
  }
  pw.x_n = word_x(ell, n);
  return pw;
}

/// Right-hand side of [g^n, h] = {}^{g^{n-1}}[g,h] ... {}^{g}[g,h] [g,h].
inline Word power_expansion(const Word& g, const Word& h, std::int64_t n) {
  Word c = commutator(g, h);
  Word out;
  for (std::int64_t j = n - 1; j >= 0; --j) out.append(conjugate(g.pow(j), c));
  return out;
}

struct IdentityCheck {
  bool holds = false;
  Word witness;  // lhs * rhs^-1, reduced; identity iff the check holds
  Word lhs, rhs;
};

inline IdentityCheck verify_relation(unsigned ell) {
  detail::require_genus(ell);
  IdentityCheck c;
  c.lhs = relation_product(ell);
  c.rhs = relation_target(ell);
  c.witness = c.lhs * c.rhs.inverse();
  c.holds = c.witness.is_identity();
  return c;
}

inline IdentityCheck verify_power_expansion(const Word& g, const Word& h, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("power expansion needs n >= 1");
  IdentityCheck c;
  c.lhs = commutator(g.pow(n), h);
  c.rhs = power_expansion(g, h, n);
  c.witness = c.lhs * c.rhs.inverse();
  c.holds = c.witness.is_identity();
  return c;
}

}  // namespace sclforge
