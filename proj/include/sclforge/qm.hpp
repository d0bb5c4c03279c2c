#pragma once

// Invariant quasimorphism values on products of mixed commutators.
//
// For a representation rho into the circle homeomorphisms and w_i in G', the
// value on [g_1, w_1] ... [g_k, w_k] is -tau of the product of the lifted
// commutators. Lifted commutators do not depend on the chosen lifts, so the
// value is -tau of the lifted image of the product word.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sclforge/ehn.hpp"
#include "sclforge/nilpotent.hpp"
#include "sclforge/families.hpp"
#include "sclforge/tau.hpp"
#include "sclforge/word.hpp"

namespace sclforge {

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CommPair {
  Word g;
  Word w;  // zero exponent sums
};

struct CommExpr {
  std::vector<CommPair> pairs;
  std::string group = "free";

  std::size_t size() const { return pairs.size(); }

  /// Throws PreconditionError naming the first pair whose w is not in G'.
  void validate() const {
    if (pairs.empty()) throw PreconditionError("commutator expression is empty");
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (!has_zero_exponent_sums(pairs[i].w))
        throw PreconditionError("w_" + std::to_string(i + 1) + " = " + pairs[i].w.str() +
                                " has nonzero exponent sums, so it is not in the commutator subgroup");
  }

  Word product() const {
    Word out;
    for (const auto& p : pairs) out.append(commutator(p.g, p.w));
    return out;
  }
};

inline CommExpr concat(const CommExpr& e1, const CommExpr& e2) {
  CommExpr out = e1;
  out.pairs.insert(out.pairs.end(), e2.pairs.begin(), e2.pairs.end());
  return out;
}

/// Conjugates every entry by h; the product is conjugated by h.
inline CommExpr conjugate_expr(const CommExpr& e, const Word& h) {
  CommExpr out;
  out.group = e.group;
  for (const auto& p : e.pairs) out.pairs.push_back({conjugate(h, p.g), conjugate(h, p.w)});
  return out;
}

struct MuValue {
  TauInterval value;
  long iterations = kDefaultIterations;
  Rational offset;  // integer translation split off the lifted product, if any
};

inline MuValue mu_of_word(const MapBindings& maps, const Word& product, long iterations = kDefaultIterations,
                          std::size_t cap = kDefaultBreakpointCap) {
  for (const auto& g : product.support())
    if (!maps.contains(g)) throw std::invalid_argument("generator " + g.str() + " is not bound");
  MuValue m;
  m.iterations = iterations;
  PLMap f;
  try {
    f = compose_word(maps, product, cap);
  } catch (const BreakpointOverflow&) {
    m.value = -tau_of_word_pointwise(maps, product, iterations);
    return m;
  }
  if (f.is_translation()) m.offset = f.breakpoints()[0].y;
  m.value = -tau_estimate(f, iterations);
  return m;
}

inline MuValue mu_eval(const MapBindings& maps, const CommExpr& e, long iterations = kDefaultIterations,
                       std::size_t cap = kDefaultBreakpointCap) {
  e.validate();
  return mu_of_word(maps, e.product(), iterations, cap);
}

enum class PowerSide { left, right };

/// Pairwise expansion of prod [g_i^n, w_i] (left) or prod [g_i, w_i^n] (right).
inline CommExpr expand_power(const CommExpr& base, PowerSide side, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("expand_power needs n >= 1");
  if (n == 1) return base;
  CommExpr out;
  out.group = base.group;
  for (const auto& p : base.pairs) {
    if (side == PowerSide::left) {
      // [g^n, w] = prod_{j=n-1..0} {}^{g^j}[g, w] = prod_j [g, {}^{g^j} w]
      for (std::int64_t j = n - 1; j >= 0; --j) out.pairs.push_back({p.g, conjugate(p.g.pow(j), p.w)});
    } else {
      // [g, w^n] = prod_{j=0..n-1} {}^{w^j}[g, w] = prod_j [{}^{w^j} g, w]
      for (std::int64_t j = 0; j < n; ++j) out.pairs.push_back({conjugate(p.w.pow(j), p.g), p.w});
    }
  }
  return out;
}

class NotInGamma3 : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MixedExpansion {
  CommExpr expr;
  Integer relator_power;  // s with word * relator^(-s) = expr.product()
  Word target;            // word * relator^(-s), reduced
};

namespace detail {

// Rewrites a word U in gamma_3(F) as an explicit product of mixed commutators.
// State: U_prefix = M * S * T with M the mixed pairs so far, S a sorted product
// of basic commutators [x_i, x_j]^s (i < j), and T a sorted tail x_0^t0 ... .
class MixedCollector {
 public:
  explicit MixedCollector(const Alphabet& alphabet)
      : alpha_(alphabet), r_(alphabet.rank()), t_(r_, 0), s_(r_ * r_, 0) {}

  void append(const Word& u) {
    for (const auto& b : u.blocks()) {
      auto pos = alpha_.position(b.gen);
      if (!pos) throw std::invalid_argument("generator " + b.gen.str() + " not in alphabet");
      const int eps = b.exp > 0 ? 1 : -1;
      const std::int64_t times = b.exp > 0 ? b.exp : -b.exp;
      for (std::int64_t i = 0; i < times; ++i) append_letter(*pos, eps);
    }
  }

  bool collected_trivially() const {
    for (auto t : t_)
      if (t != 0) return false;
    for (auto s : s_)
      if (s != 0) return false;
    return true;
  }

  std::vector<CommPair> take() { return std::move(mixed_); }

 private:
  Word gen(std::size_t i, std::int64_t e = 1) const { return Word::letter(alpha_[i], e); }
  Word basic(std::size_t i, std::size_t j) const { return commutator(gen(i), gen(j)); }

  Word s_word(std::size_t from_pair = 0) const {
    Word out;
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = i + 1; j < r_; ++j)
        if (i * r_ + j >= from_pair && s_[i * r_ + j] != 0) out.append(basic(i, j).pow(s_[i * r_ + j]));
    return out;
  }

  void push_mixed(const Word& conj, const Word& g, const Word& w) {
    Word cg = conjugate(conj, g), cw = conjugate(conj, w);
    if (cg.is_identity() || cw.is_identity()) return;
    mixed_.push_back({std::move(cg), std::move(cw)});
  }

  // Handles the factor {}^h [x_i, x_j]^e sitting between S and T.
  void absorb(const Word& h, std::size_t i, std::size_t j, int e) {
    const Word beta_e = basic(i, j).pow(e);
    // {}^h c = [h, c] c; the mixed factor moves left past S by conjugation.
    if (!h.is_identity()) push_mixed(s_word(), h, beta_e);
    // S c: move c left past the blocks Q above (i, j); Q c = c Q [Q^-1, c^-1].
    const std::size_t p = i * r_ + j;
    Word q = s_word(p + 1);
    s_[p] += e;
    if (!q.is_identity()) push_mixed(s_word(), q.inverse(), beta_e.inverse());
  }

  void append_letter(std::size_t j, int eps) {
    // Tail: A B with B the part above j. Move x = x_j^eps left through B one
    // letter at a time: y x = x y [y^-1, x^-1], and the new factor moves left
    // of the whole tail by conjugating with the tail prefix P = A B_left x y.
    Word a;
    for (std::size_t k = 0; k <= j; ++k) a.push(alpha_[k], t_[k]);
    std::vector<std::int64_t> left(t_.begin(), t_.end());
    for (std::size_t k = r_; k-- > j + 1;) {
      const std::int64_t tk = t_[k];
      const int sigma = tk > 0 ? 1 : -1;
      const std::int64_t steps = tk > 0 ? tk : -tk;
      for (std::int64_t s = 0; s < steps; ++s) {
        left[k] -= sigma;
        // P = A * (B letters below the current one) * x * y^sigma
        Word p = a;
        for (std::size_t m = j + 1; m <= k; ++m) p.push(alpha_[m], left[m]);
        p.push(alpha_[j], eps);
        p.push(alpha_[k], sigma);
        // [y^-sigma, x^-eps] in terms of beta = [x_j, x_k]
        const int u = -sigma, v = -eps;
        Word h0;
        int e;
        if (u == 1 && v == 1) {
          e = -1;
        } else if (u == -1 && v == 1) {
          h0 = gen(k, -1);
          e = 1;
        } else if (u == 1 && v == -1) {
          h0 = gen(j, -1);
          e = 1;
        } else {
          h0 = gen(k, -1) * gen(j, -1);
          e = -1;
        }
        absorb(p * h0, j, k, e);
      }
    }
    t_[j] += eps;
  }

  Alphabet alpha_;
  std::size_t r_;
  std::vector<std::int64_t> t_;
  std::vector<std::int64_t> s_;
  std::vector<CommPair> mixed_;
};

}  // namespace detail

/// Explicit mixed-commutator expression for w modulo the lattice's relator.
inline MixedExpansion mixed_expansion(const Word& w, const RelatorLattice& lattice) {
  Nil2Element x = magnus2(w, lattice.alphabet());
  auto s = lattice.multiplicity(x);
  if (!s) throw NotInGamma3("word " + w.str() + " is not in [G, G'] for " + lattice.name());
  MixedExpansion out;
  out.relator_power = *s;
  out.target = w * relator_word(lattice).pow(-s->get_si());
  detail::MixedCollector c(lattice.alphabet());
  c.append(out.target);
  if (!c.collected_trivially()) throw std::logic_error("collection left a nontrivial remainder");
  out.expr.pairs = c.take();
  out.expr.group = lattice.name();
  if (out.expr.pairs.empty()) out.expr.pairs.push_back({Word(), Word()});
  if (out.expr.product() != out.target) throw std::logic_error("mixed expansion does not reduce to its target");
  return out;
}

/// Pairs (g_i, w_i), i < l, whose commutator product reduces to
/// b a^2 b^-1 a^-2 [a,b]^l a^{2-l} b a^{l-2} b^-1, which equals [y, z] in R_l.
inline CommExpr relation_expression(unsigned ell) {
  CommExpr e;
  e.group = "one-relator(" + std::to_string(ell) + ")";
  for (unsigned i = 1; i < ell; ++i) e.pairs.push_back({word_g(i), word_w(i)});
  return e;
}

/// prod_{j=n-1..0} {}^{y^j}(relation expression): equals [y^n, z] in R_l.
inline CommExpr sequence_expression(unsigned ell, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  const CommExpr base = relation_expression(ell);
  const Word y = word_y();
  CommExpr out;
  out.group = base.group;
  for (std::int64_t j = n - 1; j >= 0; --j) out = concat(out, conjugate_expr(base, y.pow(j)));
  return out;
}

/// Closed form: -tau({}^{beta alpha^2}[beta^-n, alpha^-l]) - n(l - 1).
inline MuValue mu_closed_form(const Representation& rep, std::int64_t n, long iterations = kDefaultIterations) {
  const std::int64_t l = rep.ell;
  Word a = Word::letter(Generator("a")), b = Word::letter(Generator("b"));
  Word c = conjugate(b * a.pow(2), commutator(b.pow(-n), a.pow(-l)));
  MuValue m = mu_of_word(rep.maps, c, iterations);
  m.value = m.value + Rational(-n * (l - 1));
  return m;
}

struct SequenceRow {
  std::int64_t n = 0;
  TauInterval mu;          // path A
  TauInterval closed_form; // path B
  Rational bound;
  Rational bavard_lower;
  Rational cl_upper;
  Rational ratio;
  bool membership = true;
};

inline Rational abs_of(const Rational& x) { return x < 0 ? Rational(-x) : x; }

/// (|mu| - radius) / (2 D) with D = 1, clamped at 0.
inline Rational bavard_lower(const TauInterval& mu) {
  Rational v = (abs_of(mu.center) - mu.radius) / 2;
  return v < 0 ? Rational(0) : v;
}

class ReportFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::vector<SequenceRow> sequence_report(const Representation& rep, std::int64_t n_lo, std::int64_t n_hi,
                                                long iterations = kDefaultIterations) {
  const std::int64_t l = rep.ell;
  std::vector<SequenceRow> rows;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    SequenceRow row;
    row.n = n;
    row.mu = mu_eval(rep.maps, sequence_expression(rep.ell, n), iterations).value;
    row.closed_form = mu_closed_form(rep, n, iterations).value;
    if (!row.mu.intersects(row.closed_form))
      throw ReportFailure("paths disagree at l=" + std::to_string(l) + ", n=" + std::to_string(n));
    row.bound = Rational(n * (l - 1) - 1);
    if (abs_of(row.mu.center) + 2 * row.mu.radius < row.bound)
      throw ReportFailure("|mu| below n(l-1)-1 at l=" + std::to_string(l) + ", n=" + std::to_string(n));
    row.bavard_lower = bavard_lower(row.mu);
    row.cl_upper = 1;
    row.ratio = row.bavard_lower / row.cl_upper;
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Values on x_n = prod [y_i^n, z_i] in the genus-l surface group, under the
/// pullback a_i -> alpha, b_i -> beta.
inline std::vector<SequenceRow> surface_pullback_report(const Representation& rep, std::int64_t n_lo,
                                                        std::int64_t n_hi, long iterations = kDefaultIterations) {
  const std::int64_t l = rep.ell;
  const Representation pulled = rep.pulled_back_to_surface();
  const RelatorLattice lattice = RelatorLattice::surface(rep.ell);
  std::vector<SequenceRow> rows;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    SequenceRow row;
    row.n = n;
    Word x = word_x(rep.ell, n);
    row.membership = gamma3_membership(x, lattice);
    if (!row.membership) throw ReportFailure("x_" + std::to_string(n) + " is not in [G, G']");
    MixedExpansion ex = mixed_expansion(x, lattice);
    MuValue direct = mu_of_word(pulled.maps, ex.target, iterations);
    row.mu = direct.value;
    row.closed_form = mu_closed_form(rep, n, iterations).value * Rational(l);
    if (!row.mu.intersects(row.closed_form))
      throw ReportFailure("surface value disagrees with l * mu([y^n, z]) at n=" + std::to_string(n));
    row.bound = Rational(l * (n * (l - 1) - 1));
    if (abs_of(row.mu.center) + 2 * l * row.mu.radius < row.bound)
      throw ReportFailure("|mu(x_n)| below l(n(l-1)-1) at n=" + std::to_string(n));
    row.bavard_lower = bavard_lower(row.mu);
    row.cl_upper = Rational(l);
    row.ratio = row.bavard_lower / row.cl_upper;
    rows.push_back(std::move(row));
  }
  return rows;
}

struct Certificate {
  unsigned ell = 0;
  std::string group;
  std::string method;  // "overflow" or "growth"
  std::size_t k = 0;
  std::vector<std::pair<std::string, std::string>> expression;  // (y_i, z_i)
  std::int64_t n = 1;
  TauInterval mu;
  Rational defect = 1;
  Rational scl_upper;
  Rational scl_lower;
  Rational threshold;
  long iterations = kDefaultIterations;
  bool certified = false;
  std::string note;

  std::string verdict() const { return certified ? "certified" : "inconclusive"; }
};

/// Overflow test on prod [y_i, z_i]: |mu| - radius > (2k - 1) D.
inline Certificate overflow_certify(const Representation& rep, const RelatorLattice& lattice,
                                    const std::vector<Word>& ys, const std::vector<Word>& zs,
                                    long iterations = kDefaultIterations) {
  if (ys.empty() || ys.size() != zs.size()) throw std::invalid_argument("need k >= 1 matching pairs (y_i, z_i)");
  const std::size_t k = ys.size();
  Word product;
  Certificate c;
  c.ell = rep.ell;
  c.group = lattice.name();
  c.method = "overflow";
  c.k = k;
  c.iterations = iterations;
  for (std::size_t i = 0; i < k; ++i) {
    Word ci = commutator(ys[i], zs[i]);
    if (!has_zero_exponent_sums(ci))
      throw PreconditionError("condition (i) fails: [y_" + std::to_string(i + 1) + ", z_" + std::to_string(i + 1) +
                              "] is not in G'");
    product.append(ci);
    c.expression.emplace_back(ys[i].str(), zs[i].str());
  }
  if (!gamma3_membership(product, lattice))
    throw PreconditionError("condition (ii) fails: the product is not in [G, G']");
  MixedExpansion ex = mixed_expansion(product, lattice);
  const MapBindings& maps =
      lattice.kind() == RelatorLattice::Kind::surface ? rep.pulled_back_to_surface().maps : rep.maps;
  MuValue v = mu_of_word(maps, ex.target, iterations);
  c.mu = v.value;
  c.threshold = Rational(static_cast<long>(2 * k - 1));
  c.scl_upper = Rational(static_cast<long>(k));
  c.scl_lower = bavard_lower(c.mu);
  c.certified = abs_of(c.mu.center) - c.mu.radius > c.threshold;
  c.note = c.certified ? "|mu| exceeds (2k-1)D, so |mu(prod [y_i^n, z_i])| >= n(|mu| - (2k-1)D) + D grows without bound"
                       : "|mu| does not exceed (2k-1)D at this expression";
  return c;
}

/// Growth test on the surface sequence x_n: first n <= n_max whose Bavard
/// lower bound exceeds C * l (l = sup of the commutator-length upper bounds).
inline Certificate growth_certify(const Representation& rep, std::int64_t n_max, const Rational& C,
                                  long iterations = kDefaultIterations) {
  Certificate c;
  c.ell = rep.ell;
  c.group = RelatorLattice::surface(rep.ell).name();
  c.method = "growth";
  c.k = rep.ell;
  c.iterations = iterations;
  c.scl_upper = Rational(static_cast<long>(rep.ell));
  c.threshold = C * Rational(static_cast<long>(rep.ell));
  for (unsigned i = 1; i <= rep.ell; ++i) c.expression.emplace_back(word_y(i).str(), word_z(rep.ell, i).str());
  for (std::int64_t n = 1; n <= n_max; ++n) {
    auto rows = surface_pullback_report(rep, n, n, iterations);
    c.n = n;
    c.mu = rows[0].mu;
    c.scl_lower = rows[0].bavard_lower;
    if (c.scl_lower > c.threshold) {
      c.certified = true;
      c.note = "scl_{G,G'}(x_n) >= " + to_string(c.scl_lower) + " > C * scl_G upper bound";
      return c;
    }
  }
  c.note = "threshold not reached for n <= " + std::to_string(n_max);
  return c;
}

}  // namespace sclforge
