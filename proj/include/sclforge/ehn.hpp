#pragma once

// Eisenbud-Hirsch-Neumann toolkit for PL lifts.
//
//  * cl_bound_ehn: the least n with min(F - id) < 2n - 1 and max(F - id) > 1 - 2n,
//    an upper bound for the commutator length of F in the lifted group.
//  * translation_as_commutator: exact PL maps f, g with [f, g] = T_c, |c| < 1.
//
// Construction of [f, g] = T_c. Take g north-south with a two-piece
// ("tent") displacement: slope lambda through the repeller, slope mu through
// the attractor. If the tent's amplitude (lambda-1)(1-mu)/(lambda-mu) exceeds c
// and the tent is placed so that its range straddles both 0 and -c, then
// h = T_c g is north-south with the same multipliers, and the map sending each
// orbit interval of g affinely onto the matching orbit interval of h
// conjugates g to h. Then f g f^-1 = T_c g, i.e. [f, g] = T_c.
// pl_conjugator finds that map by transporting a fundamental domain from the
// repeller to the attractor, so it also handles pairs whose conjugator is not
// affine on orbit intervals, as long as the transport reaches the linear germs.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sclforge/pl_map.hpp"
#include "sclforge/tau.hpp"
#include "sclforge/word.hpp"

namespace sclforge {

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClBound {
  long n = 1;
  bool single_commutator = false;
  Rational min_displacement;
  Rational max_displacement;
};

inline ClBound cl_bound_ehn(const PLMap& f) {
  DisplacementExtrema d = displacement_extrema(f);
  ClBound b;
  b.min_displacement = d.min;
  b.max_displacement = d.max;
  // 2n - 1 > min  <=>  n >= floor((min + 1) / 2) + 1, likewise for max.
  Integer n1 = floor_of((d.min + 1) / 2) + 1;
  Integer n2 = floor_of((1 - d.max) / 2) + 1;
  Integer n = n1 > n2 ? n1 : n2;
  if (n < 1) n = 1;
  b.n = n.get_si();
  b.single_commutator = d.min < 1 && d.max > -1;
  return b;
}

/// Applies to the underlying lift; the central coordinate must vanish.
inline ClBound cl_bound_ehn(const LiftedMapR& e) {
  if (e.r() != 0) throw std::invalid_argument("cl_bound_ehn needs a lifted map with r = 0");
  return cl_bound_ehn(e.map());
}

struct NorthSouthMap {
  PLMap map;
  Rational repeller;   // in [0,1)
  Rational attractor;  // in [0,1)
  Rational lambda;     // slope at the repeller
  Rational mu;         // slope at the attractor
};

/// Checks the north-south structure of F (tau = 0, exactly one repelling and
/// one attracting fixed point per period, linear germs at both).
inline NorthSouthMap classify_north_south(const PLMap& f) {
  std::vector<Rational> fps;
  try {
    fps = fixed_points(f);
  } catch (const std::domain_error&) {
    throw ConstructionError("map has an interval of fixed points, not north-south");
  }
  if (fps.size() != 2)
    throw ConstructionError("north-south map needs exactly two fixed points per period, found " +
                            std::to_string(fps.size()));
  NorthSouthMap ns;
  ns.map = f;
  bool have_rep = false, have_att = false;
  for (const auto& p : fps) {
    Rational sl = f.left_slope(p), sr = f.right_slope(p);
    if (sl != sr) throw ConstructionError("fixed point " + to_string(p) + " is a breakpoint");
    if (sl > 1) {
      ns.repeller = p;
      ns.lambda = sl;
      have_rep = true;
    } else if (sl < 1) {
      ns.attractor = p;
      ns.mu = sl;
      have_att = true;
    }
  }
  if (!have_rep || !have_att) throw ConstructionError("fixed points are not one repeller and one attractor");
  return ns;
}

/// Amplitude of the two-piece displacement with slopes lambda and mu.
inline Rational tent_amplitude(const Rational& lambda, const Rational& mu) {
  return (lambda - 1) * (1 - mu) / (lambda - mu);
}

struct NorthSouthPair {
  NorthSouthMap g;  // repeller at 0
  NorthSouthMap h;  // T_c o g
  Rational c;
};

inline NorthSouthPair north_south_pair(const Rational& c, const Rational& lambda, const Rational& mu) {
  if (!(c > 0 && c < 1)) throw std::invalid_argument("north_south_pair needs c in (0,1), got " + to_string(c));
  if (!(lambda > 1)) throw std::invalid_argument("repelling multiplier must exceed 1, got " + to_string(lambda));
  if (!(mu > 0 && mu < 1)) throw std::invalid_argument("attracting multiplier must lie in (0,1), got " + to_string(mu));
  const Rational amp = tent_amplitude(lambda, mu);
  if (!(amp > c))
    throw ConstructionError("infeasible parameters: displacement amplitude (lambda-1)(1-mu)/(lambda-mu) = " +
                            to_string(amp) + " must exceed c = " + to_string(c));
  const Rational dmax = (amp - c) / 2;
  const Rational dmin = dmax - amp;
  const Rational top = dmax / (lambda - 1);
  const Rational bottom = top + amp / (1 - mu);
  PLMap g({{top, top + dmax}, {bottom, bottom + dmin}});
  NorthSouthPair pair;
  pair.c = c;
  pair.g = classify_north_south(g);
  pair.h = classify_north_south(g.shifted(c));
  if (pair.g.repeller != 0) throw std::logic_error("tent repeller is not at 0");
  if (pair.g.lambda != lambda || pair.g.mu != mu || pair.h.lambda != lambda || pair.h.mu != mu)
    throw std::logic_error("tent multipliers do not match the requested ones");
  return pair;
}

/// Smallest integer L >= 2 with (L-1)/(L+1) > |c|; multipliers (L, 1/L).
inline std::pair<Rational, Rational> default_multipliers(const Rational& c) {
  Rational a = c < 0 ? Rational(-c) : c;
  long L = 2;
  while (!(tent_amplitude(Rational(L), Rational(1, L)) > a)) ++L;
  Rational mu(1, L);
  mu.canonicalize();
  return {Rational(L), mu};
}

struct ConjugatorOptions {
  std::size_t transport_budget = 64;
  std::size_t breakpoint_cap = kDefaultBreakpointCap;
  /// Position of the fundamental-domain anchor inside each orbit interval,
  /// as a fraction from the repelling end.
  Rational anchor = Rational(1, 2);
};

namespace detail {

// Maximal open interval around p on which f is affine (p not a breakpoint).
inline std::pair<Rational, Rational> linear_germ(const PLMap& f, const Rational& p) {
  const auto& bps = f.breakpoints();
  const Integer shift = floor_of(p);
  const Rational t = p - Rational(shift);
  Rational lo, hi;
  bool found_lo = false, found_hi = false;
  // Breakpoints lifted to the window [p - 1, p + 1].
  for (const auto& b : bps) {
    for (int s = -1; s <= 1; ++s) {
      Rational x = b.x + s;
      if (x < t && (!found_lo || x > lo)) {
        lo = x;
        found_lo = true;
      }
      if (x > t && (!found_hi || x < hi)) {
        hi = x;
        found_hi = true;
      }
    }
  }
  return {lo + Rational(shift), hi + Rational(shift)};
}

inline bool inside(const Rational& a, const Rational& b, const std::pair<Rational, Rational>& germ) {
  Rational lo = a < b ? a : b, hi = a < b ? b : a;
  return germ.first <= lo && hi <= germ.second;
}

// Orbit interval (rep, att) of w1 (as lifted reals; att may be below rep)
// mapped to (rep2, att2) of w2. Returns the breakpoints of the conjugator
// strictly inside the interval and the value list, assembled from transported
// pieces.
inline std::vector<Breakpoint> transport_interval(const PLMap& w1, const PLMap& w2, const Rational& rep1,
                                                  const Rational& att1, const Rational& rep2,
                                                  const Rational& att2, const ConjugatorOptions& opt) {
  const std::size_t cap = opt.breakpoint_cap;
  const Rational u = rep1 + (att1 - rep1) * opt.anchor;
  const Rational u1 = w1(u);
  // Affine guess for the anchor image, then an affine fundamental-domain map.
  const Rational phi_u = rep2 + (att2 - rep2) * (u - rep1) / (att1 - rep1);
  const Rational phi_u1 = w2(phi_u);
  // phi as a global two-breakpoint lift, affine on the domain between u and u1.
  auto make_phi = [&]() {
    Rational a = u < u1 ? u : u1, b = u < u1 ? u1 : u;
    Rational fa = u < u1 ? phi_u : phi_u1, fb = u < u1 ? phi_u1 : phi_u;
    Integer k = floor_of(a);
    Rational a0 = a - Rational(k), b0 = b - Rational(k), fa0 = fa - Rational(k), fb0 = fb - Rational(k);
    if (b0 >= 1) {
      // Domain straddles an integer: shift so both points lie in [0,1).
      Integer kb = floor_of(b);
      return PLMap({{b - Rational(kb), fb - Rational(kb)}, {a - Rational(kb) + 1, fa - Rational(kb) + 1}});
    }
    return PLMap({{a0, fa0}, {b0, fb0}});
  };
  const PLMap phi = make_phi();
  const auto germ1_att = linear_germ(w1, att1), germ2_att = linear_germ(w2, att2);
  const auto germ1_rep = linear_germ(w1, rep1), germ2_rep = linear_germ(w2, rep2);

  // Piece k lives on w1^k(D) and equals w2^k o phi o w1^-k.
  struct Piece {
    Rational a, b;  // domain endpoints (a = w1^k(u), b = w1^{k+1}(u))
    PLMap map;
  };
  auto piece = [&](long k) {
    PLMap m = pl_compose(pl_compose(pl_power(w2, k, cap), phi, cap), pl_power(w1, -k, cap), cap);
    Rational a = pl_eval(pl_power(w1, k, cap), u);
    Rational b = w1(a);
    return Piece{a, b, std::move(m)};
  };
  auto interior_breaks = [](const Piece& p) {
    std::vector<Rational> out;
    Rational lo = p.a < p.b ? p.a : p.b, hi = p.a < p.b ? p.b : p.a;
    for (const auto& bp : p.map.breakpoints()) {
      Integer k = floor_of(lo - bp.x) + 1;  // smallest lift >= lo - ... shifted below
      for (Rational x = bp.x + Rational(k) - 1; x <= hi; x += 1)
        if (x > lo && x < hi) out.push_back(x);
    }
    return out;
  };
  auto affine_through = [&](const Piece& p, const Rational& fx1, const Rational& fx2) {
    if (!interior_breaks(p).empty()) return false;
    Rational va = p.map(p.a), vb = p.map(p.b);
    return (va - fx2) * (p.b - fx1) == (vb - fx2) * (p.a - fx1);
  };

  std::vector<Piece> pieces;
  pieces.push_back(piece(0));
  // Toward the attractor.
  long k = 0;
  while (true) {
    const Piece& p = pieces.back();
    Rational va = p.map(p.a), vb = p.map(p.b);
    if (inside(p.a, p.b, germ1_att) && inside(va, vb, germ2_att) && affine_through(p, att1, att2)) break;
    if (static_cast<std::size_t>(++k) > opt.transport_budget)
      throw ConstructionError("conjugator transport toward the attractor did not stabilize within " +
                              std::to_string(opt.transport_budget) + " steps");
    pieces.push_back(piece(k));
  }
  // Toward the repeller.
  std::vector<Piece> back;
  k = 0;
  {
    const Piece* p = &pieces.front();
    while (true) {
      Rational va = p->map(p->a), vb = p->map(p->b);
      if (inside(p->a, p->b, germ1_rep) && inside(va, vb, germ2_rep) && affine_through(*p, rep1, rep2)) break;
      if (static_cast<std::size_t>(++k) > opt.transport_budget)
        throw ConstructionError("conjugator transport toward the repeller did not stabilize within " +
                                std::to_string(opt.transport_budget) + " steps");
      back.push_back(piece(-k));
      p = &back.back();
    }
  }
  std::vector<Breakpoint> out;
  auto emit = [&](const Piece& p) {
    out.push_back({p.a, p.map(p.a)});
    out.push_back({p.b, p.map(p.b)});
    for (const auto& x : interior_breaks(p)) out.push_back({x, p.map(x)});
  };
  for (const auto& p : pieces) emit(p);
  for (const auto& p : back) emit(p);
  return out;
}

}  // namespace detail

/// PL lift f with f o w1 = w2 o f, for north-south maps with equal multipliers.
inline PLMap pl_conjugator(const NorthSouthMap& w1, const NorthSouthMap& w2, const ConjugatorOptions& opt = {}) {
  if (w1.lambda != w2.lambda || w1.mu != w2.mu)
    throw ConstructionError("multiplier mismatch: (" + to_string(w1.lambda) + ", " + to_string(w1.mu) +
                            ") vs (" + to_string(w2.lambda) + ", " + to_string(w2.mu) + ")");
  // Lift coordinates: rep < att < rep + 1 for both maps.
  const Rational p1 = w1.repeller, p2 = w2.repeller;
  const Rational q1 = w1.attractor > p1 ? w1.attractor : w1.attractor + 1;
  const Rational q2 = w2.attractor > p2 ? w2.attractor : w2.attractor + 1;
  std::vector<Breakpoint> pts;
  pts.push_back({p1, p2});
  pts.push_back({q1, q2});
  auto a = detail::transport_interval(w1.map, w2.map, p1, q1, p2, q2, opt);
  auto b = detail::transport_interval(w1.map, w2.map, p1 + 1, q1, p2 + 1, q2, opt);
  pts.insert(pts.end(), a.begin(), a.end());
  pts.insert(pts.end(), b.begin(), b.end());
  // Reduce to [0,1) and deduplicate.
  for (auto& bp : pts) {
    Integer k = floor_of(bp.x);
    bp.x -= Rational(k);
    bp.y -= Rational(k);
  }
  std::sort(pts.begin(), pts.end(), [](const Breakpoint& l, const Breakpoint& r) { return l.x < r.x; });
  std::vector<Breakpoint> uniq;
  for (auto& bp : pts) {
    if (!uniq.empty() && uniq.back().x == bp.x) {
      if (uniq.back().y != bp.y) throw ConstructionError("transported pieces disagree at " + to_string(bp.x));
      continue;
    }
    uniq.push_back(std::move(bp));
  }
  PLMap f(std::move(uniq));
  if (!pl_equal(pl_compose(f, w1.map, opt.breakpoint_cap), pl_compose(w2.map, f, opt.breakpoint_cap)))
    throw ConstructionError("conjugator failed exact verification f o w1 = w2 o f");
  return f;
}

struct CommutatorPair {
  PLMap f;
  PLMap g;
  Rational c;
  Rational lambda;
  Rational mu;
};

/// Exact f, g with [f, g] = f g f^-1 g^-1 = T_c, for 0 < |c| < 1.
inline CommutatorPair translation_as_commutator(const Rational& c, std::optional<Rational> lambda = std::nullopt,
                                                std::optional<Rational> mu = std::nullopt,
                                                const ConjugatorOptions& opt = {}) {
  if (c == 0) throw std::invalid_argument("translation_as_commutator needs c != 0");
  const Rational a = c < 0 ? Rational(-c) : c;
  if (a >= 1)
    throw std::invalid_argument("T_" + to_string(c) +
                                " is not a single commutator: its displacement is constant " + to_string(c) +
                                ", outside (-1, 1)");
  auto [dl, dm] = default_multipliers(a);
  const Rational lam = lambda.value_or(dl), m = mu.value_or(dm);
  NorthSouthPair pair = north_south_pair(a, lam, m);
  PLMap f = pl_conjugator(pair.g, pair.h, opt);
  PLMap g = pair.g.map;
  CommutatorPair out{f, g, c, lam, m};
  if (c < 0) std::swap(out.f, out.g);
  if (!pl_equal(pl_commutator(out.f, out.g, opt.breakpoint_cap), PLMap::translation(c)))
    throw ConstructionError("constructed pair fails [f, g] = T_" + to_string(c));
  return out;
}

/// Generator assignment into lifted circle maps.
struct Representation {
  enum class Target { exact_pl, numeric_mobius };
  Target target = Target::exact_pl;
  unsigned ell = 0;
  MapBindings maps;
  Rational c, lambda, mu;

  /// Same maps pulled back along a_i -> a, b_i -> b.
  Representation pulled_back_to_surface() const {
    Representation r = *this;
    r.maps = MapBindings();
    for (unsigned i = 1; i <= ell; ++i) {
      r.maps.bind(Generator("a", i), maps.map(Generator("a")));
      r.maps.bind(Generator("b", i), maps.map(Generator("b")));
    }
    return r;
  }
};

/// rho_l on R_l = <a, b | [a,b]^l>: a -> alpha, b -> beta with [alpha, beta] = T_{(l-1)/l}.
inline Representation build_rep_onerelator(unsigned ell, const ConjugatorOptions& opt = {}) {
  if (ell < 2) throw std::invalid_argument("ell must be at least 2, got " + std::to_string(ell));
  Rational c(static_cast<long>(ell) - 1, static_cast<long>(ell));
  c.canonicalize();
  CommutatorPair pair = translation_as_commutator(c, std::nullopt, std::nullopt, opt);
  Representation rep;
  rep.ell = ell;
  rep.c = c;
  rep.lambda = pair.lambda;
  rep.mu = pair.mu;
  rep.maps.bind(Generator("a"), pair.f);
  rep.maps.bind(Generator("b"), pair.g);
  const Word a = Word::letter(Generator("a")), b = Word::letter(Generator("b"));
  PLMap relator = compose_word(rep.maps, commutator(a, b).pow(ell), opt.breakpoint_cap);
  if (!pl_equal(relator, PLMap::translation(Rational(static_cast<long>(ell) - 1))))
    throw ConstructionError("lifted relator is not T_{l-1}");
  if (!circle_equal(relator, PLMap::identity()))
    throw ConstructionError("relator does not act trivially on the circle");
  return rep;
}

}  // namespace sclforge
