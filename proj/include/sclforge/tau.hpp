#pragma once

// Certified translation numbers of PL lifts, and evaluation of free words
// under a generator -> PLMap assignment.
//
// For any lift F and any x, |F^N(x) - x - N tau(F)| < 1, so F^N(0)/N is within
// 1/N of tau(F). Independently, tau(F) lies in [min(F - id), max(F - id)];
// since that range is shorter than 1 it contains at most one integer, and if it
// contains the integer k then F(x) = x + k has a solution and tau(F) = k.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "sclforge/pl_map.hpp"
#include "sclforge/word.hpp"

namespace sclforge {

inline constexpr long kDefaultIterations = 1024;

struct TauInterval {
  Rational center;
  Rational radius;

  Rational lo() const { return center - radius; }
  Rational hi() const { return center + radius; }
  bool exact() const { return radius == 0; }
  bool contains(const Rational& v) const { return lo() <= v && v <= hi(); }

  bool intersects(const TauInterval& o) const { return lo() <= o.hi() && o.lo() <= hi(); }

  TauInterval operator+(const Rational& s) const { return {center + s, radius}; }
  TauInterval operator-() const { return {-center, radius}; }
  TauInterval operator*(const Rational& s) const {
    return {center * s, radius * (s < 0 ? Rational(-s) : s)};
  }

  static TauInterval from_bounds(const Rational& lo, const Rational& hi) {
    return {(lo + hi) / 2, (hi - lo) / 2};
  }
};

/// Intersection of two intervals known to contain the same value.
inline TauInterval intersect(const TauInterval& a, const TauInterval& b) {
  Rational lo = a.lo() > b.lo() ? a.lo() : b.lo();
  Rational hi = a.hi() < b.hi() ? a.hi() : b.hi();
  if (lo > hi) throw std::logic_error("intervals for the same quantity are disjoint");
  return TauInterval::from_bounds(lo, hi);
}

/// Exact orbit point F^N(0).
inline Rational orbit_point(const PLMap& f, long iterations, Rational x = Rational(0)) {
  for (long i = 0; i < iterations; ++i) x = f(x);
  return x;
}

/// Translation number of a PL lift as a certified interval.
inline TauInterval tau_estimate(const PLMap& f, long iterations = kDefaultIterations) {
  if (iterations < 1) throw std::invalid_argument("iteration count must be positive");
  if (f.is_translation()) return {f.breakpoints()[0].y, Rational(0)};
  DisplacementExtrema d = displacement_extrema(f);
  Integer k = ceil_of(d.min);
  if (Rational(k) <= d.max) return {Rational(k), Rational(0)};
  Rational xn = orbit_point(f, iterations);
  Rational n(iterations);
  TauInterval orbit{xn / n, Rational(1) / n};
  return intersect(orbit, TauInterval::from_bounds(d.min, d.max));
}

/// tau_R((F, r)) = tau(F) + r
inline TauInterval tau_real(const LiftedMapR& e, long iterations = kDefaultIterations) {
  return tau_estimate(e.map(), iterations) + e.r();
}

/// Generator -> lifted map. Inverses and block powers are cached, so repeated
/// symbolic evaluation of long words reuses work.
class MapBindings {
 public:
  MapBindings() = default;
  explicit MapBindings(std::map<Generator, PLMap> maps) {
    for (auto& [g, f] : maps) bind(g, std::move(f));
  }

  void bind(const Generator& g, PLMap f) {
    inverses_.erase(g);
    powers_.clear();
    maps_[g] = std::move(f);
  }

  bool contains(const Generator& g) const { return maps_.count(g) != 0; }

  const PLMap& map(const Generator& g) const {
    auto it = maps_.find(g);
    if (it == maps_.end()) throw std::invalid_argument("generator " + g.str() + " is not bound");
    return it->second;
  }

  const std::map<Generator, PLMap>& maps() const { return maps_; }

  const PLMap& inverse(const Generator& g) const {
    auto it = inverses_.find(g);
    if (it != inverses_.end()) return it->second;
    return inverses_.emplace(g, map(g).inverse()).first->second;
  }

  /// Symbolic g^k.
  const PLMap& power(const Generator& g, std::int64_t k, std::size_t cap = kDefaultBreakpointCap) const {
    auto key = std::make_pair(g, k);
    auto it = powers_.find(key);
    if (it != powers_.end()) return it->second;
    return powers_.emplace(key, pl_power(map(g), static_cast<long>(k), cap)).first->second;
  }

 private:
  std::map<Generator, PLMap> maps_;
  mutable std::map<Generator, PLMap> inverses_;
  mutable std::map<std::pair<Generator, std::int64_t>, PLMap> powers_;
};

/// Value of the word's lifted image at x, letter by letter (last letter acts first).
inline Rational word_eval(const MapBindings& maps, const Word& w, Rational x) {
  const auto& blocks = w.blocks();
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    const PLMap& f = it->exp > 0 ? maps.map(it->gen) : maps.inverse(it->gen);
    const std::int64_t times = it->exp > 0 ? it->exp : -it->exp;
    for (std::int64_t i = 0; i < times; ++i) x = f(x);
  }
  return x;
}

/// Symbolic composition of the word's lifted image.
inline PLMap compose_word(const MapBindings& maps, const Word& w, std::size_t cap = kDefaultBreakpointCap) {
  PLMap acc;
  for (const auto& b : w.blocks()) {
    if (!maps.contains(b.gen)) throw std::invalid_argument("generator " + b.gen.str() + " is not bound");
    acc = pl_compose(acc, maps.power(b.gen, b.exp, cap), cap);
  }
  return acc;
}

/// tau of a word's lifted image by exact pointwise iteration (no symbolic
/// composition), with the integer-displacement shortcut unavailable.
inline TauInterval tau_of_word_pointwise(const MapBindings& maps, const Word& w,
                                         long iterations = kDefaultIterations) {
  Rational x(0);
  for (long i = 0; i < iterations; ++i) x = word_eval(maps, w, x);
  Rational n(iterations);
  return {x / n, Rational(1) / n};
}

/// tau of a word's lifted image: symbolic when the composition fits under the
/// cap, pointwise otherwise.
inline TauInterval tau_of_word(const MapBindings& maps, const Word& w, long iterations = kDefaultIterations,
                               std::size_t cap = kDefaultBreakpointCap) {
  try {
    return tau_estimate(compose_word(maps, w, cap), iterations);
  } catch (const BreakpointOverflow&) {
    return tau_of_word_pointwise(maps, w, iterations);
  }
}

}  // namespace sclforge
