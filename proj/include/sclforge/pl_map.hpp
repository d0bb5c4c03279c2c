#pragma once

// Exact rational piecewise-linear lifts of circle homeomorphisms.
//
// A PLMap is an increasing homeomorphism F of the real line with
// F(x + 1) = F(x) + 1, stored by its breakpoints (x_i, F(x_i)) with
// 0 <= x_0 < ... < x_{m-1} < 1. Between breakpoints F is affine; the last
// segment wraps to (x_0 + 1, F(x_0) + 1). Maps are kept in canonical form:
// no breakpoint has equal slopes on both sides, and a translation T_c is the
// single breakpoint (0, c). Canonical form makes structural equality agree
// with equality of maps.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sclforge/rational.hpp"

namespace sclforge {

struct Breakpoint {
  Rational x;
  Rational y;
  bool operator==(const Breakpoint& o) const { return x == o.x && y == o.y; }
};

class BreakpointOverflow : public std::runtime_error {
 public:
  BreakpointOverflow(std::size_t needed, std::size_t cap)
      : std::runtime_error("symbolic composition needs " + std::to_string(needed) +
                           " breakpoints, above the breakpoint cap of " + std::to_string(cap)),
        needed_(needed),
        cap_(cap) {}
  std::size_t needed() const { return needed_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t needed_, cap_;
};

inline constexpr std::size_t kDefaultBreakpointCap = 100000;

class PLMap {
 public:
  /// Identity.
  PLMap() : bps_{{Rational(0), Rational(0)}} {}

  /// Validates and canonicalizes. Throws std::invalid_argument on bad data.
  explicit PLMap(std::vector<Breakpoint> bps) : bps_(std::move(bps)) {
    validate();
    canonicalize();
  }

  static PLMap translation(const Rational& c) {
    PLMap f;
    f.bps_[0].y = c;
    return f;
  }

  static PLMap identity() { return PLMap(); }

  const std::vector<Breakpoint>& breakpoints() const { return bps_; }
  std::size_t size() const { return bps_.size(); }

  bool is_translation() const { return bps_.size() == 1 && bps_[0].x == 0; }

  /// Exact value F(x).
  Rational operator()(const Rational& x) const {
    Integer k = floor_of(x);
    Rational t = x - Rational(k);
    return eval_unit(t) + Rational(k);
  }

  Rational eval(const Rational& x) const { return (*this)(x); }

  /// The unique x with F(x) = v.
  Rational preimage(const Rational& v) const {
    const Rational& y0 = bps_[0].y;
    Integer k = floor_of(v - y0);
    Rational t = v - Rational(k);  // in [y0, y0 + 1)
    auto it = std::upper_bound(bps_.begin(), bps_.end(), t,
                               [](const Rational& u, const Breakpoint& b) { return u < b.y; });
    std::size_t i = static_cast<std::size_t>(it - bps_.begin()) - 1;
    const Breakpoint& p = bps_[i];
    Rational x;
    if (t == p.y) {
      x = p.x;
    } else if (i + 1 < bps_.size()) {
      const Breakpoint& q = bps_[i + 1];
      x = p.x + (q.x - p.x) * (t - p.y) / (q.y - p.y);
    } else {
      x = p.x + (bps_[0].x + 1 - p.x) * (t - p.y) / (bps_[0].y + 1 - p.y);
    }
    return x + Rational(k);
  }

  /// Slope of the affine piece containing [x, x + eps) for small eps.
  Rational right_slope(const Rational& x) const {
    Rational t = frac_of(x);
    std::size_t i = segment_index(t);
    return slope(i);
  }

  /// Slope of the affine piece containing (x - eps, x].
  Rational left_slope(const Rational& x) const {
    Rational t = frac_of(x);
    auto it = std::lower_bound(bps_.begin(), bps_.end(), t,
                               [](const Breakpoint& b, const Rational& v) { return b.x < v; });
    if (it != bps_.end() && it->x == t) {
      std::size_t i = static_cast<std::size_t>(it - bps_.begin());
      return slope(i == 0 ? bps_.size() - 1 : i - 1);
    }
    return right_slope(x);
  }

  /// Slope on segment i, from breakpoint i to breakpoint i+1 (cyclically).
  Rational slope(std::size_t i) const {
    const std::size_t m = bps_.size();
    const Breakpoint& p = bps_[i];
    Rational x1, y1;
    if (i + 1 < m) {
      x1 = bps_[i + 1].x;
      y1 = bps_[i + 1].y;
    } else {
      x1 = bps_[0].x + 1;
      y1 = bps_[0].y + 1;
    }
    return (y1 - p.y) / (x1 - p.x);
  }

  PLMap inverse() const {
    std::vector<Breakpoint> out;
    out.reserve(bps_.size());
    for (const auto& b : bps_) {
      Integer k = floor_of(b.y);
      out.push_back({b.y - Rational(k), b.x - Rational(k)});
    }
    std::sort(out.begin(), out.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.x < b.x; });
    return PLMap(std::move(out), Trusted{});
  }

  /// T_k o F (equivalently F o T_k) for a rational shift k; for integer k this
  /// is another lift of the same circle map.
  PLMap shifted(const Rational& k) const {
    PLMap g = *this;
    for (auto& b : g.bps_) b.y += k;
    return g;
  }

  bool operator==(const PLMap& o) const { return bps_ == o.bps_; }

 private:
  struct Trusted {};
  PLMap(std::vector<Breakpoint> bps, Trusted) : bps_(std::move(bps)) { canonicalize(); }

  friend PLMap pl_compose(const PLMap& f, const PLMap& g, std::size_t cap);

  void validate() const {
    if (bps_.empty()) throw std::invalid_argument("PL map needs at least one breakpoint");
    for (std::size_t i = 0; i < bps_.size(); ++i) {
      const auto& b = bps_[i];
      if (b.x < 0 || b.x >= 1)
        throw std::invalid_argument("breakpoint x-coordinate " + to_string(b.x) + " outside [0,1)");
      if (i > 0) {
        if (!(bps_[i - 1].x < b.x))
          throw std::invalid_argument("breakpoint x-coordinates must be strictly increasing");
        if (!(bps_[i - 1].y < b.y))
          throw std::invalid_argument("PL map is not increasing between breakpoints " +
                                      std::to_string(i - 1) + " and " + std::to_string(i));
      }
    }
    if (!(bps_.back().y < bps_.front().y + 1))
      throw std::invalid_argument("PL map is not increasing across the wrap segment");
  }

  void canonicalize() {
    const std::size_t m = bps_.size();
    if (m == 1) {
      // One breakpoint: slope 1 everywhere, a translation.
      Rational c = bps_[0].y - bps_[0].x;
      bps_ = {{Rational(0), c}};
      return;
    }
    std::vector<Rational> s(m);
    for (std::size_t i = 0; i < m; ++i) s[i] = slope(i);
    std::vector<Breakpoint> kept;
    for (std::size_t i = 0; i < m; ++i) {
      const Rational& before = s[i == 0 ? m - 1 : i - 1];
      if (before != s[i]) kept.push_back(bps_[i]);
    }
    if (kept.empty()) {
      Rational c = bps_[0].y - bps_[0].x;
      bps_ = {{Rational(0), c}};
      return;
    }
    bps_ = std::move(kept);
  }

  // Index of the segment containing t in [0,1); m-1 also covers t < x_0.
  std::size_t segment_index(const Rational& t) const {
    auto it = std::upper_bound(bps_.begin(), bps_.end(), t,
                               [](const Rational& v, const Breakpoint& b) { return v < b.x; });
    if (it == bps_.begin()) return bps_.size() - 1;
    return static_cast<std::size_t>(it - bps_.begin()) - 1;
  }

  Rational eval_unit(const Rational& t) const {
    auto it = std::upper_bound(bps_.begin(), bps_.end(), t,
                               [](const Rational& v, const Breakpoint& b) { return v < b.x; });
    const std::size_t m = bps_.size();
    if (it == bps_.begin()) {
      // Wrap segment from (x_{m-1} - 1, y_{m-1} - 1) to (x_0, y_0).
      const Breakpoint& last = bps_[m - 1];
      const Breakpoint& first = bps_[0];
      Rational x0 = last.x - 1, y0 = last.y - 1;
      return y0 + (first.y - y0) * (t - x0) / (first.x - x0);
    }
    std::size_t i = static_cast<std::size_t>(it - bps_.begin()) - 1;
    const Breakpoint& p = bps_[i];
    if (t == p.x) return p.y;
    if (i + 1 < m) {
      const Breakpoint& q = bps_[i + 1];
      return p.y + (q.y - p.y) * (t - p.x) / (q.x - p.x);
    }
    const Breakpoint& q = bps_[0];
    return p.y + (q.y + 1 - p.y) * (t - p.x) / (q.x + 1 - p.x);
  }

  std::vector<Breakpoint> bps_;
};

inline Rational pl_eval(const PLMap& f, const Rational& x) { return f(x); }

inline PLMap pl_invert(const PLMap& f) { return f.inverse(); }

/// f o g. Breakpoints of the result lie in g's breakpoints union the
/// preimages under g of f's breakpoints.
inline PLMap pl_compose(const PLMap& f, const PLMap& g, std::size_t cap = kDefaultBreakpointCap) {
  if (f.is_translation()) return g.shifted(f.breakpoints()[0].y);
  if (g.is_translation()) {
    // f(x + c): breakpoints of f moved left by c.
    const Rational& c = g.breakpoints()[0].y;
    std::vector<Breakpoint> out;
    out.reserve(f.size());
    for (const auto& b : f.breakpoints()) {
      Rational x = b.x - c;
      Integer k = floor_of(x);
      out.push_back({x - Rational(k), b.y - Rational(k)});
    }
    std::sort(out.begin(), out.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.x < b.x; });
    return PLMap(std::move(out), PLMap::Trusted{});
  }
  const std::size_t needed = f.size() + g.size();
  if (needed > cap) throw BreakpointOverflow(needed, cap);
  // At g's breakpoints the value is f(y); at preimages of f's breakpoints it is
  // read off directly, since g(x) = b.x + k there.
  const auto& gb = g.breakpoints();
  const auto& fb = f.breakpoints();
  std::vector<Breakpoint> from_g;
  from_g.reserve(gb.size());
  for (const auto& b : gb) from_g.push_back({b.x, f(b.y)});
  std::vector<Breakpoint> from_f;
  from_f.reserve(fb.size());
  for (const auto& b : fb) {
    Rational x = g.preimage(b.x);
    Integer k = floor_of(x);
    from_f.push_back({x - Rational(k), b.y - Rational(k)});
  }
  // from_f is a rotation of a sorted list.
  auto pivot = std::min_element(from_f.begin(), from_f.end(),
                                [](const Breakpoint& a, const Breakpoint& b) { return a.x < b.x; });
  std::rotate(from_f.begin(), pivot, from_f.end());
  std::vector<Breakpoint> out;
  out.reserve(needed);
  std::size_t i = 0, j = 0;
  while (i < from_g.size() || j < from_f.size()) {
    if (j == from_f.size() || (i < from_g.size() && from_g[i].x < from_f[j].x)) {
      out.push_back(std::move(from_g[i++]));
    } else if (i == from_g.size() || from_f[j].x < from_g[i].x) {
      out.push_back(std::move(from_f[j++]));
    } else {
      out.push_back(std::move(from_g[i++]));
      ++j;
    }
  }
  return PLMap(std::move(out), PLMap::Trusted{});
}

inline PLMap operator*(const PLMap& f, const PLMap& g) { return pl_compose(f, g); }

/// f^k by repeated squaring.
inline PLMap pl_power(const PLMap& f, long k, std::size_t cap = kDefaultBreakpointCap) {
  if (k < 0) return pl_power(f.inverse(), -k, cap);
  PLMap result;
  PLMap base = f;
  while (k > 0) {
    if (k & 1) result = pl_compose(result, base, cap);
    k >>= 1;
    if (k > 0) base = pl_compose(base, base, cap);
  }
  return result;
}

/// [f, g] = f g f^-1 g^-1
inline PLMap pl_commutator(const PLMap& f, const PLMap& g, std::size_t cap = kDefaultBreakpointCap) {
  return pl_compose(pl_compose(f, g, cap), pl_compose(f.inverse(), g.inverse(), cap), cap);
}

/// Exact extensional equality, decided on the union of breakpoint sets.
inline bool pl_equal(const PLMap& f, const PLMap& g) {
  for (const auto& b : f.breakpoints())
    if (g(b.x) != b.y) return false;
  for (const auto& b : g.breakpoints())
    if (f(b.x) != b.y) return false;
  return true;
}

/// Equality of the underlying circle maps: f = T_k o g for an integer k.
inline bool circle_equal(const PLMap& f, const PLMap& g) {
  Rational k = f(Rational(0)) - g(Rational(0));
  if (!is_integer(k)) return false;
  return pl_equal(f, g.shifted(k));
}

struct DisplacementExtrema {
  Rational min;
  Rational max;
};

/// min and max of F(x) - x; attained at breakpoints.
inline DisplacementExtrema displacement_extrema(const PLMap& f) {
  DisplacementExtrema d;
  bool first = true;
  for (const auto& b : f.breakpoints()) {
    Rational v = b.y - b.x;
    if (first || v < d.min) d.min = v;
    if (first || v > d.max) d.max = v;
    first = false;
  }
  return d;
}

/// Fixed points of the circle map lifted by F - k, i.e. solutions of
/// F(x) = x + k in [0,1), for an integer k. Returns all isolated solutions;
/// throws if F - k is the identity on an interval.
inline std::vector<Rational> fixed_points(const PLMap& f, const Integer& k = Integer(0)) {
  std::vector<Rational> out;
  const auto& bps = f.breakpoints();
  const std::size_t m = bps.size();
  const Rational kq(k);
  for (std::size_t i = 0; i < m; ++i) {
    Rational x0 = bps[i].x, d0 = bps[i].y - bps[i].x - kq;
    Rational x1, d1;
    if (i + 1 < m) {
      x1 = bps[i + 1].x;
      d1 = bps[i + 1].y - bps[i + 1].x - kq;
    } else {
      x1 = bps[0].x + 1;
      d1 = bps[0].y - bps[0].x - kq;
    }
    if (d0 == 0 && d1 == 0) throw std::domain_error("map has an interval of fixed points");
    if (d0 == 0) {
      out.push_back(x0);
      continue;
    }
    if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) {
      Rational x = x0 + (x1 - x0) * d0 / (d0 - d1);
      out.push_back(frac_of(x));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Element (F, r) of the real central extension, with (F o T_1, r - 1) ~ (F, r).
/// Canonical representative: F(0) in [0, 1).
class LiftedMapR {
 public:
  LiftedMapR() = default;
  LiftedMapR(PLMap f, Rational r) : map_(std::move(f)), r_(std::move(r)) { normalize(); }
  explicit LiftedMapR(PLMap f) : LiftedMapR(std::move(f), Rational(0)) {}

  const PLMap& map() const { return map_; }
  const Rational& r() const { return r_; }

  LiftedMapR operator*(const LiftedMapR& o) const {
    return LiftedMapR(pl_compose(map_, o.map_), r_ + o.r_);
  }

  LiftedMapR inverse() const { return LiftedMapR(map_.inverse(), -r_); }

  bool operator==(const LiftedMapR& o) const { return map_ == o.map_ && r_ == o.r_; }

 private:
  void normalize() {
    Integer k = floor_of(map_(Rational(0)));
    if (k != 0) {
      map_ = map_.shifted(Rational(-k));
      r_ += Rational(k);
    }
  }

  PLMap map_;
  Rational r_{0};
};

}  // namespace sclforge
