#pragma once

// Floating-point circle actions of Fuchsian surface groups.
//
// Isometries of the Poincare disk are SU(1,1) matrices [[alpha, beta],
// [conj(beta), conj(alpha)]], acting on the boundary angle. The lift used for
// a matrix is t -> t + arg((alpha + beta e^{-2 pi i t})^2) / 2pi with the
// branch continuous from arg(alpha); -M gives the lift shifted by one.
// Nothing here is exact; these numbers never enter a certificate.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "sclforge/nilpotent.hpp"
#include "sclforge/families.hpp"
#include "sclforge/qm.hpp"
#include "sclforge/word.hpp"

namespace sclforge {

using Complex = std::complex<double>;

struct MobiusMap {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};

  double det() const { return std::norm(alpha) - std::norm(beta); }

  MobiusMap operator*(const MobiusMap& o) const {
    // [[a, b], [b*, a*]] [[c, d], [d*, c*]]
    return {alpha * o.alpha + beta * std::conj(o.beta), alpha * o.beta + beta * std::conj(o.alpha)};
  }

  MobiusMap inverse() const { return {std::conj(alpha), -beta}; }

  double trace() const { return 2.0 * alpha.real(); }

  Complex apply(const Complex& z) const { return (alpha * z + beta) / (std::conj(beta) * z + std::conj(alpha)); }

  /// Lifted boundary action on t = angle / 2pi.
  double lift(double t) const {
    const double theta = 2.0 * std::numbers::pi * t;
    const Complex u = beta / alpha * std::polar(1.0, -theta);
    const double disp = 2.0 * (std::arg(alpha) + std::arg(1.0 + u));
    return t + disp / (2.0 * std::numbers::pi);
  }

  static MobiusMap rotation(double angle) { return {std::polar(1.0, angle / 2.0), {0.0, 0.0}}; }

  /// Hyperbolic translation by distance d along the real diameter.
  static MobiusMap translation(double d) { return {{std::cosh(d / 2.0), 0.0}, {std::sinh(d / 2.0), 0.0}}; }
};

/// Largest entry-wise distance to +I or -I.
inline double distance_to_pm_identity(const MobiusMap& m) {
  auto dist = [&](double s) { return std::max(std::abs(m.alpha - Complex(s, 0.0)), std::abs(m.beta)); };
  return std::min(dist(1.0), dist(-1.0));
}

class FuchsianError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FuchsianRep {
  unsigned genus = 0;
  std::map<Generator, MobiusMap> maps;
  double relator_residual = 0.0;

  const MobiusMap& map(const Generator& g) const {
    auto it = maps.find(g);
    if (it == maps.end()) throw std::invalid_argument("generator " + g.str() + " is not bound");
    return it->second;
  }

  MobiusMap word_matrix(const Word& w) const {
    MobiusMap acc;
    for (const auto& b : w.blocks()) {
      const MobiusMap& m = map(b.gen);
      const MobiusMap step = b.exp > 0 ? m : m.inverse();
      const std::int64_t times = b.exp > 0 ? b.exp : -b.exp;
      for (std::int64_t i = 0; i < times; ++i) acc = acc * step;
    }
    return acc;
  }

  /// Lifted action of the word at t (last letter acts first).
  double word_lift(const Word& w, double t) const {
    const auto& blocks = w.blocks();
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
      const MobiusMap& m = map(it->gen);
      const MobiusMap step = it->exp > 0 ? m : m.inverse();
      const std::int64_t times = it->exp > 0 ? it->exp : -it->exp;
      for (std::int64_t i = 0; i < times; ++i) t = step.lift(t);
    }
    return t;
  }
};

inline constexpr double kRelatorTolerance = 1e-9;

/// Side pairings of the regular 4l-gon with interior angles 2pi/(4l).
inline FuchsianRep fuchsian_rep(unsigned genus) {
  if (genus < 2) throw std::invalid_argument("genus must be at least 2, got " + std::to_string(genus));
  const double pi = std::numbers::pi;
  const unsigned sides = 4 * genus;
  const double interior = 2.0 * pi / sides;
  const double d = std::acosh(std::cos(interior / 2.0) / std::sin(pi / sides));
  auto pairing = [&](unsigned from, unsigned to) {
    const double phi_from = 2.0 * pi * from / sides, phi_to = 2.0 * pi * to / sides;
    return MobiusMap::rotation(phi_to) * MobiusMap::translation(2.0 * d) * MobiusMap::rotation(pi) *
           MobiusMap::rotation(-phi_from);
  };
  const Word relator = surface_relator(genus);
  // Orientation conventions differ between references; take the first
  // labeling whose relator closes up.
  double best = 1e300;
  for (int variant = 0; variant < 8; ++variant) {
    FuchsianRep rep;
    rep.genus = genus;
    for (unsigned k = 0; k < genus; ++k) {
      const unsigned block = (variant & 4) ? genus - 1 - k : k;
      MobiusMap a = pairing(4 * block + 2, 4 * block), b = pairing(4 * block + 3, 4 * block + 1);
      if (variant & 1) a = a.inverse();
      if (variant & 2) b = b.inverse();
      rep.maps[Generator("a", k + 1)] = a;
      rep.maps[Generator("b", k + 1)] = b;
    }
    rep.relator_residual = distance_to_pm_identity(rep.word_matrix(relator));
    best = std::min(best, rep.relator_residual);
    if (rep.relator_residual < kRelatorTolerance) return rep;
  }
  throw FuchsianError("no polygon labeling closes the surface relator; best residual " + std::to_string(best));
}

struct NumericTau {
  double estimate = 0.0;
  double uncertainty = 0.0;  // 1/iters plus accumulated rounding
};

inline NumericTau tau_numeric(const FuchsianRep& rep, const Word& w, long iterations = 4096) {
  if (iterations < 1) throw std::invalid_argument("iteration count must be positive");
  double t = 0.0;
  for (long i = 0; i < iterations; ++i) t = rep.word_lift(w, t);
  NumericTau out;
  out.estimate = t / static_cast<double>(iterations);
  const double steps = static_cast<double>(w.length()) * static_cast<double>(iterations);
  out.uncertainty = 1.0 / static_cast<double>(iterations) + steps * 1e-15 * (1.0 + std::abs(t)) / iterations;
  return out;
}

/// -tau of the lifted product of a mixed-commutator expression.
inline NumericTau mu_numeric(const FuchsianRep& rep, const CommExpr& e, long iterations = 4096) {
  e.validate();
  NumericTau t = tau_numeric(rep, e.product(), iterations);
  t.estimate = -t.estimate;
  return t;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw FitError("need at least two points for a linear fit");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw FitError("degenerate fit: all x values equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (syy == 0.0) {
    f.r2 = 1.0;
  } else {
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (f.slope * x[i] + f.intercept);
      ss_res += r * r;
    }
    f.r2 = 1.0 - ss_res / syy;
  }
  return f;
}

struct NumericRow {
  std::int64_t n = 0;
  NumericTau mu;
  double bound = 0.0;
  double bavard_lower = 0.0;
  double cl_upper = 0.0;
  double ratio = 0.0;
};

struct NumericReport {
  std::vector<NumericRow> rows;
  LinearFit fit;
};

/// mu(x_n) for the Fuchsian action, with an affine fit in n.
inline NumericReport mu_numeric_report(unsigned genus, std::int64_t n_lo, std::int64_t n_hi, long iterations = 4096) {
  const FuchsianRep rep = fuchsian_rep(genus);
  const RelatorLattice lattice = RelatorLattice::surface(genus);
  const double l = genus;
  NumericReport out;
  std::vector<double> xs, ys;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    MixedExpansion ex = mixed_expansion(word_x(genus, n), lattice);
    NumericRow row;
    row.n = n;
    row.mu = mu_numeric(rep, ex.expr, iterations);
    row.bound = l * (static_cast<double>(n) * (l - 1) - 1);
    row.bavard_lower = std::max(0.0, (std::abs(row.mu.estimate) - row.mu.uncertainty) / 2.0);
    row.cl_upper = l;
    row.ratio = row.bavard_lower / row.cl_upper;
    xs.push_back(static_cast<double>(n));
    ys.push_back(row.mu.estimate);
    out.rows.push_back(row);
  }
  out.fit = least_squares(xs, ys);
  return out;
}

}  // namespace sclforge
