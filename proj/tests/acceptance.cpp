// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "sclforge/ehn.hpp"
#include "sclforge/fuchsian.hpp"
#include "sclforge/json_io.hpp"
#include "sclforge/nilpotent.hpp"
#include "sclforge/families.hpp"
#include "sclforge/qm.hpp"
#include "sclforge/tau.hpp"
#include "test_support.hpp"

using namespace sclforge;
namespace st = sclforge::testing;

namespace {

constexpr long kIterations = 1024;
const Rational kMaxRadius(1, 1024);

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void run(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (secs > budget_s) o.fail("took " + std::to_string(secs) + " s, budget " + std::to_string(budget_s) + " s");
  if (!o.pass) ++failures;
  char line[64];
  std::snprintf(line, sizeof line, "%.2f s", secs);
  std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << " (" << line << ")";
  if (!o.detail.empty()) std::cout << ": " << o.detail;
  std::cout << std::endl;
}

Rational q(long p, long d = 1) { return make_rational(p, d); }

std::string at(long l, long n) { return "l=" + std::to_string(l) + " n=" + std::to_string(n); }

// Rows shared by criteria 3 and 4.
struct PathRow {
  long ell, n;
  TauInterval a, b;
};

std::vector<PathRow> compute_paths() {
  std::vector<PathRow> rows;
  for (unsigned l = 2; l <= 5; ++l) {
    Representation rep = build_rep_onerelator(l);
    for (long n = 1; n <= 50; ++n) {
      PathRow r{l, n, mu_eval(rep.maps, sequence_expression(l, n), kIterations).value,
                mu_closed_form(rep, n, kIterations).value};
      rows.push_back(r);
    }
  }
  return rows;
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t k;
  while ((k = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
  status = pclose(p);
  return out;
}

}  // namespace

int main() {
  std::cout << "seed " << st::seed() << "\n";

  run(1, "word identities", 5.0, [] {
    Outcome o;
    for (unsigned l = 2; l <= 50; ++l)
      if (!verify_relation(l).holds) o.fail("relation fails at l=" + std::to_string(l));
    const Alphabet ab = Alphabet::two_generator();
    for (int i = 0; i < 200; ++i) {
      Word g = st::random_word(ab, 12), h = st::random_word(ab, 12);
      std::int64_t n = st::uniform(1, 10);
      if (!verify_power_expansion(g, h, n).holds) o.fail("power expansion fails for " + g.str() + ", " + h.str());
    }
    o.detail = o.pass ? "l=2..50 and 200 random power expansions reduce exactly" : o.detail;
    return o;
  });

  run(2, "EHN construction", 10.0, [] {
    Outcome o;
    for (unsigned l = 2; l <= 10; ++l) {
      const Rational c = q(l - 1, l);
      CommutatorPair cp = translation_as_commutator(c);
      if (!pl_equal(pl_commutator(cp.f, cp.g), PLMap::translation(c))) o.fail("[f,g] != T_c at l=" + std::to_string(l));
      Representation rep = build_rep_onerelator(l);
      PLMap rel = compose_word(rep.maps, one_relator(l));
      if (!pl_equal(rel, PLMap::translation(q(l - 1)))) o.fail("relator lift != T_{l-1} at l=" + std::to_string(l));
      if (!circle_equal(rel, PLMap::identity())) o.fail("relator not trivial on the circle at l=" + std::to_string(l));
    }
    if (o.pass) o.detail = "exact for l=2..10";
    return o;
  });

  std::vector<PathRow> paths;
  std::string path_error;
  const auto tp0 = Clock::now();
  try {
    paths = compute_paths();
  } catch (const std::exception& e) {
    path_error = e.what();
  }
  const double path_secs = std::chrono::duration<double>(Clock::now() - tp0).count();

  run(3, "one-relator bound", 120.0, [&] {
    Outcome o;
    if (!path_error.empty()) o.fail(path_error);
    if (path_secs > 120.0) o.fail("path evaluation took " + std::to_string(path_secs) + " s");
    for (const auto& r : paths) {
      const Rational bound(r.n * (r.ell - 1) - 1);
      if (r.a.radius > kMaxRadius) o.fail("radius too large at " + at(r.ell, r.n));
      if (abs_of(r.a.center) + r.a.radius < bound) o.fail("|mu| below n(l-1)-1 at " + at(r.ell, r.n));
      if (abs_of(r.a.center + Rational(r.n * (r.ell - 1))) > 1 + 2 * r.a.radius)
        o.fail("mu outside the window around -n(l-1) at " + at(r.ell, r.n));
    }
    if (paths.size() != 200) o.fail("expected 200 rows, got " + std::to_string(paths.size()));
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.1f s", path_secs);
    if (o.pass) o.detail = std::string("200 rows, l=2..5, n=1..50, all radii <= 1/1024, evaluated in ") + secs;
    return o;
  });

  run(4, "two-path agreement", 1.0, [&] {
    Outcome o;
    if (!path_error.empty()) o.fail(path_error);
    for (const auto& r : paths)
      if (!r.a.intersects(r.b)) o.fail("paths disjoint at " + at(r.ell, r.n));
    if (o.pass) o.detail = "expression and closed-form intervals intersect on all 200 rows";
    return o;
  });

  run(5, "surface bound", 120.0, [] {
    Outcome o;
    std::ostringstream info;
    for (unsigned l = 2; l <= 3; ++l) {
      const long from = l == 2 ? 3 : 2;
      Representation rep = build_rep_onerelator(l);
      auto rows = surface_pullback_report(rep, 1, 20, kIterations);
      long first = -1;
      for (const auto& r : rows) {
        const Rational bound(static_cast<long>(l) * (r.n * (static_cast<long>(l) - 1) - 1));
        if (!r.membership) o.fail("x_n not in [G,G'] at " + at(l, r.n));
        if (abs_of(r.mu.center) < bound - 2 * Rational(static_cast<long>(l)) * r.mu.radius)
          o.fail("|value| below l(n(l-1)-1) at " + at(l, r.n));
        const bool exceeds = r.bavard_lower > r.cl_upper;
        if (exceeds && first < 0) first = r.n;
        if (r.n >= from && !exceeds)
          o.fail("Bavard lower " + to_string(r.bavard_lower) + " does not exceed " + to_string(r.cl_upper) + " at " +
                 at(l, r.n) + " (mu = " + to_string(r.mu.center) + ")");
      }
      info << "l=" << l << " exceeds from n=" << first << "; ";
    }
    o.detail = o.pass ? info.str() : o.detail + "; " + info.str();
    return o;
  });

  run(6, "certificates", 60.0, [] {
    Outcome o;
    const std::string cli = SCLFORGE_CLI_PATH;
    int s4 = 0, s2 = 0;
    Json c4 = Json::parse(capture("\"" + cli + "\" certify --ell 4", s4));
    Json c2 = Json::parse(capture("\"" + cli + "\" certify --ell 2", s2));
    if (s4 != 0 || c4["verdict"] != "certified" || c4["method"] != "overflow") o.fail("ell 4 not certified by overflow");
    TauInterval m4{parse_rational(c4["mu"]["center"].get<std::string>()),
                   parse_rational(c4["mu"]["radius"].get<std::string>())};
    if (!(abs_of(m4.center) - m4.radius > 1)) o.fail("ell 4 overflow margin not above 1");
    if (s2 != 0 || c2["verdict"] != "certified" || c2["method"] != "growth") o.fail("ell 2 not certified by growth");
    if (c2["n"].get<long>() > 12) o.fail("ell 2 needed n=" + std::to_string(c2["n"].get<long>()));
    if (!(parse_rational(c2["scl_lower"].get<std::string>()) > 10)) o.fail("ell 2 Bavard lower not above 10");
    if (o.pass)
      o.detail = "l=4 overflow mu=" + to_string(m4.center) + "; l=2 growth at n=" + std::to_string(c2["n"].get<long>()) +
                 " with lower " + c2["scl_lower"].get<std::string>();
    return o;
  });

  run(7, "property suites", 60.0, [] {
    Outcome o;
    const long N = 256;
    const Rational slack = Rational(3) / N;
    for (int i = 0; i < 500; ++i) {
      PLMap f = st::random_plmap(4, 32), g = st::random_plmap(4, 32);
      TauInterval tf = tau_estimate(f, N), tg = tau_estimate(g, N), tfg = tau_estimate(f * g, N);
      if (abs_of(tfg.center - tf.center - tg.center) > 1 + slack) o.fail("defect above 1 + 3/N");
    }
    for (int i = 0; i < 100; ++i) {
      PLMap f = st::random_plmap(4, 32), h = st::random_plmap(4, 32);
      TauInterval t = tau_estimate(f, N);
      if (!(t * Rational(3)).intersects(tau_estimate(pl_power(f, 3), N))) o.fail("homogeneity");
      if (!t.intersects(tau_estimate(h * f * h.inverse(), N))) o.fail("conjugation invariance");
    }
    Representation rep = build_rep_onerelator(3);
    MapBindings shifted = rep.maps;
    shifted.bind(Generator("a"), rep.maps.map(Generator("a")).shifted(q(1)));
    shifted.bind(Generator("b"), rep.maps.map(Generator("b")).shifted(q(-1)));
    for (long n = 1; n <= 5; ++n) {
      Word p = sequence_expression(3, n).product();
      if (!pl_equal(compose_word(shifted, p), compose_word(rep.maps, p))) o.fail("lift dependence at n=" + std::to_string(n));
    }
    const Alphabet s2 = Alphabet::surface(2);
    for (int i = 0; i < 10000; ++i) {
      Word c = commutator(st::random_word(s2, 12), st::random_word(s2, 12));
      Nil2Element x = magnus2(c, s2);
      if (!x.linear_part_vanishes()) o.fail("commutator with nonzero linear part");
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
          if (x.E(a, b) != -x.E(b, a)) o.fail("Magnus matrix not antisymmetric");
    }
    for (int i = 0; i < 2000; ++i) {
      Word u = st::random_word(s2, 20), v = st::random_word(s2, 20);
      if (!(nil2_mul(magnus2(u, s2), magnus2(v, s2)) == magnus2(u * v, s2))) o.fail("nil2_mul != magnus2");
    }
    if (o.pass) o.detail = "defect, homogeneity, conjugation, lift independence, Magnus checks hold";
    return o;
  });

  run(8, "Fuchsian shadow", 60.0, [] {
    Outcome o;
    NumericReport r = mu_numeric_report(2, 1, 20, 4096);
    if (!(r.fit.r2 > 0.99)) o.fail("R^2 = " + format_double(r.fit.r2));
    if (!(std::abs(r.fit.slope) > 0.1)) o.fail("slope = " + format_double(r.fit.slope));
    FuchsianRep rep = fuchsian_rep(2);
    const Alphabet s2 = Alphabet::surface(2);
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
      Word c = commutator(st::random_word(s2, 8), st::random_word(s2, 8));
      NumericTau t = tau_numeric(rep, c, 1024);
      worst = std::max(worst, std::abs(t.estimate));
      if (std::abs(t.estimate) > 1.0 + t.uncertainty) o.fail("single commutator |mu| = " + format_double(t.estimate));
    }
    if (o.pass)
      o.detail = "slope " + format_double(r.fit.slope) + ", R^2 " + format_double(r.fit.r2) + ", max single |mu| " +
                 format_double(worst);
    return o;
  });

  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criterion(s) failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
