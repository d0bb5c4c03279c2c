// sclforge: batch front end for the word identities, circle representations,
// quasimorphism reports and non-equivalence certificates.
//
// Exit codes: 0 success, 1 failed check, 2 usage or I/O error, 3 inconclusive.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sclforge/ehn.hpp"
#include "sclforge/fuchsian.hpp"
#include "sclforge/json_io.hpp"
#include "sclforge/nilpotent.hpp"
#include "sclforge/families.hpp"
#include "sclforge/parse.hpp"
#include "sclforge/qm.hpp"

namespace {

using namespace sclforge;

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kInconclusive = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Range {
  std::int64_t lo = 0, hi = 0;
};

Range parse_range(const std::string& text, const char* what) {
  Range r;
  try {
    auto dots = text.find("..");
    std::size_t used = 0;
    if (dots == std::string::npos) {
      r.lo = r.hi = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } else {
      std::string a = text.substr(0, dots), b = text.substr(dots + 2);
      r.lo = std::stoll(a, &used);
      if (used != a.size()) throw std::invalid_argument(text);
      r.hi = std::stoll(b, &used);
      if (used != b.size()) throw std::invalid_argument(text);
    }
  } catch (const std::exception&) {
    throw UsageError(std::string("malformed ") + what + " '" + text + "', expected N or A..B");
  }
  if (r.lo > r.hi) throw UsageError(std::string("empty ") + what + " range '" + text + "'");
  return r;
}

Range ell_range(const std::string& text) {
  Range r = parse_range(text, "--ell");
  if (r.lo < 2) throw UsageError("--ell must be at least 2");
  return r;
}

unsigned single_ell(const std::string& text) {
  Range r = ell_range(text);
  if (r.lo != r.hi) throw UsageError("this command takes a single --ell value");
  return static_cast<unsigned>(r.lo);
}

Range n_range(const std::string& text) {
  Range r = parse_range(text, "--n");
  if (r.lo < 1) throw UsageError("--n must be at least 1");
  return r;
}

struct Config {
  std::string ell = "2..10";
  std::string n = "1";
  std::int64_t n_max = 50;
  long iters = kDefaultIterations;
  std::string group = "onerelator";
  std::string rep_path;
  std::string out;
  std::size_t budget = kDefaultBreakpointCap;
  std::string word;
  double C = 5.0;
};

void emit(const Config& cfg, const std::string& text) {
  if (cfg.out.empty())
    std::cout << text;
  else
    write_text_file(cfg.out, text);
}

Representation load_or_build(const Config& cfg, unsigned ell) {
  if (!cfg.rep_path.empty()) {
    Representation rep = representation_from_json(read_json_file(cfg.rep_path));
    if (rep.ell != ell) throw UsageError("representation file is for ell = " + std::to_string(rep.ell));
    return rep;
  }
  ConjugatorOptions opt;
  opt.breakpoint_cap = cfg.budget;
  return build_rep_onerelator(ell, opt);
}

std::uint64_t seed_from_env() {
  if (const char* s = std::getenv("SCLFORGE_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240601;
}

Word random_word(std::mt19937_64& rng, const Alphabet& alpha, int max_blocks) {
  std::uniform_int_distribution<int> blocks(1, max_blocks), gen(0, static_cast<int>(alpha.rank()) - 1), ex(-3, 3);
  Word w;
  int k = blocks(rng);
  for (int i = 0; i < k; ++i) {
    int e = ex(rng);
    w.push(alpha[static_cast<std::size_t>(gen(rng))], e == 0 ? 1 : e);
  }
  return w;
}

int cmd_verify(const Config& cfg) {
  Range ells = ell_range(cfg.ell);
  Json checks = Json::array();
  std::optional<std::string> first_failure;
  auto record = [&](const std::string& name, bool ok) {
    checks.push_back({{"check", name}, {"pass", ok}});
    if (!ok && !first_failure) first_failure = name;
  };
  std::mt19937_64 rng(seed_from_env());
  const Alphabet ab = Alphabet::two_generator();
  for (int i = 0; i < 20; ++i) {
    Word g = random_word(rng, ab, 4), h = random_word(rng, ab, 4);
    std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 10);
    record("power_expansion[" + g.str() + "; " + h.str() + "; " + std::to_string(n) + "]",
           verify_power_expansion(g, h, n).holds);
  }
  for (std::int64_t l = ells.lo; l <= ells.hi; ++l) {
    const unsigned ell = static_cast<unsigned>(l);
    const std::string tag = "[ell=" + std::to_string(l) + "]";
    record("relation" + tag, verify_relation(ell).holds);
    record("gamma3_yz_onerelator" + tag,
           gamma3_membership(commutator(word_y(), word_z(ell)), RelatorLattice::one_relator(ell)));
    bool surface_ok = true;
    for (std::int64_t n = 1; n <= 3; ++n) surface_ok &= gamma3_membership(word_x(ell, n), RelatorLattice::surface(ell));
    record("gamma3_xn_surface" + tag, surface_ok);
    bool ehn_ok = true;
    try {
      ConjugatorOptions opt;
      opt.breakpoint_cap = cfg.budget;
      Representation rep = build_rep_onerelator(ell, opt);
      const PLMap& f = rep.maps.map(Generator("a"));
      const PLMap& g = rep.maps.map(Generator("b"));
      ehn_ok = pl_equal(pl_commutator(f, g), PLMap::translation(rep.c));
    } catch (const ConstructionError&) {
      ehn_ok = false;
    }
    record("ehn_exact" + tag, ehn_ok);
  }
  Json out = {{"pass", !first_failure.has_value()}, {"checks", checks}};
  if (!cfg.out.empty()) write_text_file(cfg.out, out.dump(2) + "\n");
  if (first_failure) {
    std::cerr << "verify: FAILED " << *first_failure << "\n";
    return kFailed;
  }
  std::cout << "verify: " << checks.size() << " checks passed\n";
  return kOk;
}

int cmd_build_rep(const Config& cfg) {
  const unsigned ell = single_ell(cfg.ell);
  if (cfg.group == "fuchsian") {
    emit(cfg, to_json(fuchsian_rep(ell)).dump(2) + "\n");
    return kOk;
  }
  if (cfg.group != "onerelator") throw UsageError("build-rep supports --group onerelator or fuchsian");
  emit(cfg, to_json(load_or_build(cfg, ell)).dump(2) + "\n");
  return kOk;
}

RelatorLattice lattice_for(const std::string& group, unsigned ell) {
  if (group == "onerelator") return RelatorLattice::one_relator(ell);
  if (group == "surface") return RelatorLattice::surface(ell);
  if (group == "free") return RelatorLattice::free(Alphabet::two_generator());
  throw UsageError("unknown --group '" + group + "'");
}

int cmd_mu(const Config& cfg) {
  const unsigned ell = single_ell(cfg.ell);
  Range ns = n_range(cfg.n);
  if (cfg.group != "onerelator" && cfg.group != "surface")
    throw UsageError("mu supports --group onerelator or surface");
  const RelatorLattice lattice = lattice_for(cfg.group, ell);
  Representation rep = load_or_build(cfg, ell);
  const MapBindings& maps = cfg.group == "surface" ? rep.pulled_back_to_surface().maps : rep.maps;
  Json rows = Json::array();
  auto eval = [&](const Word& w, const std::string& label) {
    MixedExpansion ex = mixed_expansion(w, lattice);
    MuValue v = mu_eval(maps, ex.expr, cfg.iters, cfg.budget);
    rows.push_back({{"word", label},
                    {"pairs", ex.expr.size()},
                    {"relator_power", to_string(ex.relator_power)},
                    {"mu", to_json(v.value)}});
  };
  if (!cfg.word.empty()) {
    eval(parse_word(cfg.word, lattice.alphabet()), cfg.word);
  } else {
    for (std::int64_t n = ns.lo; n <= ns.hi; ++n) {
      Word w = cfg.group == "surface" ? word_x(ell, n) : commutator(word_y().pow(n), word_z(ell));
      eval(w, cfg.group == "surface" ? "x_" + std::to_string(n) : "[y^" + std::to_string(n) + ", z]");
    }
  }
  Json out = {{"group", lattice.name()}, {"iterations", cfg.iters}, {"values", rows}};
  emit(cfg, out.dump(2) + "\n");
  return kOk;
}

int cmd_report(const Config& cfg) {
  const unsigned ell = single_ell(cfg.ell);
  Range ns = n_range(cfg.n);
  std::ostringstream csv;
  if (cfg.group == "fuchsian") {
    NumericReport r = mu_numeric_report(ell, ns.lo, ns.hi, cfg.iters);
    write_csv(csv, r.rows);
    emit(cfg, csv.str());
    const std::string fit = to_json(r.fit).dump() + "\n";
    if (cfg.out.empty())
      std::cerr << fit;
    else
      write_text_file(cfg.out + ".fit.json", fit);
    return kOk;
  }
  Representation rep = load_or_build(cfg, ell);
  if (cfg.group == "onerelator")
    write_csv(csv, sequence_report(rep, ns.lo, ns.hi, cfg.iters));
  else if (cfg.group == "surface")
    write_csv(csv, surface_pullback_report(rep, ns.lo, ns.hi, cfg.iters));
  else
    throw UsageError("unknown --group '" + cfg.group + "'");
  emit(cfg, csv.str());
  return kOk;
}

int cmd_certify(const Config& cfg) {
  const unsigned ell = single_ell(cfg.ell);
  if (cfg.n_max < 1) throw UsageError("--n-max must be at least 1");
  Representation rep = load_or_build(cfg, ell);
  Certificate c = overflow_certify(rep, RelatorLattice::one_relator(ell), {word_y()}, {word_z(ell)}, cfg.iters);
  if (!c.certified) {
    Rational C;
    C = cfg.C;
    c = growth_certify(rep, cfg.n_max, C, cfg.iters);
  }
  emit(cfg, to_json(c).dump(2) + "\n");
  if (!cfg.out.empty()) std::cout << "certify: " << c.verdict() << " (" << c.method << ")\n";
  return c.certified ? kOk : kInconclusive;
}

int cmd_gamma3(const Config& cfg) {
  if (cfg.word.empty()) throw UsageError("gamma3 needs --word");
  const unsigned ell = cfg.group == "free" ? 2 : single_ell(cfg.ell);
  const RelatorLattice lattice = lattice_for(cfg.group, ell);
  Word w = parse_word(cfg.word, lattice.alphabet());
  Nil2Element x = magnus2(w, lattice.alphabet());
  auto s = lattice.multiplicity(x);
  Json out = {{"word", w.str()}, {"group", lattice.name()}, {"member", s.has_value()}};
  if (s) out["relator_power"] = to_string(*s);
  emit(cfg, out.dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact circle-action quasimorphisms and scl non-equivalence witnesses"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--ell", cfg.ell, "genus / one-relator exponent, N or A..B");
    sub->add_option("--iters", cfg.iters, "orbit iterations for certified translation numbers")->check(CLI::PositiveNumber);
    sub->add_option("--rep", cfg.rep_path, "representation JSON to load instead of building one");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--budget-breakpoints", cfg.budget, "breakpoint cap for symbolic composition")
        ->check(CLI::PositiveNumber);
  };

  auto* verify = app.add_subcommand("verify", "run the exact identity suite");
  add_common(verify);
  auto* build = app.add_subcommand("build-rep", "build and verify a representation");
  add_common(build);
  build->add_option("--group", cfg.group, "onerelator | fuchsian");
  auto* mu = app.add_subcommand("mu", "evaluate the quasimorphism on [y^n, z], x_n or a word");
  add_common(mu);
  mu->add_option("--n", cfg.n, "n or A..B");
  mu->add_option("--group", cfg.group, "onerelator | surface");
  mu->add_option("--word", cfg.word, "word in [G, G'] to evaluate");
  auto* report = app.add_subcommand("report", "write a bounds report as CSV");
  add_common(report);
  report->add_option("--n", cfg.n, "n or A..B");
  report->add_option("--group", cfg.group, "onerelator | surface | fuchsian");
  auto* certify = app.add_subcommand("certify", "emit a non-equivalence certificate");
  add_common(certify);
  certify->add_option("--n-max", cfg.n_max, "largest n tried by the growth test");
  certify->add_option("--C", cfg.C, "growth threshold multiple of the cl upper bound");
  auto* gamma3 = app.add_subcommand("gamma3", "decide membership in [G, G']");
  add_common(gamma3);
  gamma3->add_option("--word", cfg.word, "word, e.g. \"[a,[a,b]]\"")->required();
  gamma3->add_option("--group", cfg.group, "free | onerelator | surface");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*verify) return cmd_verify(cfg);
    if (*build) return cmd_build_rep(cfg);
    if (*mu) return cmd_mu(cfg);
    if (*report) return cmd_report(cfg);
    if (*certify) return cmd_certify(cfg);
    if (*gamma3) return cmd_gamma3(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ReportFailure& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kFailed;
  } catch (const ConstructionError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kFailed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
