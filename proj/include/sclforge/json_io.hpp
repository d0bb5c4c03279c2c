#pragma once

// JSON and CSV forms of maps, representations, certificates and reports.
// Rationals are lowest-terms "p/q" strings; floats use 12 significant digits.

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sclforge/ehn.hpp"
#include "sclforge/fuchsian.hpp"
#include "sclforge/parse.hpp"
#include "sclforge/qm.hpp"

namespace sclforge {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline Json to_json(const PLMap& f) {
  Json bps = Json::array();
  for (const auto& b : f.breakpoints()) bps.push_back({{"x", to_string(b.x)}, {"y", to_string(b.y)}});
  return {{"breakpoints", bps}};
}

inline Rational rational_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw std::invalid_argument(std::string("missing rational string field '") + key + "'");
  return parse_rational(j[key].get<std::string>());
}

inline PLMap plmap_from_json(const Json& j) {
  if (!j.contains("breakpoints") || !j["breakpoints"].is_array())
    throw std::invalid_argument("PL map JSON needs a 'breakpoints' array");
  std::vector<Breakpoint> bps;
  for (const auto& b : j["breakpoints"]) bps.push_back({rational_field(b, "x"), rational_field(b, "y")});
  return PLMap(std::move(bps));
}

inline Json to_json(const LiftedMapR& e) {
  Json j = to_json(e.map());
  j["r"] = to_string(e.r());
  return j;
}

inline LiftedMapR lifted_from_json(const Json& j) {
  Rational r = j.contains("r") ? rational_field(j, "r") : Rational(0);
  return LiftedMapR(plmap_from_json(j), r);
}

inline Json to_json(const Representation& rep) {
  Json gens = Json::object();
  for (const auto& [g, f] : rep.maps.maps()) gens[g.str()] = to_json(f);
  return {{"kind", "exact-pl"},
          {"ell", rep.ell},
          {"c", to_string(rep.c)},
          {"lambda", to_string(rep.lambda)},
          {"mu", to_string(rep.mu)},
          {"generators", gens}};
}

/// Reads a representation and re-verifies the relator lift exactly.
inline Representation representation_from_json(const Json& j) {
  Representation rep;
  if (!j.contains("ell") || !j["ell"].is_number_unsigned()) throw std::invalid_argument("representation needs 'ell'");
  rep.ell = j["ell"].get<unsigned>();
  rep.c = rational_field(j, "c");
  rep.lambda = rational_field(j, "lambda");
  rep.mu = rational_field(j, "mu");
  if (!j.contains("generators") || !j["generators"].is_object())
    throw std::invalid_argument("representation needs a 'generators' object");
  for (const auto& [name, f] : j["generators"].items()) rep.maps.bind(generator_from_identifier(name), plmap_from_json(f));
  Word a = Word::letter(Generator("a")), b = Word::letter(Generator("b"));
  PLMap relator = compose_word(rep.maps, commutator(a, b).pow(rep.ell));
  if (!pl_equal(relator, PLMap::translation(Rational(static_cast<long>(rep.ell) - 1))))
    throw std::invalid_argument("representation does not send [a,b]^l to T_{l-1}");
  return rep;
}

inline Json to_json(const FuchsianRep& rep) {
  Json gens = Json::object();
  for (const auto& [g, m] : rep.maps)
    gens[g.str()] = {{"alpha", {format_double(m.alpha.real()), format_double(m.alpha.imag())}},
                     {"beta", {format_double(m.beta.real()), format_double(m.beta.imag())}}};
  return {{"kind", "numeric-mobius"},
          {"genus", rep.genus},
          {"relator_residual", format_double(rep.relator_residual)},
          {"generators", gens}};
}

inline Json to_json(const TauInterval& t) {
  return {{"center", to_string(t.center)}, {"radius", to_string(t.radius)}};
}

inline Json to_json(const Certificate& c) {
  Json expr = Json::array();
  for (const auto& [y, z] : c.expression) expr.push_back({{"y", y}, {"z", z}});
  return {{"verdict", c.verdict()},
          {"method", c.method},
          {"group", c.group},
          {"ell", c.ell},
          {"k", c.k},
          {"expression", expr},
          {"n", c.n},
          {"mu", to_json(c.mu)},
          {"defect_bound", to_string(c.defect)},
          {"scl_upper", to_string(c.scl_upper)},
          {"scl_lower", to_string(c.scl_lower)},
          {"threshold", to_string(c.threshold)},
          {"iterations", c.iterations},
          {"note", c.note}};
}

inline Json to_json(const LinearFit& f) {
  return {{"slope", format_double(f.slope)}, {"intercept", format_double(f.intercept)}, {"r2", format_double(f.r2)}};
}

inline const char* kReportHeader = "n,mu_center,mu_radius,paper_bound,bavard_lower,cl_upper,ratio";

inline void write_csv(std::ostream& os, const std::vector<SequenceRow>& rows) {
  os << kReportHeader << "\n";
  for (const auto& r : rows)
    os << r.n << "," << to_string(r.mu.center) << "," << to_string(r.mu.radius) << "," << to_string(r.bound)
       << "," << to_string(r.bavard_lower) << "," << to_string(r.cl_upper) << "," << to_string(r.ratio) << "\n";
}

inline void write_csv(std::ostream& os, const std::vector<NumericRow>& rows) {
  os << kReportHeader << "\n";
  for (const auto& r : rows)
    os << r.n << "," << format_double(r.mu.estimate) << "," << format_double(r.mu.uncertainty) << ","
       << format_double(r.bound) << "," << format_double(r.bavard_lower) << "," << format_double(r.cl_upper)
       << "," << format_double(r.ratio) << "\n";
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return Json::parse(in);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << text;
  if (!out) throw std::ios_base::failure("write failed for " + path);
}

}  // namespace sclforge
