#pragma once

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>

#include <json.hpp>

#include "verify.hpp"

namespace nlfrac {

using json = nlohmann::json;

struct UsageError : Error { explicit UsageError(const std::string& w) : Error(ErrorClass::usage, w) {} };

inline int exit_code(ErrorClass c) {
  switch (c) {
    case ErrorClass::usage:
    case ErrorClass::domain:
    case ErrorClass::degenerate_pair: return 2;
    case ErrorClass::resolution:
    case ErrorClass::cutoff:
    case ErrorClass::estimation:
    case ErrorClass::construction: return 3;
    case ErrorClass::resource: return 4;
    case ErrorClass::inconsistency: return 5;
  }
  return 1;
}

// 64-bit FNV-1a
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// ---------------------------------------------------------------------------
// config access with JSON-pointer diagnostics

class ConfigReader {
 public:
  explicit ConfigReader(json root) : root_(std::move(root)) {}

  bool has(const std::string& ptr) const { return root_.contains(json::json_pointer(ptr)); }

  const json& at(const std::string& ptr) const {
    json::json_pointer jp(ptr);
    if (!root_.contains(jp)) throw UsageError(ptr + ": missing");
    return root_.at(jp);
  }

  double number(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_number()) throw UsageError(ptr + ": expected number, got " + v.type_name());
    return v.get<double>();
  }
  double number(const std::string& ptr, double def) const { return has(ptr) ? number(ptr) : def; }

  long integer(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_number_integer()) throw UsageError(ptr + ": expected integer, got " + v.type_name());
    return v.get<long>();
  }
  long integer(const std::string& ptr, long def) const { return has(ptr) ? integer(ptr) : def; }

  std::string string(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_string()) throw UsageError(ptr + ": expected string, got " + v.type_name());
    return v.get<std::string>();
  }
  std::string string(const std::string& ptr, const std::string& def) const { return has(ptr) ? string(ptr) : def; }

  bool boolean(const std::string& ptr, bool def) const {
    if (!has(ptr)) return def;
    const json& v = at(ptr);
    if (!v.is_boolean()) throw UsageError(ptr + ": expected boolean, got " + v.type_name());
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_array()) throw UsageError(ptr + ": expected array, got " + v.type_name());
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(ptr + "/" + std::to_string(i)));
    return out;
  }

 private:
  json root_;
};

// Parses a JSON document given inline or as a file path.
inline json load_json_arg(const std::string& arg, const std::string& what) {
  std::string text = arg;
  auto first = arg.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || (arg[first] != '{' && arg[first] != '[')) {
    std::ifstream in(arg);
    if (!in) throw UsageError(what + ": cannot open " + arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(what + ": malformed JSON (" + std::string(e.what()) + ")");
  }
}

// ---------------------------------------------------------------------------
// domain, field and exponent specs

struct DomainSpec {
  std::string kind = "prickly";  // prickly | koch | wedge | interval | square
  double theta0 = 2.0;
  double H = 0.6;
  int depth = 6;
  double tolerance = 1e-4;
  double a = 0.0, b = 2.0;
};

inline DomainSpec parse_domain_spec(const json& j, const std::string& base = "") {
  ConfigReader r(j);
  DomainSpec s;
  s.kind = r.string(base + "/kind");
  if (s.kind == "koch") {
    s.theta0 = 1.0;
    s.H = std::sqrt(3.0) / 2.0;
  }
  s.theta0 = r.number(base + "/theta0", s.theta0);
  s.H = r.number(base + "/H", s.H);
  s.depth = static_cast<int>(r.integer(base + "/depth", s.depth));
  s.tolerance = r.number(base + "/tolerance", s.tolerance);
  s.a = r.number(base + "/a", s.a);
  s.b = r.number(base + "/b", s.b);
  if (s.kind != "prickly" && s.kind != "koch" && s.kind != "wedge" && s.kind != "interval" && s.kind != "square")
    throw UsageError(base + "/kind: unknown domain kind '" + s.kind + "'");
  if (s.depth < 0) throw UsageError(base + "/depth: must be nonnegative");
  return s;
}

inline json to_json(const DomainSpec& s) {
  json j{{"kind", s.kind}};
  if (s.kind == "prickly" || s.kind == "koch") {
    j["theta0"] = s.theta0;
    j["H"] = s.H;
    j["depth"] = s.depth;
  } else if (s.kind == "wedge") {
    j["theta0"] = s.theta0;
    j["H"] = s.H;
    j["tolerance"] = s.tolerance;
  } else if (s.kind == "interval") {
    j["a"] = s.a;
    j["b"] = s.b;
  }
  return j;
}

struct BuiltDomain {
  DomainApprox domain;
  std::optional<PricklySystem> system;
};

inline BuiltDomain build_domain(const DomainSpec& s) {
  BuiltDomain b;
  if (s.kind == "prickly" || s.kind == "koch") {
    b.system = PricklySystem::build(s.theta0, s.H);
    b.domain = prickly_domain(*b.system, s.depth);
  } else if (s.kind == "wedge") {
    b.domain = wedge_domain(s.theta0, s.H, s.tolerance);
  } else if (s.kind == "interval") {
    b.domain = interval_domain(s.a, s.b);
  } else {
    b.domain = unit_square();
  }
  return b;
}

// u specs: constant{value}, linear{ax, ay, c}, quadratic{axx, axy, ayy, ax, ay, c}, counterexample{p, s0, J_max,
// convention, damped}
inline ScalarField parse_field_spec(const json& j, const std::string& base = "") {
  ConfigReader r(j);
  const std::string kind = r.string(base + "/kind");
  if (kind == "constant") return ScalarField::constant(r.number(base + "/value", 0.0));
  if (kind == "linear" || kind == "quadratic") {
    double axx = 0, axy = 0, ayy = 0;
    if (kind == "quadratic") {
      axx = r.number(base + "/axx", 0.0);
      axy = r.number(base + "/axy", 0.0);
      ayy = r.number(base + "/ayy", 0.0);
    }
    double ax = r.number(base + "/ax", 0.0), ay = r.number(base + "/ay", 0.0), c = r.number(base + "/c", 0.0);
    std::ostringstream os;
    os << kind << "(" << axx << "," << axy << "," << ayy << "," << ax << "," << ay << "," << c << ")";
    return {[=](Point2 p) { return axx * p.x * p.x + axy * p.x * p.y + ayy * p.y * p.y + ax * p.x + ay * p.y + c; },
            Regularity::smooth, os.str()};
  }
  if (kind == "counterexample") {
    CounterexampleSpec cs;
    cs.p = r.number(base + "/p", cs.p);
    cs.s0 = r.number(base + "/s0", cs.s0);
    cs.J_max = static_cast<int>(r.integer(base + "/J_max", cs.J_max));
    if (r.has(base + "/convention")) {
      try {
        cs.convention = parse_convention(r.string(base + "/convention"));
      } catch (const DomainError& e) {
        throw UsageError(base + "/convention: " + e.what());
      }
    }
    cs.damped = r.boolean(base + "/damped", false);
    return counterexample_field(cs);
  }
  throw UsageError(base + "/kind: unknown field kind '" + kind + "'");
}

inline ExponentField parse_exponent_spec(const json& j, const DomainApprox& dom, const std::string& base = "") {
  ConfigReader r(j);
  const std::string kind = r.string(base + "/kind");
  if (kind == "constant") return variable_exponent_field(ExponentFormula::constant(r.number(base + "/s0")));
  if (kind == "distance_power")
    return variable_exponent_field(
        ExponentFormula::distance_power(r.number(base + "/base"), r.number(base + "/exponent")), &dom);
  throw UsageError(base + "/kind: unknown exponent kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// report serialization

inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
inline json to_json(Point2 p) { return json::array({num(p.x), num(p.y)}); }

inline json to_json(const QuadratureSpec& q) {
  return {{"grading", q.grading},           {"cells_per_decade", q.cells_per_decade},
          {"eps_cut", q.eps_cut},           {"inner_samples", q.inner_samples},
          {"radial_samples", q.radial_samples}, {"angular_samples", q.angular_samples},
          {"outer_order", q.outer_order},   {"outer_order_2d", q.outer_order_2d},
          {"max_cells", q.max_cells}};
}

inline json to_json(const NuResult& r) {
  json j{{"value", num(r.value)}, {"error", num(r.error)}, {"cutoff", num(r.cutoff)}, {"cells", r.cells},
         {"divergent", r.divergent}};
  if (r.growth_exponent) j["growth_exponent"] = num(*r.growth_exponent);
  return j;
}

inline json to_json(const NuLadder& l) {
  json rs = json::array();
  for (auto& r : l.results) rs.push_back(to_json(r));
  return {{"results", rs}, {"power_exponent", num(l.power_exponent)}, {"log_exponent", num(l.log_exponent)},
          {"divergent", l.divergent}};
}

inline json to_json(const AhlforsReport& r) {
  return {{"t", num(r.t)},
          {"A_upper", num(r.upper_const)},
          {"A_lower", num(r.lower_const)},
          {"A_certified", num(r.A_certified)},
          {"A_estimate", num(r.A_estimate)},
          {"estimate_max", num(r.estimate_max)},
          {"estimate_min", num(r.estimate_min)},
          {"samples", r.samples.size()},
          {"pass", r.pass}};
}

inline json to_json(const Evidence& e) {
  return {{"sample", e.sample}, {"scale", num(e.scale)},   {"parameter", num(e.parameter)}, {"ok", e.ok},
          {"witness", to_json(e.witness)}, {"value", num(e.value)}, {"threshold", num(e.threshold)}};
}

inline json to_json(const HypothesisReport& r, bool with_evidence = true) {
  json c = json::object();
  for (auto& [k, v] : r.constants) c[k] = num(v);
  json j{{"hypothesis", to_string(r.hypothesis)}, {"pass", r.pass}, {"constants", c},
         {"failed_samples", r.failed_samples}, {"notes", r.notes}};
  if (with_evidence) {
    json ev = json::array();
    for (auto& e : r.evidence) ev.push_back(to_json(e));
    j["evidence"] = ev;
  }
  return j;
}

inline void write_evidence_csv(std::ostream& os, const HypothesisReport& r) {
  os << "sample,scale,parameter,ok,witness_x,witness_y,value,threshold\n";
  os << std::setprecision(17);
  for (auto& e : r.evidence)
    os << e.sample << ',' << e.scale << ',' << e.parameter << ',' << (e.ok ? 1 : 0) << ',' << e.witness.x << ','
       << e.witness.y << ',' << e.value << ',' << e.threshold << '\n';
}

inline json to_json(const BoundaryPoint& b) { return {{"x", to_json(b.x)}, {"cusp", b.cusp}, {"label", b.label}}; }

inline json to_json(const SeriesVerdict& v) {
  json ps = json::array();
  for (auto& p : v.partial_sums)
    ps.push_back({{"J", p.J}, {"value", num(p.value)}, {"log_value", num(p.log_value)}, {"bound", num(p.bound)}});
  return {{"q", v.q},
          {"verdict", to_string(v.verdict)},
          {"growth_fit", num(v.growth_fit)},
          {"last_increment", num(v.last_increment)},
          {"increments_shrink", v.increments_shrink},
          {"within_bound", v.within_bound},
          {"partial_sums", ps}};
}

inline json to_json(const QuadratureComparison& c) {
  json rows = json::array();
  for (std::size_t i = 0; i < c.J.size(); ++i)
    rows.push_back({{"J", c.J[i]},
                    {"eps", num(c.eps[i])},
                    {"quadrature", num(c.quadrature[i])},
                    {"quad_error", num(c.quad_error[i])},
                    {"series", num(c.series[i])},
                    {"lower", num(c.lower[i])},
                    {"upper", num(c.upper[i])},
                    {"inside", c.inside[i] != 0}});
  return {{"q", c.q},
          {"convention", c.convention},
          {"rows", rows},
          {"quadrature_growth", num(c.quadrature_growth)},
          {"series_growth", num(c.series_growth)},
          {"consistent", c.consistent}};
}

inline json to_json(const CorkscrewSequence& s) {
  json pts = json::array();
  for (auto& p : s.points)
    pts.push_back({{"j", p.j}, {"x", to_json(p.x)}, {"rho", num(p.rho)}, {"distance", num(p.distance)},
                   {"offset", num(p.offset)}});
  return {{"base", to_json(s.base)}, {"lambda", s.lambda}, {"eta", s.eta},  {"theta", s.theta},
          {"rho0", s.rho0},          {"points", pts},      {"missing", s.missing}};
}

inline json to_json(const TraceSample& t) {
  json g = json::array();
  for (double v : t.g_values) g.push_back(num(v));
  json j{{"base", to_json(t.base)}, {"sequence", to_json(t.sequence)}, {"g_values", g},
         {"cauchy_tail", num(t.cauchy_tail)}, {"limit", t.limit ? num(*t.limit) : json(nullptr)}};
  if (!t.diagnostics.empty()) j["diagnostics"] = t.diagnostics;
  return j;
}

inline json to_json(const HolderFit& h) {
  return {{"beta_hat", num(h.beta_hat)},   {"C_hat", num(h.C_hat)},   {"r2", num(h.r2)},
          {"predicted_beta", num(h.predicted_beta)}, {"scales", h.scales}, {"noise_limited", h.noise_limited},
          {"meets_prediction", h.meets_prediction}};
}

inline json to_json(const MeanLadder& m) {
  json a = json::array(), b = json::array();
  for (double v : m.rhos) a.push_back(num(v));
  for (double v : m.means) b.push_back(num(v));
  return {{"rhos", a}, {"means", b}, {"kendall", num(m.kendall)}};
}

inline json to_json(const EnvelopeLadder& e) {
  json a = json::array(), b = json::array();
  for (double v : e.deltas) a.push_back(num(v));
  for (double v : e.values) b.push_back(num(v));
  return {{"deltas", a}, {"values", b}, {"limit", num(e.limit)}};
}

inline json to_json(const SupportInterval& s) {
  return {{"j", s.j},          {"lo", num(s.lo)},         {"hi", num(s.hi)},
          {"amplitude", s.amplitude}, {"degenerate", s.degenerate}, {"convention", s.convention}};
}

// ---------------------------------------------------------------------------
// artifacts

// Envelope written for every CLI artifact. The hash covers the canonical config dump only, so the timestamp
// field never changes it.
inline json make_artifact(const std::string& command, const json& config, std::uint64_t seed, json result) {
  json a;
  a["command"] = command;
  a["config"] = config;
  a["config_hash"] = hex64(fnv1a64(config.dump()));
  a["seed"] = seed;
  a["result"] = std::move(result);
  return a;
}

inline std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string dump_artifact(json artifact, const std::string& timestamp) {
  artifact["timestamp"] = timestamp;
  return artifact.dump(2) + "\n";
}

// Drops the timestamp so two artifacts can be compared byte for byte.
inline std::string strip_timestamp(const std::string& text) {
  json j = json::parse(text);
  j.erase("timestamp");
  return j.dump(2);
}

}  // namespace nlfrac
