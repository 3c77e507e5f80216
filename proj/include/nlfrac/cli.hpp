#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "io.hpp"

namespace nlfrac::cli {

namespace fs = std::filesystem;

struct Common {
  std::uint64_t seed = 1;
  unsigned jobs = default_jobs();
  std::string out;
  std::string config;
};

// Flags recorded only when given on the command line, then patched over defaults and the config file.
class Overrides {
 public:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& name, const std::string& ptr, const std::string& help) {
    auto v = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *v, help);
    apply_.push_back([v, opt, ptr](json& j) {
      if (opt->count()) j[json::json_pointer(ptr)] = *v;
    });
    return opt;
  }
  CLI::Option* add_json(CLI::App* app, const std::string& name, const std::string& ptr, const std::string& help) {
    auto v = std::make_shared<std::string>();
    CLI::Option* opt = app->add_option(name, *v, help);
    apply_.push_back([v, opt, ptr, name](json& j) {
      if (opt->count()) j[json::json_pointer(ptr)] = load_json_arg(*v, name);
    });
    return opt;
  }
  CLI::Option* add_flag(CLI::App* app, const std::string& name, const std::string& ptr, const std::string& help) {
    auto v = std::make_shared<bool>(false);
    CLI::Option* opt = app->add_flag(name, *v, help);
    apply_.push_back([v, opt, ptr](json& j) {
      if (opt->count()) j[json::json_pointer(ptr)] = *v;
    });
    return opt;
  }
  void apply(json& j) const {
    for (auto& f : apply_) f(j);
  }

 private:
  std::vector<std::function<void(json&)>> apply_;
};

// Files produced by one run, written only once the whole computation succeeded.
struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;
  int status = 0;
  void add(std::string name, std::string body) { files.emplace_back(std::move(name), std::move(body)); }
};

inline std::string output_dir(const Common& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("NLFRAC_OUT_DIR"); env && *env) return env;
  return "nlfrac-out";
}

inline void add_domain_flags(CLI::App* app, Overrides& o) {
  o.add<std::string>(app, "--kind", "/domain/kind", "prickly | koch | wedge | interval | square");
  o.add<double>(app, "--theta0", "/domain/theta0", "cusp exponent");
  o.add<double>(app, "--H", "/domain/H", "wedge height");
  o.add<int>(app, "--depth", "/domain/depth", "boundary approximation depth");
  o.add<double>(app, "--tolerance", "/domain/tolerance", "wedge boundary tolerance");
  o.add<double>(app, "--a", "/domain/a", "interval left end");
  o.add<double>(app, "--b", "/domain/b", "interval right end");
  o.add_json(app, "--domain", "/domain", "domain spec (JSON text or file)");
}

inline void add_quadrature_flags(CLI::App* app, Overrides& o) {
  o.add<double>(app, "--eps-cut", "/quadrature/eps_cut", "boundary cutoff on d(x)");
  o.add<int>(app, "--cells-per-decade", "/quadrature/cells_per_decade", "outer cells per decade of d");
  o.add<int>(app, "--inner-samples", "/quadrature/inner_samples", "inner Gauss order (1D)");
  o.add<int>(app, "--radial-samples", "/quadrature/radial_samples", "inner radial nodes (2D)");
  o.add<int>(app, "--angular-samples", "/quadrature/angular_samples", "inner angular nodes (2D)");
}

inline QuadratureSpec parse_quadrature(const json& cfg, unsigned jobs) {
  ConfigReader r(cfg);
  QuadratureSpec q;
  q.grading = r.number("/quadrature/grading", q.grading);
  q.cells_per_decade = static_cast<int>(r.integer("/quadrature/cells_per_decade", q.cells_per_decade));
  q.eps_cut = r.number("/quadrature/eps_cut", q.eps_cut);
  q.inner_samples = static_cast<int>(r.integer("/quadrature/inner_samples", q.inner_samples));
  q.radial_samples = static_cast<int>(r.integer("/quadrature/radial_samples", q.radial_samples));
  q.angular_samples = static_cast<int>(r.integer("/quadrature/angular_samples", q.angular_samples));
  q.outer_order = static_cast<int>(r.integer("/quadrature/outer_order", q.outer_order));
  q.outer_order_2d = static_cast<int>(r.integer("/quadrature/outer_order_2d", q.outer_order_2d));
  q.max_cells = static_cast<std::size_t>(r.integer("/quadrature/max_cells", static_cast<long>(q.max_cells)));
  q.jobs = jobs;
  return q;
}

inline double domain_dimension_t(const BuiltDomain& b) {
  if (b.system) return b.system->t();
  return b.domain.is_1d() ? 0.0 : 1.0;
}

inline double domain_theta0(const BuiltDomain& b) { return b.domain.is_1d() || b.domain.kind() == DomainKind::polygon ? 1.0 : b.domain.params().theta0; }

inline std::vector<BoundaryPoint> boundary_samples(const BuiltDomain& b, std::size_t n, std::uint64_t seed, int max_norm) {
  if (b.system) return prickly_boundary_samples(*b.system, b.domain, n, seed, max_norm);
  if (b.domain.kind() == DomainKind::wedge) return wedge_boundary_samples(b.domain, n, seed);
  return vertex_samples(b.domain, n, seed);
}

inline json sample_list(const std::vector<BoundaryPoint>& s) {
  json a = json::array();
  for (auto& b : s) a.push_back(to_json(b));
  return a;
}

inline std::vector<long> to_longs(const std::vector<double>& v, const std::string& ptr) {
  std::vector<long> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != std::floor(v[i]) || v[i] < 1) throw UsageError(ptr + "/" + std::to_string(i) + ": expected positive integer");
    out.push_back(static_cast<long>(v[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// subcommands; each returns the artifact result and appends side files

inline json cmd_build_domain(const json& cfg, const Common&, Outputs& out) {
  ConfigReader r(cfg);
  if (!r.has("/domain/kind")) throw UsageError("missing required option --kind (or /domain/kind)");
  DomainSpec ds = parse_domain_spec(cfg, "/domain");
  BuiltDomain b = build_domain(ds);
  std::ostringstream csv;
  write_csv(csv, b.domain.boundary());
  out.add("boundary.csv", csv.str());
  const BBox& bb = b.domain.bbox();
  json res{{"domain", to_json(ds)},
           {"vertices", b.domain.boundary().vertices.size()},
           {"distance_error", num(b.domain.distance_error())},
           {"bbox", {num(bb.xmin), num(bb.ymin), num(bb.xmax), num(bb.ymax)}},
           {"measure", num(b.domain.measure())},
           {"simple", b.domain.boundary_is_simple()}};
  if (b.system) {
    const PricklySystem& s = *b.system;
    res["L"] = num(s.L());
    res["t"] = num(s.t());
    res["hausdorff_dimension"] = num(hausdorff_dimension(s.L()));
    res["D0"] = num(s.D0());
    res["r0"] = num(s.r0());
    res["x0"] = to_json(s.x0());
    res["cusp"] = to_json(s.cusp());
    if (r.boolean("/box_count", false)) {
      const double sigma = r.number("/box_sigma", 3e-5);
      auto pts = s.attractor_points(sigma);
      std::vector<double> scales;
      for (int k = 0; k <= 5; ++k) scales.push_back(0.05 * std::pow(10.0, -0.45 * k));
      res["box_counting"] = {{"points", pts.size()}, {"sigma", sigma}, {"dimension", num(box_counting_dimension(pts, scales))}};
    }
  }
  return res;
}

inline json cmd_check_hypotheses(const json& cfg, const Common& c, Outputs& out) {
  ConfigReader r(cfg);
  BuiltDomain b = build_domain(parse_domain_spec(cfg, "/domain"));
  const double th0 = domain_theta0(b);
  const std::string mode = r.string("/theta/mode", "constant");
  const double thv = r.number("/theta/value", th0);
  ThetaFn theta;
  if (mode == "constant")
    theta = theta_constant(thv);
  else if (mode == "cusp")
    theta = theta_cusp(thv);
  else
    throw UsageError("/theta/mode: expected 'constant' or 'cusp'");
  auto samples = boundary_samples(b, static_cast<std::size_t>(r.integer("/samples/generic", 30)), c.seed,
                                  static_cast<int>(r.integer("/samples/max_norm", 3)));
  std::vector<std::string> only = {"H1", "H2", "H3"};
  if (r.has("/only")) {
    only.clear();
    for (std::size_t i = 0; i < r.at("/only").size(); ++i) only.push_back(r.string("/only/" + std::to_string(i)));
  }
  auto wants = [&](const std::string& h) { return std::find(only.begin(), only.end(), h) != only.end(); };
  json res{{"samples", sample_list(samples)}, {"theta", {{"mode", mode}, {"value", thv}}}};
  json reps = json::array();
  auto emit = [&](const HypothesisReport& rep, const std::string& file) {
    reps.push_back(to_json(rep, false));
    std::ostringstream os;
    write_evidence_csv(os, rep);
    out.add(file, os.str());
  };
  if (wants("H1")) {
    H1Options o;
    o.seed = c.seed;
    o.jobs = c.jobs;
    o.candidates = static_cast<int>(r.integer("/h1/candidates", o.candidates));
    std::vector<double> ladder;
    const double dmax = r.number("/h1/delta_max", 0.1);
    const long steps = r.integer("/h1/delta_steps", 8);
    for (long k = 0; k < steps; ++k) ladder.push_back(dmax * std::pow(0.5, static_cast<double>(k)));
    const double eta0 = r.number("/h1/eta0", 0.5), lambda0 = r.number("/h1/lambda0", 0.5);
    auto rep = check_h1(b.domain, samples, theta, eta0, lambda0, ladder, o);
    emit(rep, "h1_evidence.csv");
  }
  if (wants("H2")) {
    H2Options o;
    o.seed = c.seed;
    o.jobs = c.jobs;
    o.pairs = static_cast<int>(r.integer("/h2/pairs", o.pairs));
    o.candidates = static_cast<int>(r.integer("/h2/candidates", o.candidates));
    std::vector<double> lambdas = r.has("/h2/lambdas") ? r.numbers("/h2/lambdas") : std::vector<double>{0.25, 0.5};
    std::vector<double> rhos = r.has("/h2/rhos") ? r.numbers("/h2/rhos") : std::vector<double>{0.1, 0.05};
    auto rep = check_h2(b.domain, samples, theta, r.number("/h2/C", 4.0), lambdas, rhos,
                        static_cast<int>(r.integer("/h2/grid_res", 64)), o);
    emit(rep, "h2_evidence.csv");
  }
  if (wants("H3")) {
    ExponentField s = r.has("/h3/s") ? parse_exponent_spec(cfg, b.domain, "/h3/s")
                                     : variable_exponent_field(ExponentFormula::constant(1.5));
    auto h3 = check_h3(s, b.domain, samples, theta, r.number("/h3/p", 2.0), b.domain.dimension(),
                       domain_dimension_t(b), r.number("/h3/delta_gamma", 0.05), parse_quadrature(cfg, c.jobs));
    emit(h3.h3_prime, "h3prime_evidence.csv");
    emit(h3.h3_dprime, "h3dprime_evidence.csv");
  }
  res["reports"] = reps;
  return res;
}

inline json cmd_ahlfors_scan(const json& cfg, const Common& c, Outputs& out) {
  ConfigReader r(cfg);
  BuiltDomain b = build_domain(parse_domain_spec(cfg, "/domain"));
  if (!b.system) throw UsageError("/domain/kind: ahlfors-scan needs a prickly or koch domain");
  GroupGeometry geo(*b.system);
  auto centers = boundary_centers(*b.system, static_cast<std::size_t>(r.integer("/centers", 20)), c.seed,
                                  r.number("/sigma_level", 1e-3));
  std::vector<double> radii;
  for (long k = r.integer("/k_min", 2); k <= r.integer("/k_max", 7); ++k) radii.push_back(std::pow(3.0, -double(k)));
  if (radii.empty()) throw UsageError("/k_max: must be >= /k_min");
  auto rep = ahlfors_scan(geo, centers, radii, r.number("/A_max", 1e3), c.jobs);
  std::ostringstream csv;
  write_csv(csv, rep);
  out.add("ahlfors.csv", csv.str());
  return to_json(rep);
}

inline json cmd_eval_seminorm(const json& cfg, const Common& c, Outputs&) {
  ConfigReader r(cfg);
  if (!r.has("/u")) throw UsageError("missing required option --u (or /u)");
  BuiltDomain b = build_domain(parse_domain_spec(cfg, "/domain"));
  ScalarField u = parse_field_spec(cfg, "/u");
  ExponentField s = r.has("/s") ? parse_exponent_spec(cfg, b.domain, "/s")
                                : variable_exponent_field(ExponentFormula::constant(1.0));
  QuadratureSpec q = parse_quadrature(cfg, c.jobs);
  Region E = Region::whole();
  if (r.has("/region")) {
    const std::string k = r.string("/region/kind");
    if (k == "interval") {
      E = Region::interval(r.number("/region/lo"), r.number("/region/hi"));
    } else if (k == "box") {
      BBox bb;
      bb.expand(Point2{r.number("/region/xmin"), r.number("/region/ymin")});
      bb.expand(Point2{r.number("/region/xmax"), r.number("/region/ymax")});
      E = Region::make_box(bb);
    } else if (k == "ball") {
      E = Region::make_ball({r.number("/region/cx"), r.number("/region/cy", 0.0)}, r.number("/region/radius"));
    } else if (k != "whole") {
      throw UsageError("/region/kind: unknown region kind '" + k + "'");
    }
  }
  const double p = r.number("/p", 1.0), qq = r.number("/q", 1.0);
  json res{{"u", u.description()}, {"p", p}, {"q", qq}};
  if (r.has("/eps_ladder")) {
    auto L = nu_ladder(u, s, p, qq, E, b.domain, q, r.numbers("/eps_ladder"));
    res["ladder"] = to_json(L);
    res["nu"] = to_json(L.results.back());
  } else {
    res["nu"] = to_json(nu_pq(u, s, p, qq, E, b.domain, q));
  }
  if (!u.diagnostics().empty()) res["field_diagnostics"] = u.diagnostics();
  return res;
}

inline json cmd_extract_trace(const json& cfg, const Common& c, Outputs&) {
  ConfigReader r(cfg);
  if (!r.has("/u")) throw UsageError("missing required option --u (or /u)");
  BuiltDomain b = build_domain(parse_domain_spec(cfg, "/domain"));
  ScalarField u = parse_field_spec(cfg, "/u");
  const double theta = r.number("/theta", domain_theta0(b));
  const double eta = r.number("/eta", 0.5), p = r.number("/p", 2.0), tol = r.number("/tol", 1e-6);
  const int j_max = static_cast<int>(r.integer("/j_max", 24));
  std::vector<double> lambdas = r.has("/lambdas") ? r.numbers("/lambdas") : std::vector<double>{0.2, 0.4, 0.6};
  std::vector<double> rhos = r.has("/lebesgue_rhos") ? r.numbers("/lebesgue_rhos")
                                                     : std::vector<double>{0.1, 0.05, 0.02, 0.01, 0.005};
  ExponentField s = r.has("/s") ? parse_exponent_spec(cfg, b.domain, "/s")
                                : variable_exponent_field(ExponentFormula::constant(1.5));
  QuadratureSpec q = parse_quadrature(cfg, 1);
  CorkscrewOptions co;
  co.rho0 = r.number("/rho0", co.rho0);
  co.candidates = static_cast<int>(r.integer("/candidates", co.candidates));
  co.seed = c.seed;
  auto pts = vertex_samples(b.domain, static_cast<std::size_t>(r.integer("/points", 20)), c.seed);
  const double t = domain_dimension_t(b);
  std::vector<json> rows(pts.size());
  parallel_for(pts.size(), c.jobs, [&](std::size_t i) {
    const Point2 xb = pts[i].x;
    json row{{"base", to_json(xb)}, {"u_base", num(u(xb))}};
    auto env = alpha_envelope_ladder(s, theta, xb, {0.1, 0.05, 0.025, 0.0125}, p, b.domain.dimension(), b.domain, q);
    const double beta = predicted_beta(env.limit, t, p);
    row["alpha_envelope"] = to_json(env);
    row["predicted_beta"] = num(beta);
    json per = json::array();
    std::optional<double> first;
    for (double lam : lambdas) {
      auto seq = corkscrew_sequence(b.domain, xb, lam, eta, theta, j_max, co);
      json e{{"lambda", lam}};
      if (seq.points.empty()) {
        e["diagnostics"] = "no corkscrew witness in any annulus";
      } else {
        auto ts = trace_at(u, b.domain, seq, q, tol);
        e["trace"] = to_json(ts);
        if (ts.limit) {
          if (!first) first = ts.limit;
          try {
            e["holder"] = to_json(holder_fit(ts, beta));
          } catch (const EstimationError& err) {
            e["holder_diagnostics"] = err.what();
          }
        }
      }
      per.push_back(e);
    }
    row["per_lambda"] = per;
    if (first) row["lebesgue"] = to_json(lebesgue_point_check(u, b.domain, xb, *first, p, rhos));
    rows[i] = row;
  });
  return {{"u", u.description()}, {"theta", theta}, {"eta", eta}, {"p", p}, {"t", num(t)}, {"points", rows}};
}

inline json cmd_verify_counterexample(const json& cfg, const Common& c, Outputs& out) {
  ConfigReader r(cfg);
  if (!r.has("/q")) throw UsageError("missing required option --q (or /q)");
  CounterexampleSpec cs;
  cs.p = r.number("/p", cs.p);
  cs.s0 = r.number("/s0", cs.s0);
  cs.J_max = static_cast<int>(r.integer("/J_max", cs.J_max));
  cs.damped = r.boolean("/damped", false);
  try {
    cs.convention = parse_convention(r.string("/convention", "shifted"));
  } catch (const DomainError& e) {
    throw UsageError(std::string("/convention: ") + e.what());
  }
  cs.validate();
  std::vector<double> qs = r.numbers("/q");
  if (qs.empty()) throw UsageError("/q: need at least one exponent");
  std::vector<long> J = to_longs(r.has("/J_ladder") ? r.numbers("/J_ladder")
                                                    : std::vector<double>{10, 100, 1000, 10000, 100000, 1000000},
                                 "/J_ladder");
  const bool quad = r.boolean("/quadrature", true);
  std::vector<long> QJ = to_longs(r.has("/quad_J") ? r.numbers("/quad_J") : std::vector<double>{4, 8, 12, 16, 20, 24},
                                  "/quad_J");
  QuadratureSpec qspec = parse_quadrature(cfg, c.jobs);
  json verdicts = json::array(), comps = json::array();
  bool consistent = true;
  for (double q : qs) {
    verdicts.push_back(to_json(counterexample_series(cs, q, J)));
    if (quad) {
      auto cmp = counterexample_quadrature(cs, q, QJ, qspec);
      consistent = consistent && cmp.consistent;
      comps.push_back(to_json(cmp));
    }
  }
  json iv = json::array();
  for (int j = 1; j <= std::min(cs.J_max, 8); ++j) iv.push_back(to_json(counterexample_interval(cs, j)));
  json res{{"p", cs.p}, {"s0", cs.s0}, {"convention", to_string(cs.convention)}, {"damped", cs.damped},
           {"verdicts", verdicts}, {"intervals", iv}};
  if (quad) {
    res["quadrature"] = comps;
    res["consistent"] = consistent;
    if (!consistent) {
      res["inconsistency"] = "quadrature leaves the sandwich interval of the truncated series";
      out.status = exit_code(ErrorClass::inconsistency);
    }
  }
  return res;
}

inline json cmd_emit_region_plot(const json& cfg, const Common&, Outputs& out) {
  ConfigReader r(cfg);
  const double theta0 = r.number("/theta0", 2.0);
  double t = 0;
  if (r.has("/t")) {
    t = r.number("/t");
  } else {
    t = PricklySystem::build(theta0, r.number("/H", 0.6)).t();
  }
  const int n = static_cast<int>(r.integer("/n", 2));
  auto pr = r.has("/p_range") ? r.numbers("/p_range") : std::vector<double>{1.0, 4.0};
  auto sr = r.has("/s_range") ? r.numbers("/s_range") : std::vector<double>{0.0, 3.0};
  if (pr.size() != 2) throw UsageError("/p_range: expected [min, max]");
  if (sr.size() != 2) throw UsageError("/s_range: expected [min, max]");
  auto g = region_grid({pr[0], pr[1]}, {sr[0], sr[1]}, theta0, t, n, static_cast<int>(r.integer("/resolution", 128)));
  std::ostringstream a, bm, cc;
  write_mask_csv(a, g, false);
  write_mask_csv(bm, g, true);
  write_curves_csv(cc, g);
  out.add("region_trace_mask.csv", a.str());
  out.add("region_lebesgue_mask.csv", bm.str());
  out.add("region_curves.csv", cc.str());
  std::size_t nt = 0, nl = 0, violations = 0;
  for (std::size_t is = 0; is < g.ss.size(); ++is)
    for (std::size_t ip = 0; ip < g.ps.size(); ++ip) {
      nt += g.trace_mask[is][ip];
      nl += g.lebesgue_mask[is][ip];
      violations += g.lebesgue_mask[is][ip] && !g.trace_mask[is][ip];
    }
  auto jt = level_curve_breakpoint(admissible_threshold(AdmissibleMode::trace_wbp, theta0, t, n), theta0, n);
  auto jl = level_curve_breakpoint(admissible_threshold(AdmissibleMode::lebesgue, theta0, t, n), theta0, n);
  return {{"theta0", theta0},
          {"t", num(t)},
          {"n", n},
          {"resolution", g.ps.size()},
          {"threshold_trace", num(admissible_threshold(AdmissibleMode::trace_wbp, theta0, t, n))},
          {"threshold_lebesgue", num(admissible_threshold(AdmissibleMode::lebesgue, theta0, t, n))},
          {"trace_cells", nt},
          {"lebesgue_cells", nl},
          {"containment_violations", violations},
          {"strict_containment", violations == 0 && nt > nl},
          {"breakpoint_jump_trace", num(std::abs(jt.first - jt.second))},
          {"breakpoint_jump_lebesgue", num(std::abs(jl.first - jl.second))}};
}

// ---------------------------------------------------------------------------

using Handler = json (*)(const json&, const Common&, Outputs&);

inline json default_config(const std::string& cmd) {
  if (cmd == "build-domain") return json::object();
  if (cmd == "eval-seminorm") return {{"domain", {{"kind", "interval"}, {"a", 0.0}, {"b", 2.0}}}};
  if (cmd == "verify-counterexample") return json::object();
  if (cmd == "emit-region-plot") return json::object();
  return {{"domain", {{"kind", "prickly"}, {"theta0", 2.0}, {"H", 0.6}, {"depth", 6}}}};
}

inline int run_cli(int argc, char** argv, std::ostream& log = std::cerr) {
  CLI::App app{"nonlocal traces on rough domains"};
  app.require_subcommand(1);
  Common common;
  std::map<std::string, std::pair<CLI::App*, Handler>> cmds;
  std::map<std::string, Overrides> ov;
  auto sub = [&](const std::string& name, const std::string& help, Handler h) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--seed", common.seed, "seed for all sampling");
    s->add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);
    s->add_option("--out", common.out, "output directory (default $NLFRAC_OUT_DIR or ./nlfrac-out)");
    s->add_option("--config", common.config, "run config (JSON text or file)");
    cmds[name] = {s, h};
    return s;
  };

  CLI::App* bd = sub("build-domain", "emit the boundary polyline and dimension data", cmd_build_domain);
  add_domain_flags(bd, ov["build-domain"]);
  ov["build-domain"].add_flag(bd, "--box-count", "/box_count", "also estimate the box-counting dimension");
  ov["build-domain"].add<double>(bd, "--box-sigma", "/box_sigma", "attractor scale for box counting");

  CLI::App* ch = sub("check-hypotheses", "corkscrew, connectedness and oscillation checks", cmd_check_hypotheses);
  add_domain_flags(ch, ov["check-hypotheses"]);
  add_quadrature_flags(ch, ov["check-hypotheses"]);
  {
    auto& o = ov["check-hypotheses"];
    o.add<std::string>(ch, "--theta-mode", "/theta/mode", "constant | cusp");
    o.add<double>(ch, "--theta", "/theta/value", "theta value (default theta0 of the domain)");
    o.add<int>(ch, "--samples", "/samples/generic", "generic boundary samples");
    o.add<int>(ch, "--max-norm", "/samples/max_norm", "norm bound for cusp images");
    o.add<std::vector<std::string>>(ch, "--only", "/only", "subset of H1 H2 H3");
    o.add<double>(ch, "--eta0", "/h1/eta0", "H1 eta0");
    o.add<double>(ch, "--lambda0", "/h1/lambda0", "H1 lambda0");
    o.add<double>(ch, "--delta-max", "/h1/delta_max", "H1 largest delta");
    o.add<int>(ch, "--delta-steps", "/h1/delta_steps", "H1 number of halvings");
    o.add<double>(ch, "--C", "/h2/C", "H2 path constant");
    o.add<std::vector<double>>(ch, "--lambdas", "/h2/lambdas", "H2 lambda ladder");
    o.add<std::vector<double>>(ch, "--rhos", "/h2/rhos", "H2 rho ladder");
    o.add<int>(ch, "--grid-res", "/h2/grid_res", "H2 grid cells per diameter");
    o.add_json(ch, "--s", "/h3/s", "H3 exponent field spec");
    o.add<double>(ch, "--p", "/h3/p", "H3 integrability exponent");
    o.add<double>(ch, "--delta-gamma", "/h3/delta_gamma", "H3 delta_Gamma");
  }

  CLI::App* ah = sub("ahlfors-scan", "mass ratios m(B)/rho^t over boundary balls", cmd_ahlfors_scan);
  add_domain_flags(ah, ov["ahlfors-scan"]);
  {
    auto& o = ov["ahlfors-scan"];
    o.add<int>(ah, "--centers", "/centers", "number of centers on the attractor");
    o.add<int>(ah, "--k-min", "/k_min", "smallest k in rho = 3^-k");
    o.add<int>(ah, "--k-max", "/k_max", "largest k in rho = 3^-k");
    o.add<double>(ah, "--A-max", "/A_max", "pass bound on the ratio spread");
  }

  CLI::App* ev = sub("eval-seminorm", "evaluate the nonlocal seminorm", cmd_eval_seminorm);
  add_domain_flags(ev, ov["eval-seminorm"]);
  add_quadrature_flags(ev, ov["eval-seminorm"]);
  {
    auto& o = ov["eval-seminorm"];
    o.add_json(ev, "--u", "/u", "field spec (JSON text or file)");
    o.add_json(ev, "--s", "/s", "exponent field spec (JSON text or file)");
    o.add_json(ev, "--region", "/region", "integration region spec");
    o.add<double>(ev, "--p", "/p", "outer exponent p");
    o.add<double>(ev, "--q", "/q", "inner exponent q");
    o.add<std::vector<double>>(ev, "--eps-ladder", "/eps_ladder", "cutoffs for a divergence ladder");
  }

  CLI::App* tr = sub("extract-trace", "corkscrew traces, Hoelder fits and Lebesgue ladders", cmd_extract_trace);
  add_domain_flags(tr, ov["extract-trace"]);
  add_quadrature_flags(tr, ov["extract-trace"]);
  {
    auto& o = ov["extract-trace"];
    o.add_json(tr, "--u", "/u", "field spec (JSON text or file)");
    o.add_json(tr, "--s", "/s", "exponent field for the predicted rate");
    o.add<std::vector<double>>(tr, "--lambdas", "/lambdas", "approach parameters");
    o.add<double>(tr, "--eta", "/eta", "annulus ratio");
    o.add<double>(tr, "--theta", "/theta", "approach exponent (default theta0)");
    o.add<int>(tr, "--j-max", "/j_max", "number of annuli");
    o.add<int>(tr, "--points", "/points", "boundary sample points");
    o.add<double>(tr, "--p", "/p", "integrability exponent");
  }

  CLI::App* vc = sub("verify-counterexample", "series verdicts and quadrature comparison", cmd_verify_counterexample);
  add_quadrature_flags(vc, ov["verify-counterexample"]);
  {
    auto& o = ov["verify-counterexample"];
    o.add<double>(vc, "--p", "/p", "outer exponent p");
    o.add<double>(vc, "--s0", "/s0", "constant exponent s0");
    o.add<std::vector<double>>(vc, "--q", "/q", "inner exponents (repeatable)");
    o.add<std::vector<double>>(vc, "--J", "/J_ladder", "partial-sum ladder");
    o.add<std::vector<double>>(vc, "--quad-J", "/quad_J", "quadrature cutoffs eps = 4^-J");
    o.add<std::string>(vc, "--convention", "/convention", "shifted | min_max");
    o.add_flag(vc, "--damped", "/damped", "amplitudes 1/ln(j+1)");
    o.add<bool>(vc, "--quadrature", "/quadrature", "run the quadrature comparison (default true)");
  }

  CLI::App* rp = sub("emit-region-plot", "admissibility masks and level curves in the (p, s) plane", cmd_emit_region_plot);
  {
    auto& o = ov["emit-region-plot"];
    o.add<double>(rp, "--theta0", "/theta0", "cusp exponent");
    o.add<double>(rp, "--H", "/H", "wedge height used for t");
    o.add<double>(rp, "--t", "/t", "boundary dimension (overrides H)");
    o.add<int>(rp, "--n", "/n", "ambient dimension");
    o.add<std::vector<double>>(rp, "--p-range", "/p_range", "p min and max");
    o.add<std::vector<double>>(rp, "--s-range", "/s_range", "s min and max");
    o.add<int>(rp, "--resolution", "/resolution", "grid points per axis");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string name;
  for (auto& [k, v] : cmds)
    if (v.first->parsed()) name = k;
  try {
    json cfg = default_config(name);
    if (!common.config.empty()) {
      json file = load_json_arg(common.config, "--config");
      if (!file.is_object()) throw UsageError("--config: expected a JSON object at the root");
      cfg.merge_patch(file);
    }
    ov[name].apply(cfg);
    Outputs out;
    json result = cmds[name].second(cfg, common, out);
    const std::string dir = output_dir(common);
    fs::create_directories(dir);
    for (auto& [file, body] : out.files) {
      std::ofstream f(fs::path(dir) / file, std::ios::binary);
      f << body;
    }
    std::ofstream f(fs::path(dir) / (name + ".json"), std::ios::binary);
    f << dump_artifact(make_artifact(name, cfg, common.seed, std::move(result)), utc_timestamp());
    if (!f) throw ResourceError("cannot write artifacts to " + dir);
    log << name << ": wrote " << (out.files.size() + 1) << " artifact(s) to " << dir << "\n";
    return out.status;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return exit_code(e.error_class());
  } catch (const json::exception& e) {
    log << "error: config: " << e.what() << "\n";
    return 2;
  } catch (const std::bad_alloc&) {
    log << "error: out of memory\n";
    return 4;
  }
}

}  // namespace nlfrac::cli
