// Acceptance harness: one PASS/FAIL line per criterion.
//   nlfrac_acceptance            run all criteria
//   nlfrac_acceptance 4 8        run selected criteria
//   nlfrac_acceptance --cli PATH override the CLI binary used by criterion 12

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <unistd.h>

#include <nlfrac/io.hpp>

#ifndef NLFRAC_CLI_PATH
#define NLFRAC_CLI_PATH "nlfrac"
#endif

using namespace nlfrac;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string cli_path = NLFRAC_CLI_PATH;

// 1. dimension solver against the closed forms
Outcome c01() {
  const double koch = std::log(4.0) / std::log(3.0);
  auto t0 = Clock::now();
  const double t1 = hausdorff_dimension(1.0);
  const double dt1 = seconds_since(t0);
  t0 = Clock::now();
  const double t2 = hausdorff_dimension((1.0 + std::sqrt(3.0)) / 2.0);
  const double dt2 = seconds_since(t0);
  const double e1 = std::abs(t1 - koch), e2 = std::abs(t2 - 1.49936);
  const bool ok = e1 < 1e-10 && e2 < 5e-5 && dt1 < 1e-3 && dt2 < 1e-3;
  return {ok, fmt("t(1)=%.12f err=%.1e; t((1+sqrt3)/2)=%.6f err=%.1e; %.1f us, %.1f us", t1, e1, t2, e2, dt1 * 1e6,
                  dt2 * 1e6)};
}

// 2. box counting on the Koch attractor, pieces of norm <= 10
Outcome c02() {
  auto t0 = Clock::now();
  auto sys = PricklySystem::build(1.0, std::sqrt(3.0) / 2.0);
  auto pts = sys.attractor_points(std::pow(3.0, -10) * (1 + 1e-9));
  std::vector<double> scales;
  for (int k = 2; k <= 7; ++k) scales.push_back(std::pow(3.0, -k));
  const double D = box_counting_dimension(pts, scales);
  const double err = std::abs(D - std::log(4.0) / std::log(3.0));
  const double dt = seconds_since(t0);
  return {err < 0.05 && pts.size() >= 10000 && dt < 30,
          fmt("L=%.3g points=%zu D=%.4f err=%.4f; %.2f s", sys.L(), pts.size(), D, err, dt)};
}

// 3. successor masses sum to the parent mass
Outcome c03() {
  auto t0 = Clock::now();
  const double t = PricklySystem::build(2.0, 0.6).t();
  std::mt19937_64 gen(20240521);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    CompositeIndex c;
    const int entries = 1 + static_cast<int>(gen() % 4);
    for (int e = 0; e < entries; ++e) {
      Index i{3 + static_cast<int>(gen() % 2), {}};
      const int tail = static_cast<int>(gen() % 5);
      for (int k = 0; k < tail; ++k) i.tail.push_back(static_cast<std::uint8_t>(1 + gen() % 2));
      c.entries.push_back(i);
    }
    const double parent = group_mass(c, t);
    NeumaierSum sum;
    for (int k = 1; k <= 4; ++k) sum.add(group_mass(c.child(k), t));
    worst = std::max(worst, std::abs(sum.value() - parent) / parent);
  }
  const double dt = seconds_since(t0);
  return {worst < 1e-10 && dt < 1, fmt("100 parents, max relative error %.2e; %.3f s", worst, dt)};
}

// 4. Ahlfors scan on the prickly boundary
Outcome c04() {
  auto t0 = Clock::now();
  auto sys = PricklySystem::build(2.0, 0.6);
  GroupGeometry geo(sys);
  std::vector<double> radii;
  for (int k = 2; k <= 7; ++k) radii.push_back(std::pow(3.0, -k));
  auto run = [&] { return ahlfors_scan(geo, boundary_centers(sys, 20, 7, 1e-3), radii, 1e3, default_jobs()); };
  auto a = run();
  auto b = run();
  const bool same = a.A_certified == b.A_certified && a.A_estimate == b.A_estimate && a.upper_const == b.upper_const &&
                    a.lower_const == b.lower_const;
  const double dt = seconds_since(t0);
  const bool ok = a.pass && std::isfinite(a.A_certified) && a.A_certified < 1e3 && same && dt < 120;
  return {ok, fmt("t=%.5f samples=%zu A_certified=%.3f A_estimate=%.3f reproducible=%d; %.2f s", a.t, a.samples.size(),
                  a.A_certified, a.A_estimate, int(same), dt)};
}

// 5. closed-form 1D seminorms of u(x) = x on (0,2)
Outcome c05() {
  auto dom = interval_domain(0.0, 2.0);
  ScalarField u([](Point2 x) { return x.x; }, Regularity::smooth, "x");
  auto s = variable_exponent_field(ExponentFormula::constant(1.0));
  QuadratureSpec q;
  auto t0 = Clock::now();
  auto r1 = nu(u, s, 1.0, Region::whole(), dom, q);
  const double dt1 = seconds_since(t0);
  t0 = Clock::now();
  auto r2 = nu(u, s, 2.0, Region::whole(), dom, q);
  const double dt2 = seconds_since(t0);
  const double e1 = std::abs(r1.value - 0.5), e2 = std::abs(r2.value - 0.125);
  return {e1 < 1e-3 && e2 < 1e-3 && dt1 < 5 && dt2 < 5,
          fmt("p=1: %.7f err=%.1e; p=2: %.7f err=%.1e; %.2f s, %.2f s", r1.value, e1, r2.value, e2, dt1, dt2)};
}

// 6. power-mean ordering of the two seminorms
Outcome c06() {
  auto t0 = Clock::now();
  struct Case { ScalarField u; const DomainApprox* d; double p; };
  QuadratureSpec q1, q2;
  q1.eps_cut = 1e-4;
  q2.eps_cut = 2e-2;
  auto I = interval_domain(0.0, 2.0);
  auto W = wedge_domain(2.0, 0.6);
  auto s1 = variable_exponent_field(ExponentFormula::constant(0.5));
  std::vector<Case> cases;
  for (double p : {1.0, 2.0}) {
    cases.push_back({ScalarField([](Point2 x) { return x.x; }, Regularity::smooth, "x"), &I, p});
    cases.push_back({ScalarField([](Point2 x) { return std::sin(3 * x.x); }, Regularity::smooth, "sin3x"), &I, p});
    cases.push_back({ScalarField([](Point2 x) { return std::sqrt(x.x); }, Regularity::smooth, "sqrtx"), &I, p});
    cases.push_back({counterexample_field(CounterexampleSpec{}), &I, p});
    cases.push_back({ScalarField([](Point2 x) { return x.x + x.y; }, Regularity::smooth, "x+y"), &W, p});
    cases.push_back({ScalarField([](Point2 x) { return x.x * x.x - x.y; }, Regularity::smooth, "x2-y"), &W, p});
  }
  int checks = 0, violations = 0;
  double worst = -1e300;
  for (auto& c : cases) {
    const QuadratureSpec& q = c.d->is_1d() ? q1 : q2;
    auto base = nu(c.u, s1, c.p, Region::whole(), *c.d, q);
    for (double qq : {1.5, 2.0, 4.0}) {
      auto hi = nu_pq(c.u, s1, c.p, qq, Region::whole(), *c.d, q);
      ++checks;
      const double gap = (base.value - hi.value) / std::max(std::abs(hi.value), 1e-300);
      worst = std::max(worst, gap);
      if (base.value > hi.value * (1 + 1e-12) + 1e-300) ++violations;
    }
  }
  const double dt = seconds_since(t0);
  return {violations == 0 && dt < 30,
          fmt("%d comparisons, %d violations, max (nu - nu_pq)/nu_pq = %.2e; %.2f s", checks, violations, worst, dt)};
}

// 7. counterexample series: q = 1 convergent and bounded, q = 2 divergent
Outcome c07() {
  auto t0 = Clock::now();
  CounterexampleSpec cs;
  auto v1 = counterexample_series(cs, 1.0, {1000, 10000, 100000, 1000000});
  auto v2 = counterexample_series(cs, 2.0, {100, 1000, 10000, 100000});
  const auto& ps1 = v1.partial_sums;
  const double inc = (ps1.back().value - ps1.front().value) / ps1.back().value;
  const bool bounded = v1.within_bound;
  const double ratio = v2.partial_sums[2].value / v2.partial_sums[1].value;
  const double dt = seconds_since(t0);
  const bool ok = inc < 1e-3 && bounded && ratio > 2 && v2.growth_fit > 0 && dt < 10;
  return {ok, fmt("q=1: S(1e6)=%.6f bound=%.6f increment 1e3->1e6 = %.3e of total (need < 1e-3), bounded=%d; "
                  "q=2: S(1e4)/S(1e3)=%.3f growth=%.3f; %.2f s",
                  ps1.back().value, ps1.back().bound, inc, int(bounded), ratio, v2.growth_fit, dt)};
}

struct TraceRun {
  double worst_limit = 0, worst_lambda = 0, min_margin = 1e300;
  std::size_t limits = 0, missing = 0;
};

TraceRun trace_suite(const DomainApprox& pd, const ScalarField& u, double beta_pred, bool fit) {
  QuadratureSpec q;
  TraceRun r;
  for (auto& b : vertex_samples(pd, 20, 11)) {
    std::vector<double> lim;
    for (double lam : {0.2, 0.4, 0.6}) {
      auto seq = corkscrew_sequence(pd, b.x, lam, 0.5, 2.0, 24);
      if (seq.points.empty()) {
        ++r.missing;
        continue;
      }
      auto ts = trace_at(u, pd, seq, q);
      if (!ts.limit) {
        ++r.missing;
        continue;
      }
      ++r.limits;
      lim.push_back(*ts.limit);
      r.worst_limit = std::max(r.worst_limit, std::abs(*ts.limit - u(b.x)));
      if (fit) r.min_margin = std::min(r.min_margin, holder_fit(ts, beta_pred).beta_hat - beta_pred);
    }
    for (double l : lim) r.worst_lambda = std::max(r.worst_lambda, std::abs(l - lim.front()));
  }
  return r;
}

// 8. the trace of a continuous field is its boundary value
Outcome c08() {
  auto t0 = Clock::now();
  auto sys = PricklySystem::build(2.0, 0.6);
  auto pd = prickly_domain(sys, 6);
  ScalarField u([](Point2 x) { return x.x + x.y; }, Regularity::smooth, "x+y");
  auto r = trace_suite(pd, u, 0, false);
  const double dt = seconds_since(t0);
  return {r.missing == 0 && r.worst_limit < 1e-4 && r.worst_lambda < 1e-4 && dt < 120,
          fmt("%zu limits, %zu missing, max |Tu - u| = %.2e, max lambda spread = %.2e; %.2f s", r.limits, r.missing,
              r.worst_limit, r.worst_lambda, dt)};
}

// 9. Hoelder regression and observed rates against the predicted rate
Outcome c09() {
  auto t0 = Clock::now();
  std::vector<double> off, res;
  for (int k = 0; k < 20; ++k) {
    off.push_back(0.1 * std::pow(0.5, k));
    res.push_back(std::sqrt(off.back()));
  }
  const double b_syn = holder_fit(off, res, 0.5).beta_hat;
  auto sys = PricklySystem::build(2.0, 0.6);
  auto pd = prickly_domain(sys, 6);
  auto s = variable_exponent_field(ExponentFormula::constant(1.5));
  QuadratureSpec q;
  double alpha = 1e300;
  for (auto& b : vertex_samples(pd, 20, 11))
    alpha = std::min(alpha, alpha_envelope_ladder(s, 2.0, b.x, {0.1, 0.05, 0.025, 0.0125}, 2.0, 2, pd, q).limit);
  const double beta = predicted_beta(alpha, sys.t(), 2.0);
  double margin = 1e300;
  std::size_t fits = 0;
  for (auto* f : {+[](Point2 x) { return x.x + x.y; }, +[](Point2 x) { return x.x * x.x + std::sin(2 * x.y); }}) {
    auto r = trace_suite(pd, ScalarField(f, Regularity::smooth, "smooth"), beta, true);
    margin = std::min(margin, r.min_margin);
    fits += r.limits;
  }
  const double dt = seconds_since(t0);
  return {std::abs(b_syn - 0.5) < 1e-6 && margin >= 0 && dt < 30,
          fmt("synthetic beta=%.9f; predicted beta=%.4f, %zu smooth fits, min(beta_hat - predicted)=%.4f; %.2f s", b_syn,
              beta, fits, margin, dt)};
}

// 10. region masks and breakpoint continuity
Outcome c10() {
  auto t0 = Clock::now();
  const double t = PricklySystem::build(2.0, 0.6).t();
  auto g = region_grid({1.0, 4.0}, {0.0, 3.0}, 2.0, t, 2, 128);
  std::size_t violations = 0, extra = 0;
  for (std::size_t is = 0; is < g.ss.size(); ++is)
    for (std::size_t ip = 0; ip < g.ps.size(); ++ip) {
      violations += g.lebesgue_mask[is][ip] && !g.trace_mask[is][ip];
      extra += g.trace_mask[is][ip] && !g.lebesgue_mask[is][ip];
    }
  double jump = 0;
  for (auto mode : {AdmissibleMode::trace_wbp, AdmissibleMode::lebesgue}) {
    auto bp = level_curve_breakpoint(admissible_threshold(mode, 2.0, t, 2), 2.0, 2);
    jump = std::max(jump, std::abs(bp.first - bp.second));
  }
  const double dt = seconds_since(t0);
  return {violations == 0 && extra > 0 && jump < 1e-12 && dt < 1,
          fmt("grid %zux%zu, containment violations %zu, strict cells %zu, max breakpoint jump %.1e; %.3f s",
              g.ps.size(), g.ss.size(), violations, extra, jump, dt)};
}

// 11. the corkscrew condition fails with theta = 1 at cusp images
Outcome c11() {
  auto t0 = Clock::now();
  auto sys = PricklySystem::build(2.0, 0.6);
  auto pd = prickly_domain(sys, 6);
  auto S = prickly_boundary_samples(sys, pd, 30, 3);
  std::vector<double> ladder;
  for (int k = 0; k < 8; ++k) ladder.push_back(0.1 * std::pow(0.5, k));
  H1Options o;
  auto good = check_h1(pd, S, theta_constant(2.0), 0.5, 0.5, ladder, o);
  auto bad = check_h1(pd, S, theta_constant(1.0), 0.5, 0.5, ladder, o);
  std::size_t cusps = 0, cusp_fails = 0;
  for (auto& b : S) cusps += b.cusp;
  for (auto i : bad.failed_samples) cusp_fails += S[i].cusp;
  const double dt = seconds_since(t0);
  return {good.pass && good.failed_samples.empty() && cusp_fails >= 1 && dt < 120,
          fmt("%zu samples (%zu cusp images); theta=2 failures %zu; theta=1 failures %zu (%zu at cusps); %.2f s",
              S.size(), cusps, good.failed_samples.size(), bad.failed_samples.size(), cusp_fails, dt)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// 12. repeated CLI runs give identical artifacts
Outcome c12() {
  auto t0 = Clock::now();
  const fs::path root = fs::temp_directory_path() / ("nlfrac_c12_" + std::to_string(::getpid()));
  struct Run { std::string name, args; };
  const std::vector<Run> runs = {
      {"build-domain", "build-domain --kind prickly --theta0 2 --H 0.6 --depth 6"},
      {"check-hypotheses", "check-hypotheses --samples 10"},
      {"ahlfors-scan", "ahlfors-scan --centers 8 --k-max 5"},
      {"eval-seminorm", "eval-seminorm --u '{\"kind\":\"quadratic\",\"axx\":1,\"ay\":1}' --p 2 --q 2"},
      {"extract-trace", "extract-trace --u '{\"kind\":\"linear\",\"ax\":1,\"ay\":1}' --points 4"},
      {"verify-counterexample", "verify-counterexample --q 1 --q 2 --quad-J 4 --quad-J 8"},
      {"emit-region-plot", "emit-region-plot --resolution 64"},
  };
  std::size_t same = 0, total = 0;
  std::string first_diff;
  for (auto& r : runs) {
    std::vector<std::string> bodies;
    for (const char* variant : {"a --jobs 1", "b --jobs 4", "c --jobs 4"}) {
      std::string tag(variant, 1), jobs(variant + 2);
      const fs::path dir = root / (r.name + "_" + tag);
      const std::string cmd = "\"" + cli_path + "\" " + r.args + " --seed 5 " + jobs + " --out \"" + dir.string() +
                              "\" > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      (void)rc;
      const std::string text = slurp(dir / (r.name + ".json"));
      bodies.push_back(text.empty() ? std::string() : strip_timestamp(text));
    }
    ++total;
    const bool ok = !bodies[0].empty() && bodies[0] == bodies[1] && bodies[1] == bodies[2];
    same += ok;
    if (!ok && first_diff.empty()) first_diff = r.name;
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  const double dt = seconds_since(t0);
  return {same == total, fmt("%zu/%zu subcommands identical across repeats and --jobs 1/4%s%s; %.1f s", same, total,
                             first_diff.empty() ? "" : ", first mismatch: ", first_diff.c_str(), dt)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> all = {
      {"dimension solver", c01},        {"box-counting dimension", c02}, {"conformal mass conservation", c03},
      {"Ahlfors scan", c04},            {"1D seminorm closed forms", c05}, {"power-mean ordering", c06},
      {"counterexample series", c07},   {"trace identity", c08},           {"Hoelder rates", c09},
      {"region plots", c10},            {"corkscrew falsification", c11}, {"CLI determinism", c12},
  };
  std::vector<int> pick;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) {
      cli_path = argv[++i];
    } else {
      int k = std::atoi(a.c_str());
      if (k < 1 || k > 12) {
        std::cerr << "usage: nlfrac_acceptance [--cli PATH] [1..12 ...]\n";
        return 2;
      }
      pick.push_back(k);
    }
  }
  if (pick.empty())
    for (int k = 1; k <= 12; ++k) pick.push_back(k);
  int failed = 0;
  for (int k : pick) {
    Outcome o;
    try {
      o = all[k - 1].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("c%02d %s  %s: %s\n", k, o.pass ? "PASS" : "FAIL", all[k - 1].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
