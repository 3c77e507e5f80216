#pragma once

#include <map>
#include <queue>
#include <unordered_map>

#include "measure.hpp"
#include "trace.hpp"

namespace nlfrac {

enum class Hypothesis { H1, H2, H3prime, H3dprime };

inline const char* to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::H1: return "H1";
    case Hypothesis::H2: return "H2";
    case Hypothesis::H3prime: return "H3prime";
    case Hypothesis::H3dprime: return "H3dprime";
  }
  return "?";
}

struct BoundaryPoint {
  Point2 x;
  bool cusp = false;  // the cusp of U0 or one of its images
  std::string label;
};

struct Evidence {
  std::size_t sample = 0;
  double scale = 0;      // delta or rho
  double parameter = 0;  // lambda, epsilon, ... depending on the check
  bool ok = false;
  Point2 witness;
  double value = 0;      // measured quantity (d(x), path length, alpha envelope)
  double threshold = 0;  // bound it was compared with
};

struct HypothesisReport {
  Hypothesis hypothesis = Hypothesis::H1;
  bool pass = false;
  std::map<std::string, double> constants;
  std::vector<Evidence> evidence;
  std::vector<std::size_t> failed_samples;
  std::vector<std::string> notes;
};

using ThetaFn = std::function<double(const BoundaryPoint&)>;

inline ThetaFn theta_constant(double th) {
  return [th](const BoundaryPoint&) { return th; };
}
// theta0 at cusp points, 1 elsewhere
inline ThetaFn theta_cusp(double theta0) {
  return [theta0](const BoundaryPoint& b) { return b.cusp ? theta0 : 1.0; };
}

// Polygon vertices picked by seed (endpoints for intervals).
inline std::vector<BoundaryPoint> vertex_samples(const DomainApprox& dom, std::size_t n, std::uint64_t seed) {
  const auto& V = dom.boundary().vertices;
  std::vector<BoundaryPoint> out;
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < n; ++i) out.push_back({V[static_cast<std::size_t>(gen() % V.size())], false, "vertex"});
  return out;
}

// Cusp images f_{i*}(P) for grouped sets of norm <= max_norm, then polygon vertices picked by seed.
inline std::vector<BoundaryPoint> prickly_boundary_samples(const PricklySystem& sys, const DomainApprox& dom,
                                                           std::size_t n_generic, std::uint64_t seed,
                                                           int max_norm = 3) {
  std::vector<BoundaryPoint> out;
  out.push_back({sys.cusp(), true, "cusp"});
  GroupGeometry geo(sys, 4);
  auto roots = geo.roots();
  std::vector<GroupNode> stack(roots.begin(), roots.end());
  std::vector<Point2> tips;
  while (!stack.empty()) {
    GroupNode g = stack.back();
    stack.pop_back();
    if (g.norm > max_norm) continue;
    for (auto& c : geo.children(g)) {
      if (c.level == 0 && c.ip == 3) tips.push_back(c.frame(sys.cusp()));
      stack.push_back(c);
    }
  }
  // the polygon must contain the tip as a vertex to represent it faithfully
  const auto& V = dom.boundary().vertices;
  for (auto& t : tips) {
    double best = std::numeric_limits<double>::infinity();
    Point2 bv;
    for (auto& v : V)
      if (dist(v, t) < best) { best = dist(v, t); bv = v; }
    if (best < 1e-9) out.push_back({bv, true, "cusp-image"});
  }
  auto generic = vertex_samples(dom, n_generic, seed);
  out.insert(out.end(), generic.begin(), generic.end());
  return out;
}

// Wedge cusp followed by seeded polygon vertices.
inline std::vector<BoundaryPoint> wedge_boundary_samples(const DomainApprox& dom, std::size_t n_generic,
                                                         std::uint64_t seed) {
  std::vector<BoundaryPoint> out{{{0.0, 0.0}, true, "cusp"}};
  auto generic = vertex_samples(dom, n_generic, seed);
  out.insert(out.end(), generic.begin(), generic.end());
  return out;
}

// ---------------------------------------------------------------------------
// (H1)

struct H1Options {
  int candidates = 256;
  int cone_rays = 32;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

inline HypothesisReport check_h1(const DomainApprox& d, const std::vector<BoundaryPoint>& samples,
                                 const ThetaFn& theta_fn, double eta0, double lambda0,
                                 const std::vector<double>& delta_ladder, const H1Options& opt = {}) {
  if (!(eta0 > 0 && eta0 < 1) || !(lambda0 > 0 && lambda0 < 1)) throw DomainError("check_h1: eta0, lambda0 must lie in (0,1)");
  if (delta_ladder.empty()) throw DomainError("check_h1: empty delta ladder");
  HypothesisReport rep;
  rep.hypothesis = Hypothesis::H1;
  rep.constants["eta0"] = eta0;
  rep.constants["lambda0"] = lambda0;
  rep.constants["delta_gamma"] = *std::max_element(delta_ladder.begin(), delta_ladder.end());
  const auto& pts = detail::sobol_cache(static_cast<std::size_t>(opt.candidates), opt.seed);
  std::vector<std::vector<Evidence>> per(samples.size());
  std::vector<std::vector<Point2>> cones(samples.size());
  parallel_for(samples.size(), opt.jobs, [&](std::size_t i) {
    const Point2 xb = samples[i].x;
    const double th = theta_fn(samples[i]);
    cones[i] = detail::interior_cone_directions(d, xb, opt.cone_rays);
    for (double delta : delta_ladder) {
      const double ri = eta0 * delta, ro = delta;
      const double need = std::pow(eta0 * delta, th);
      Evidence ev;
      ev.sample = i;
      ev.scale = delta;
      ev.parameter = th;
      ev.threshold = need;
      ev.value = 0;
      for (const Point2& x : detail::annulus_candidates(d, xb, ri, ro, pts, cones[i])) {
        double r = dist(x, xb);
        if (!(r > ri && r < ro) || !d.is_inside(x)) continue;
        double dx = d.distance(x);
        if (!(dx > std::pow(lambda0 * r, th))) continue;  // must lie in Q_lambda0(xbar)
        if (dx > ev.value) {
          ev.value = dx;
          ev.witness = x;
        }
      }
      ev.ok = ev.value > need;
      per[i].push_back(ev);
    }
  });
  rep.pass = true;
  for (std::size_t i = 0; i < per.size(); ++i) {
    bool ok = true;
    for (auto& e : per[i]) {
      ok = ok && e.ok;
      rep.evidence.push_back(e);
    }
    if (!ok) {
      rep.failed_samples.push_back(i);
      rep.pass = false;
    }
  }
  return rep;
}

// Re-evaluates recorded H1 witnesses under relaxed parameters eta <= eta0, lambda <= lambda0.
inline bool replay_h1(const HypothesisReport& rep, const std::vector<BoundaryPoint>& samples, double eta,
                      double lambda) {
  for (auto& e : rep.evidence) {
    if (!e.ok) return false;
    const double th = e.parameter;
    double r = dist(e.witness, samples[e.sample].x);
    if (!(r > eta * e.scale && r < e.scale)) return false;
    if (!(e.value > std::pow(eta * e.scale, th))) return false;
    if (!(e.value > std::pow(lambda * r, th))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// (H2)

struct H2Options {
  int pairs = 6;            // partner points per hub
  int candidates = 512;
  std::size_t node_budget = 2000000;
  int epsilon_steps = 10;   // epsilon ladder lambda, lambda/2, ...
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

namespace detail {

// Weighted A* (heuristic scaled by w >= 1) on the 8-neighbour lattice of spacing h restricted to
// {d >= clearance}; returns a certified path length (within w of the lattice optimum) or +inf.
// Besides unit steps between free nodes, a node p may jump 2^k h along the same 8 directions while
// 2^k h <= d(p) - clearance, since d is 1-Lipschitz and the whole segment then keeps the clearance.
// Every accepted step leaves a node with d >= clearance >= 4h, so it never crosses the boundary and
// only the endpoints need an inside test. Start from the shallower endpoint: a trapped pocket is then
// exhausted quickly.
inline double grid_geodesic(const DomainApprox& d, Point2 a, Point2 b, double h, double clearance, double max_len,
                            std::size_t budget, bool& exhausted, double w = 1.0) {
  exhausted = false;
  const Point2 o = a;
  auto key = [](long i, long j) { return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) | static_cast<std::uint32_t>(j); };
  auto pos = [&](long i, long j) { return Point2{o.x + i * h, o.y + j * h}; };
  std::unordered_map<std::uint64_t, double> dcache;
  auto depth = [&](long i, long j) {
    auto k = key(i, j);
    auto it = dcache.find(k);
    if (it != dcache.end()) return it->second;
    double v = d.distance(pos(i, j));
    dcache.emplace(k, v);
    return v;
  };
  if (!d.is_inside(a) || !d.is_inside(b)) return std::numeric_limits<double>::infinity();
  const double room_b = d.distance(b) - clearance;
  if (depth(0, 0) < clearance || room_b < 0) return std::numeric_limits<double>::infinity();
  std::unordered_map<std::uint64_t, double> g;
  using Item = std::tuple<double, double, long, long>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  auto heur = [&](long i, long j) { return dist(pos(i, j), b); };
  g[key(0, 0)] = 0;
  open.push({w * heur(0, 0), 0.0, 0, 0});
  const double diag = std::sqrt(2.0);
  while (!open.empty()) {
    auto [f, gc, i, j] = open.top();
    open.pop();
    if (gc > g[key(i, j)]) continue;
    const double to_b = heur(i, j);
    if (gc + to_b > max_len) continue;  // no continuation can stay within the length bound
    const double room = depth(i, j) - clearance;
    if (to_b <= room + room_b) return gc + to_b;  // the balls of radius room around both ends overlap
    if (dcache.size() > budget) {
      exhausted = true;
      return std::numeric_limits<double>::infinity();
    }
    int kmax = 0;
    while (std::ldexp(h, kmax + 1) * diag <= room && kmax < 40) ++kmax;
    const int ks[4] = {0, kmax - 2, kmax - 1, kmax};
    for (int q = 0; q < 4; ++q) {
      const int k = ks[q];
      if ((q > 0 && k <= 0) || (q > 0 && k == ks[q - 1])) continue;
      const long step = 1L << k;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (!di && !dj) continue;
          long ni = i + di * step, nj = j + dj * step;
          const double len = step * h * ((di && dj) ? diag : 1.0);
          if (k == 0) {
            if (depth(ni, nj) < clearance) continue;
          } else if (len > room) {
            continue;
          }
          double ng = gc + len;
          auto kk = key(ni, nj);
          auto it = g.find(kk);
          if (it != g.end() && it->second <= ng) continue;
          g[kk] = ng;
          open.push({ng + w * heur(ni, nj), ng, ni, nj});
        }
    }
  }
  return std::numeric_limits<double>::infinity();
}

// Fast weighted search first; the exact search only runs when the weighted length could hide a pass.
inline double grid_geodesic_bounded(const DomainApprox& d, Point2 a, Point2 b, double h, double clearance,
                                    double max_len, std::size_t budget, bool& exhausted) {
  const double w = 1.5;
  double len = grid_geodesic(d, a, b, h, clearance, max_len, budget, exhausted, w);
  if (exhausted || len <= max_len) return len;
  return grid_geodesic(d, a, b, h, clearance, max_len, budget, exhausted, 1.0);
}

}  // namespace detail

inline HypothesisReport check_h2(const DomainApprox& d, const std::vector<BoundaryPoint>& samples,
                                 const ThetaFn& theta_fn, double C_gamma, const std::vector<double>& lambda_ladder,
                                 const std::vector<double>& rho_ladder, int grid_res, const H2Options& opt = {}) {
  if (!(C_gamma >= 1)) throw DomainError("check_h2: C_gamma must be >= 1");
  if (lambda_ladder.empty() || rho_ladder.empty()) throw DomainError("check_h2: empty ladder");
  if (grid_res < 4) throw DomainError("check_h2: grid_res must be >= 4");
  HypothesisReport rep;
  rep.hypothesis = Hypothesis::H2;
  rep.constants["C_gamma"] = C_gamma;
  const auto& cand = detail::sobol_cache(static_cast<std::size_t>(opt.candidates), opt.seed + 17);
  const double two_pi = 2.0 * std::acos(-1.0);
  std::vector<double> lambdas = lambda_ladder;
  std::sort(lambdas.begin(), lambdas.end());
  // eps_fit[i][l]: largest epsilon that worked for sample i at lambda l, 0 if none
  std::vector<std::vector<double>> eps_fit(samples.size(), std::vector<double>(lambdas.size(), 0.0));
  std::vector<std::vector<Evidence>> per(samples.size());
  std::vector<std::string> errors(samples.size());
  parallel_for(samples.size(), opt.jobs, [&](std::size_t si) {
    const Point2 xb = samples[si].x;
    const double th = theta_fn(samples[si]);
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      const double lam = lambdas[li];
      double eps_ok = std::numeric_limits<double>::infinity();
      for (double rho : rho_ladder) {
        const double floor_d = std::pow(lam * rho, th);
        std::vector<std::pair<double, Point2>> adm;
        for (auto& c : cand) {
          Point2 x;
          if (d.is_1d()) {
            x = {xb.x + (2 * c.x - 1) * rho, 0.0};
          } else {
            double r = rho * std::sqrt(c.x);
            x = {xb.x + r * std::cos(two_pi * c.y), xb.y + r * std::sin(two_pi * c.y)};
          }
          if (!(dist(x, xb) < rho) || !d.is_inside(x)) continue;
          double dx = d.distance(x);
          if (dx >= floor_d) adm.push_back({dx, x});
        }
        if (adm.size() < 2) continue;
        std::sort(adm.begin(), adm.end(), [](auto& a, auto& b) { return a.first > b.first; });
        Point2 hub = adm.front().second;
        // partners spread out: farthest-first from the hub
        std::vector<Point2> partners;
        std::vector<std::pair<double, Point2>> rest(adm.begin() + 1, adm.end());
        std::sort(rest.begin(), rest.end(), [&](auto& a, auto& b) { return dist(a.second, hub) > dist(b.second, hub); });
        for (std::size_t k = 0; k < rest.size() && partners.size() < static_cast<std::size_t>(opt.pairs);
             k += std::max<std::size_t>(1, rest.size() / opt.pairs))
          partners.push_back(rest[k].second);
        const double min_d = std::min(adm.back().first, adm.front().first);
        double eps = lam;
        double found = 0;
        for (int step = 0; step < opt.epsilon_steps; ++step, eps *= 0.5) {
          const double clearance = eps * std::pow(rho, th);
          if (clearance > min_d) continue;  // endpoints themselves must clear the bound
          const double h = std::min(2.0 * rho / grid_res, clearance / 4.0);
          bool all = true, exhausted = false;
          double worst = 0;
          for (auto& x2 : partners) {
            double len = detail::grid_geodesic_bounded(d, x2, hub, h, clearance, C_gamma * rho, opt.node_budget, exhausted);
            if (exhausted) break;
            worst = std::max(worst, len);
            if (!(len <= C_gamma * rho)) { all = false; break; }
          }
          if (exhausted) {
            errors[si] = "check_h2: grid node budget exhausted";
            break;
          }
          Evidence ev;
          ev.sample = si;
          ev.scale = rho;
          ev.parameter = eps;
          ev.ok = all;
          ev.value = worst;
          ev.threshold = C_gamma * rho;
          per[si].push_back(ev);
          if (all) { found = eps; break; }
        }
        eps_ok = std::min(eps_ok, found);
      }
      eps_fit[si][li] = std::isfinite(eps_ok) ? eps_ok : 0.0;
    }
  });
  for (auto& e : errors)
    if (!e.empty()) throw ResolutionError(e);
  rep.pass = true;
  for (std::size_t si = 0; si < samples.size(); ++si) {
    for (auto& e : per[si]) rep.evidence.push_back(e);
    bool ok = true;
    for (double e : eps_fit[si]) ok = ok && e > 0;
    if (!ok) {
      rep.failed_samples.push_back(si);
      rep.pass = false;
    }
  }
  // epsilon_lambda: worst over samples, then made monotone in lambda
  std::vector<double> raw(lambdas.size(), std::numeric_limits<double>::infinity());
  for (auto& row : eps_fit)
    for (std::size_t li = 0; li < lambdas.size(); ++li) raw[li] = std::min(raw[li], row[li]);
  double run = std::numeric_limits<double>::infinity();
  for (std::size_t li = lambdas.size(); li-- > 0;) {
    if (raw[li] > run) rep.notes.push_back("epsilon_lambda not monotone in lambda; running minimum applied");
    run = std::min(run, raw[li]);
    std::ostringstream k;
    k << "epsilon_lambda[" << lambdas[li] << "]";
    rep.constants[k.str()] = run;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// (H3)

struct H3Result {
  HypothesisReport h3_dprime;  // inf over samples of alpha at delta_gamma
  HypothesisReport h3_prime;   // per-sample delta -> 0 limit
};

inline H3Result check_h3(const ExponentField& s, const DomainApprox& d, const std::vector<BoundaryPoint>& samples,
                         const ThetaFn& theta_fn, double p, int n, double t, double delta_gamma,
                         const QuadratureSpec& spec, int ladder_steps = 4) {
  if (!(delta_gamma > 0)) throw DomainError("check_h3: delta_gamma must be positive");
  H3Result r;
  r.h3_dprime.hypothesis = Hypothesis::H3dprime;
  r.h3_prime.hypothesis = Hypothesis::H3prime;
  std::vector<double> ladder;
  for (int k = 0; k < ladder_steps; ++k) ladder.push_back(delta_gamma * std::pow(0.5, k));
  double inf_alpha = std::numeric_limits<double>::infinity();
  r.h3_prime.pass = true;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double th = theta_fn(samples[i]);
    auto L = alpha_envelope_ladder(s, th, samples[i].x, ladder, p, n, d, spec);
    inf_alpha = std::min(inf_alpha, L.values.front());
    Evidence e1{i, delta_gamma, th, L.values.front() > -t, samples[i].x, L.values.front(), -t};
    r.h3_dprime.evidence.push_back(e1);
    if (!e1.ok) r.h3_dprime.failed_samples.push_back(i);
    Evidence e2{i, ladder.back(), th, L.limit > -t, samples[i].x, L.limit, -t};
    r.h3_prime.evidence.push_back(e2);
    if (!e2.ok) {
      r.h3_prime.failed_samples.push_back(i);
      r.h3_prime.pass = false;
    }
  }
  r.h3_dprime.pass = inf_alpha > -t;
  r.h3_dprime.constants["alpha_gamma"] = inf_alpha;
  r.h3_dprime.constants["delta_gamma"] = delta_gamma;
  r.h3_prime.constants["delta_min"] = ladder.back();
  std::ostringstream os;
  os << "sampled, not proven: verdict covers all " << samples.size() << " samples";
  r.h3_prime.notes.push_back(os.str());
  r.h3_dprime.notes.push_back(os.str());
  return r;
}

// ---------------------------------------------------------------------------
// Example series

enum class SeriesKind { convergent, divergent };

inline const char* to_string(SeriesKind k) { return k == SeriesKind::convergent ? "convergent" : "divergent"; }

struct PartialSum {
  long J = 0;
  double value = 0;      // may be +inf when it overflows; log_value stays finite
  double log_value = 0;  // natural log
  double bound = 0;      // (1/5)^p sum 1/(j ln^2(j+2)) up to J
};

struct SeriesVerdict {
  double q = 1;
  std::vector<PartialSum> partial_sums;
  SeriesKind verdict = SeriesKind::convergent;
  double growth_fit = 0;         // slope of log S vs log J over the tail of the ladder
  double last_increment = 0;     // (S(J_last) - S(J_prev)) / S(J_last)
  bool increments_shrink = false;
  bool within_bound = true;      // S_J <= bound_J for q = 1
};

// Running sum of positive terms given by their logarithms, robust to overflow.
class LogSum {
 public:
  void add_log(double lt) {
    if (!init_) {
      m_ = lt;
      init_ = true;
    }
    if (lt > m_ + 600) {
      double f = std::exp(m_ - lt);
      double v = acc_.value() * f;
      acc_ = NeumaierSum();
      acc_.add(v);
      m_ = lt;
    }
    acc_.add(std::exp(lt - m_));
  }
  double log_value() const { return init_ ? m_ + std::log(acc_.value()) : -std::numeric_limits<double>::infinity(); }
  double value() const { return std::exp(log_value()); }

 private:
  NeumaierSum acc_;
  double m_ = 0;
  bool init_ = false;
};

inline double counterexample_log_term(const CounterexampleSpec& spec, double q, long j) {
  const double p = spec.p, s0 = spec.s0, jj = static_cast<double>(j);
  double log_a = -jj * (s0 - 1.0 / p) * std::log(4.0) - std::log(5.0) - std::log(jj) / p -
                 (2.0 / p) * std::log(std::log(jj + 2.0));
  return (p / q) * log_a + jj * (s0 * p - 1.0) * std::log(4.0);
}

inline SeriesVerdict counterexample_series(const CounterexampleSpec& spec, double q, std::vector<long> J_ladder,
                                           double convergence_slope = 0.05) {
  if (!(q >= 1)) throw DomainError("counterexample_series: q must be >= 1");
  if (!(spec.p >= 1.0) || !(spec.s0 * spec.p >= 1.0 - 1e-15)) throw DomainError("counterexample_series: invalid spec");
  if (J_ladder.size() < 2) throw DomainError("counterexample_series: need at least two ladder entries");
  std::sort(J_ladder.begin(), J_ladder.end());
  SeriesVerdict v;
  v.q = q;
  LogSum S;
  NeumaierSum B;
  const double bscale = std::pow(0.2, spec.p);
  long j = 0;
  for (long J : J_ladder) {
    if (J < 1) throw DomainError("counterexample_series: J must be >= 1");
    for (++j; j <= J; ++j) {
      S.add_log(counterexample_log_term(spec, q, j));
      double jj = static_cast<double>(j), l = std::log(jj + 2.0);
      B.add(bscale / (jj * l * l));
    }
    --j;
    v.partial_sums.push_back({J, S.value(), S.log_value(), B.value()});
  }
  std::vector<double> lx, ly;
  for (auto& ps : v.partial_sums) {
    lx.push_back(std::log(static_cast<double>(ps.J)));
    ly.push_back(ps.log_value);
  }
  std::vector<double> ex(ly.size());
  for (std::size_t i = 0; i < ly.size(); ++i) ex[i] = std::exp(std::min(ly[i], 700.0));
  v.growth_fit = tail_slope(lx, ex);
  if (!std::isfinite(v.growth_fit) || ly.back() > 700) {
    std::size_t k = ly.size();
    v.growth_fit = (ly[k - 1] - ly[k - 2]) / (lx[k - 1] - lx[k - 2]);
  }
  const auto& a = v.partial_sums[v.partial_sums.size() - 2];
  const auto& b = v.partial_sums.back();
  v.last_increment = -std::expm1(a.log_value - b.log_value);
  // increments over successive ladder intervals, normalised by interval length in log J
  v.increments_shrink = true;
  for (std::size_t i = 2; i < v.partial_sums.size(); ++i) {
    double d1 = (v.partial_sums[i - 1].log_value - v.partial_sums[i - 2].log_value) / (lx[i - 1] - lx[i - 2]);
    double d2 = (v.partial_sums[i].log_value - v.partial_sums[i - 1].log_value) / (lx[i] - lx[i - 1]);
    if (!(d2 < d1)) v.increments_shrink = false;
  }
  if (q == 1.0)
    for (auto& ps : v.partial_sums) v.within_bound = v.within_bound && ps.value <= ps.bound * (1 + 1e-12);
  v.verdict = (v.increments_shrink && v.growth_fit < convergence_slope) ? SeriesKind::convergent : SeriesKind::divergent;
  return v;
}

struct QuadratureComparison {
  double q = 1;
  std::string convention;
  std::vector<long> J;
  std::vector<double> eps, quadrature, quad_error, series, lower, upper;
  std::vector<char> inside;
  double quadrature_growth = 0;  // slope of log nu vs log J over the tail
  double series_growth = 0;
  bool consistent = true;        // every value inside its sandwich up to quadrature error
};

inline QuadratureComparison counterexample_quadrature(const CounterexampleSpec& spec, double q,
                                                      const std::vector<long>& J_ladder, QuadratureSpec qs) {
  if (!(q >= 1)) throw DomainError("counterexample_quadrature: q must be >= 1");
  spec.validate();
  QuadratureComparison c;
  c.q = q;
  c.convention = to_string(spec.convention);
  auto u = counterexample_field(spec);
  auto dom = interval_domain(0.0, 2.0);
  auto s = variable_exponent_field(ExponentFormula::constant(spec.s0));
  const double p = spec.p;
  const double lower_c = std::pow(0.125, spec.s0 * p + p / q);
  std::vector<long> Js = J_ladder;
  std::sort(Js.begin(), Js.end());
  std::vector<double> lx, qv, sv;
  for (long J : Js) {
    if (J < 1 || J > spec.J_max) throw DomainError("counterexample_quadrature: J must lie in [1, J_max]");
    qs.eps_cut = std::pow(4.0, -static_cast<double>(J));
    NuResult r = nu_pq(u, s, p, q, Region::interval(0.0, 1.0), dom, qs);
    LogSum S;
    for (long j = 1; j <= J; ++j) S.add_log(counterexample_log_term(spec, q, j));
    double ser = S.value();
    c.J.push_back(J);
    c.eps.push_back(qs.eps_cut);
    c.quadrature.push_back(r.value);
    c.quad_error.push_back(r.error);
    c.series.push_back(ser);
    c.lower.push_back(lower_c * ser);
    c.upper.push_back(ser);
    bool in = r.value + r.error >= lower_c * ser && r.value - r.error <= ser;
    c.inside.push_back(in);
    c.consistent = c.consistent && in;
    lx.push_back(std::log(static_cast<double>(J)));
    qv.push_back(r.value);
    sv.push_back(ser);
  }
  if (lx.size() >= 2) {
    c.quadrature_growth = tail_slope(lx, qv);
    c.series_growth = tail_slope(lx, sv);
  }
  return c;
}

}  // namespace nlfrac
