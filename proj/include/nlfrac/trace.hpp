#pragma once

#include "seminorm.hpp"

namespace nlfrac {

struct CorkscrewPoint {
  int j = 0;
  Point2 x;
  double rho = 0;       // outer radius rho_j of the annulus
  double distance = 0;  // d(x_j)
  double offset = 0;    // |xbar - x_j|
};

struct CorkscrewSequence {
  Point2 base;
  double lambda = 0, eta = 0, theta = 1, rho0 = 0;
  std::vector<CorkscrewPoint> points;
  std::vector<int> missing;  // annuli without a witness
  bool violated() const { return points.empty(); }
};

struct CorkscrewOptions {
  double rho0 = 0.05;
  int candidates = 256;
  int cone_rays = 32;
  std::uint64_t seed = 1;
};

namespace detail {
inline const std::vector<Point2>& sobol_cache(std::size_t n, std::uint64_t seed) {
  thread_local std::deque<std::pair<std::pair<std::size_t, std::uint64_t>, std::vector<Point2>>> cache;
  for (auto& [k, v] : cache)
    if (k.first == n && k.second == seed) return v;
  cache.emplace_back(std::make_pair(n, seed), sobol_points(n, seed));
  return cache.back().second;
}
// Unit directions fanning across the interior cone of the polygon at xbar, when xbar is a vertex or
// lies on an edge; empty otherwise.
inline std::vector<Point2> interior_cone_directions(const DomainApprox& d, Point2 xbar, int rays) {
  std::vector<Point2> out;
  if (d.is_1d() || rays < 1) return out;
  const auto& V = d.boundary().vertices;
  const std::size_t n = V.size();
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double e = point_segment_distance(xbar, V[i], V[(i + 1) % n]);
    if (e < bd) { bd = e; best = i; }
  }
  const double scale = std::max(d.bbox().width(), d.bbox().height());
  if (bd > 1e-12 * scale) return out;
  Point2 a, b;
  if (dist(xbar, V[best]) <= 1e-12 * scale) {
    a = V[(best + n - 1) % n] - xbar;
    b = V[(best + 1) % n] - xbar;
  } else if (dist(xbar, V[(best + 1) % n]) <= 1e-12 * scale) {
    a = V[best] - xbar;
    b = V[(best + 2) % n] - xbar;
  } else {
    a = V[best] - xbar;
    b = V[(best + 1) % n] - xbar;
  }
  double t0 = std::atan2(a.y, a.x), t1 = std::atan2(b.y, b.x);
  const double two_pi = 2.0 * std::acos(-1.0);
  double sweep = std::fmod(t1 - t0 + 2 * two_pi, two_pi);  // counter-clockwise from a to b
  double probe_r = 1e-3 * std::min(norm(a), norm(b));
  double mid = t0 + 0.5 * sweep;
  if (!d.is_inside({xbar.x + probe_r * std::cos(mid), xbar.y + probe_r * std::sin(mid)})) {
    t0 = t1;
    sweep = two_pi - sweep;
  }
  for (int k = 0; k < rays; ++k) {
    double phi = t0 + sweep * (k + 0.5) / rays;
    out.push_back({std::cos(phi), std::sin(phi)});
  }
  return out;
}

// Candidate points in the annulus ri <= |x - xbar| < ro: Sobol-stratified plus cone rays.
inline std::vector<Point2> annulus_candidates(const DomainApprox& d, Point2 xbar, double ri, double ro,
                                              const std::vector<Point2>& sobol, const std::vector<Point2>& cone) {
  std::vector<Point2> out;
  out.reserve(sobol.size() + 4 * cone.size());
  const double two_pi = 2.0 * std::acos(-1.0);
  for (auto& c : sobol) {
    if (d.is_1d()) {
      double r = ri + c.x * (ro - ri);
      out.push_back({xbar.x + (c.y < 0.5 ? -r : r), 0.0});
    } else {
      double r = std::sqrt(ri * ri + c.x * (ro * ro - ri * ri));
      out.push_back({xbar.x + r * std::cos(two_pi * c.y), xbar.y + r * std::sin(two_pi * c.y)});
    }
  }
  for (auto& u : cone)
    for (double f : {0.125, 0.375, 0.625, 0.875}) out.push_back(xbar + (ri + f * (ro - ri)) * u);
  return out;
}

}  // namespace detail

// Witness per annulus rho_{j+1} <= |xbar-x| < rho_j with d(x) > (lambda |xbar-x|)^theta, maximizing d(x).
inline CorkscrewSequence corkscrew_sequence(const DomainApprox& d, Point2 xbar, double lambda, double eta, double theta,
                                            int j_max, const CorkscrewOptions& opt = {}) {
  if (!(lambda > 0 && lambda < 1)) throw DomainError("corkscrew: lambda must lie in (0,1)");
  if (!(eta > 0 && eta < 1)) throw DomainError("corkscrew: eta must lie in (0,1)");
  if (!(theta >= 1)) throw DomainError("corkscrew: theta must be >= 1");
  if (j_max < 0) throw DomainError("corkscrew: j_max must be nonnegative");
  if (!(opt.rho0 > 0) || opt.candidates < 1) throw DomainError("corkscrew: bad options");
  CorkscrewSequence seq;
  seq.base = xbar;
  seq.lambda = lambda;
  seq.eta = eta;
  seq.theta = theta;
  seq.rho0 = opt.rho0;
  const auto& pts = detail::sobol_cache(static_cast<std::size_t>(opt.candidates), opt.seed);
  const auto cone = detail::interior_cone_directions(d, xbar, opt.cone_rays);
  for (int j = 0; j <= j_max; ++j) {
    const double ro = opt.rho0 * std::pow(eta, j), ri = ro * eta;
    bool found = false;
    CorkscrewPoint best;
    for (const Point2& x : detail::annulus_candidates(d, xbar, ri, ro, pts, cone)) {
      double r = dist(x, xbar);
      if (!(r >= ri && r < ro)) continue;
      if (!d.is_inside(x)) continue;
      double dx = d.distance(x);
      if (!(dx > std::pow(lambda * r, theta))) continue;
      if (!found || dx > best.distance || (dx == best.distance && r < best.offset)) {
        best = {j, x, ro, dx, r};
        found = true;
      }
    }
    if (found)
      seq.points.push_back(best);
    else
      seq.missing.push_back(j);
  }
  return seq;
}

struct TraceSample {
  Point2 base;
  CorkscrewSequence sequence;
  std::vector<double> g_values;
  double cauchy_tail = std::numeric_limits<double>::infinity();
  std::optional<double> limit;
  std::string diagnostics;
};

inline TraceSample trace_at(const ScalarField& u, const DomainApprox& d, const CorkscrewSequence& seq,
                            QuadratureSpec spec, double tol = 1e-6) {
  if (seq.points.empty()) throw DomainError("trace_at: empty corkscrew sequence");
  TraceSample t;
  t.base = seq.base;
  t.sequence = seq;
  spec.eps_cut = std::min(spec.eps_cut, 0.5 * seq.points.back().distance);
  if (!(spec.eps_cut > 0)) spec.eps_cut = std::numeric_limits<double>::min();
  for (auto& p : seq.points) t.g_values.push_back(g_mean(u, d, p.x, spec).value);
  const std::size_t n = t.g_values.size();
  std::size_t tail = std::max<std::size_t>(3, n / 3);
  if (tail > n) tail = n;
  double tmax = 0, scale = 0;
  for (std::size_t i = n - tail; i < n; ++i) {
    scale = std::max(scale, std::abs(t.g_values[i]));
    for (std::size_t k = i + 1; k < n; ++k) tmax = std::max(tmax, std::abs(t.g_values[i] - t.g_values[k]));
  }
  t.cauchy_tail = tmax;
  if (n >= 2 && std::isfinite(tmax) && tmax < tol * std::max(1.0, scale)) {
    t.limit = t.g_values.back();
  } else {
    std::ostringstream os;
    os << "no trace: tail oscillation " << tmax << " exceeds tolerance " << tol * std::max(1.0, scale);
    t.diagnostics = os.str();
  }
  return t;
}

struct HolderFit {
  double beta_hat = 0;
  double C_hat = 0;
  double r2 = 0;
  double predicted_beta = 0;
  std::size_t scales = 0;
  bool noise_limited = false;
  bool meets_prediction = false;
};

// Fit |residual| = C rho^beta by log-log least squares.
inline HolderFit holder_fit(const std::vector<double>& offsets, const std::vector<double>& residuals,
                            double predicted_beta, double noise_floor = 1e-13) {
  if (offsets.size() != residuals.size()) throw DomainError("holder_fit: size mismatch");
  HolderFit h;
  h.predicted_beta = predicted_beta;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < offsets.size(); ++i)
    if (residuals[i] > noise_floor && offsets[i] > 0) {
      lx.push_back(std::log(offsets[i]));
      ly.push_back(std::log(residuals[i]));
    }
  h.scales = lx.size();
  if (lx.size() < 5) {
    if (offsets.size() >= 5) {
      h.noise_limited = true;
      h.beta_hat = std::numeric_limits<double>::infinity();
      h.meets_prediction = true;
      return h;
    }
    throw EstimationError("holder_fit: need at least five scales");
  }
  LinearFit f = least_squares(lx, ly);
  h.beta_hat = f.slope;
  h.C_hat = std::exp(f.intercept);
  h.r2 = f.r2;
  h.meets_prediction = h.beta_hat >= predicted_beta;
  return h;
}

// Residuals against the limit, excluding the tail where the limit error dominates (rho_j < 64 rho_J).
inline HolderFit holder_fit(const TraceSample& s, double predicted_beta, double noise_floor = 1e-13) {
  if (!s.limit) throw EstimationError("holder_fit: trace limit undefined");
  const auto& pts = s.sequence.points;
  const double rho_last = pts.back().rho;
  std::vector<double> off, res;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].rho < 64.0 * rho_last) continue;
    off.push_back(pts[i].offset);
    res.push_back(std::abs(*s.limit - s.g_values[i]));
  }
  return holder_fit(off, res, predicted_beta, noise_floor);
}

// Upper end of the valid Hoelder range, (alpha + t)/p at the given envelope value.
inline double predicted_beta(double alpha_envelope, double t, double p) { return (alpha_envelope + t) / p; }

struct MeanLadder {
  std::vector<double> rhos;
  std::vector<double> means;
  double kendall = 0;  // rank correlation of mean against rho
};

namespace detail {

// Mean of f over {x in Omega ∩ B_rho(xbar) : keep(x)} by graded polar quadrature.
template <class F, class K>
std::pair<double, double> region_mean(const DomainApprox& d, Point2 xbar, double rho, F&& f, K&& keep) {
  const Rule1D& g = gauss_rule(4);
  NeumaierSum num, den;
  const double two_pi = 2.0 * std::acos(-1.0);
  const int na = 64;
  const int shells = 40;
  for (int k = 0; k < shells; ++k) {
    double r1 = rho * std::pow(0.5, k), r0 = r1 * 0.5;
    if (k == shells - 1) r0 = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      double r = r0 + (r1 - r0) * g.nodes[i];
      if (d.is_1d()) {
        double w = g.weights[i] * (r1 - r0);
        for (double sgn : {-1.0, 1.0}) {
          Point2 x{xbar.x + sgn * r, 0.0};
          if (!d.is_inside(x) || !keep(x)) continue;
          num.add(w * f(x));
          den.add(w);
        }
        continue;
      }
      double w = g.weights[i] * (r1 - r0) * r * two_pi / na;
      for (int a = 0; a < na; ++a) {
        double phi = two_pi * (a + 0.5 * (k % 2)) / na;
        Point2 x{xbar.x + r * std::cos(phi), xbar.y + r * std::sin(phi)};
        if (!d.is_inside(x) || !keep(x)) continue;
        num.add(w * f(x));
        den.add(w);
      }
    }
  }
  return {num.value(), den.value()};
}

template <class K>
MeanLadder mean_ladder(const ScalarField& u, const DomainApprox& d, Point2 xbar, double Tu, double p,
                       std::vector<double> rhos, K&& keep) {
  if (!(p >= 1)) throw DomainError("mean ladder: p must be >= 1");
  if (rhos.empty()) throw DomainError("mean ladder: empty radius ladder");
  std::sort(rhos.begin(), rhos.end(), std::greater<>());
  MeanLadder L;
  for (double rho : rhos) {
    if (!(rho > 0)) throw DomainError("mean ladder: radii must be positive");
    auto [num, den] = region_mean(d, xbar, rho, [&](Point2 x) { return std::pow(std::abs(Tu - u(x)), p); },
                                  [&](Point2 x) { return keep(x, rho); });
    if (!(den > 0)) throw ResolutionError("mean ladder: region is empty at the sampled resolution");
    L.rhos.push_back(rho);
    L.means.push_back(num / den);
  }
  L.kendall = kendall_tau(L.rhos, L.means);
  return L;
}

}  // namespace detail

inline MeanLadder lebesgue_point_check(const ScalarField& u, const DomainApprox& d, Point2 xbar, double Tu, double p,
                                       const std::vector<double>& rho_ladder) {
  return detail::mean_ladder(u, d, xbar, Tu, p, rho_ladder, [](Point2, double) { return true; });
}

inline MeanLadder corkscrew_region_means(const ScalarField& u, const DomainApprox& d, Point2 xbar, double lambda,
                                         const std::vector<double>& rho_ladder, double p, double Tu,
                                         double theta = 1.0) {
  if (!(lambda > 0 && lambda < 1)) throw DomainError("corkscrew_region_means: lambda must lie in (0,1)");
  return detail::mean_ladder(u, d, xbar, Tu, p, rho_ladder, [&](Point2 x, double) {
    return d.distance(x) > std::pow(lambda * dist(x, xbar), theta);
  });
}

// ---------------------------------------------------------------------------
// Sobolev-Slobodeckij seminorm on the boundary

struct BoundarySample {
  Point2 x;
  double value = 0;
  double weight = 0;
};

inline double sobolev_slobodeckij_seminorm(const std::vector<BoundarySample>& samples, double beta, double p, double t) {
  if (!(p >= 1)) throw DomainError("sobolev_slobodeckij: p must be >= 1");
  if (!(beta > 0 && beta < 1)) throw DomainError("sobolev_slobodeckij: beta must lie in (0,1)");
  const double e = t + beta * p;
  NeumaierSum acc;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < samples.size(); ++j) {
      if (i == j) continue;
      double r = dist(samples[i].x, samples[j].x);
      if (!(r > 0)) throw DegeneratePairError("sobolev_slobodeckij: coincident sample points");
      double dv = std::abs(samples[i].value - samples[j].value);
      if (dv == 0) continue;
      acc.add(samples[i].weight * samples[j].weight * std::pow(dv, p) / std::pow(r, e));
    }
  return acc.value();
}

// ---------------------------------------------------------------------------
// admissibility regions

enum class AdmissibleMode { trace_wbp, lebesgue };

inline double admissible_threshold(AdmissibleMode mode, double theta0, double t, int n) {
  return mode == AdmissibleMode::trace_wbp ? -t : n * (theta0 - 1.0) - t;
}

inline bool admissible_region(double p, double s0, double theta0, double t, int n, AdmissibleMode mode) {
  return alpha(s0, theta0, p, n) > admissible_threshold(mode, theta0, t, n);
}

// s on the level set alpha(s, theta) = c as a function of p.
inline double level_curve_s(double p, double c, double theta, int n) {
  if (p >= c + theta) return (c - p * (1.0 - theta) + n * theta) / (p * theta);
  return (c - 1.0 + theta + n) / p;
}

// Both branch formulas evaluated at the breakpoint p = c + theta.
inline std::pair<double, double> level_curve_breakpoint(double c, double theta, int n) {
  double pb = c + theta;
  return {(c - pb * (1.0 - theta) + n * theta) / (pb * theta), (c - 1.0 + theta + n) / pb};
}

struct RegionGrid {
  std::vector<double> ps, ss;
  std::vector<std::vector<char>> trace_mask;     // [i_s][i_p]
  std::vector<std::vector<char>> lebesgue_mask;  // [i_s][i_p]
  Polyline trace_curve, lebesgue_curve;          // (p, s) points
  double theta0 = 2, t = 0;
  int n = 2;
};

inline RegionGrid region_grid(std::pair<double, double> p_range, std::pair<double, double> s_range, double theta0,
                              double t, int n, int resolution) {
  if (resolution < 32) throw DomainError("region_grid: resolution must be >= 32");
  if (!(p_range.first >= 1 && p_range.second > p_range.first)) throw DomainError("region_grid: bad p range");
  if (!(s_range.second > s_range.first)) throw DomainError("region_grid: bad s range");
  RegionGrid g;
  g.theta0 = theta0;
  g.t = t;
  g.n = n;
  for (int i = 0; i < resolution; ++i) {
    g.ps.push_back(p_range.first + (p_range.second - p_range.first) * i / (resolution - 1));
    g.ss.push_back(s_range.first + (s_range.second - s_range.first) * i / (resolution - 1));
  }
  g.trace_mask.assign(resolution, std::vector<char>(resolution, 0));
  g.lebesgue_mask.assign(resolution, std::vector<char>(resolution, 0));
  for (int is = 0; is < resolution; ++is)
    for (int ip = 0; ip < resolution; ++ip) {
      g.trace_mask[is][ip] = admissible_region(g.ps[ip], g.ss[is], theta0, t, n, AdmissibleMode::trace_wbp);
      g.lebesgue_mask[is][ip] = admissible_region(g.ps[ip], g.ss[is], theta0, t, n, AdmissibleMode::lebesgue);
    }
  auto curve = [&](double c) {
    Polyline pl;
    pl.closed = false;
    std::vector<double> pv = g.ps;
    double pb = c + theta0;
    if (pb > p_range.first && pb < p_range.second) pv.push_back(pb);
    std::sort(pv.begin(), pv.end());
    for (double p : pv) pl.vertices.push_back({p, level_curve_s(p, c, theta0, n)});
    return pl;
  };
  g.trace_curve = curve(admissible_threshold(AdmissibleMode::trace_wbp, theta0, t, n));
  g.lebesgue_curve = curve(admissible_threshold(AdmissibleMode::lebesgue, theta0, t, n));
  return g;
}

inline void write_mask_csv(std::ostream& os, const RegionGrid& g, bool lebesgue) {
  const auto& m = lebesgue ? g.lebesgue_mask : g.trace_mask;
  os.precision(17);
  os << "s\\p";
  for (double p : g.ps) os << ',' << p;
  os << '\n';
  for (std::size_t is = 0; is < g.ss.size(); ++is) {
    os << g.ss[is];
    for (std::size_t ip = 0; ip < g.ps.size(); ++ip) os << ',' << int(m[is][ip]);
    os << '\n';
  }
}

inline void write_curves_csv(std::ostream& os, const RegionGrid& g) {
  os.precision(17);
  os << "curve,p,s\n";
  for (auto& v : g.trace_curve.vertices) os << "trace_wbp," << v.x << ',' << v.y << '\n';
  for (auto& v : g.lebesgue_curve.vertices) os << "lebesgue," << v.x << ',' << v.y << '\n';
}

}  // namespace nlfrac
