#pragma once

#include <deque>
#include <optional>

#include "fields.hpp"

namespace nlfrac {

struct QuadratureSpec {
  double grading = 1.0;        // outer cell size ~ d(x)^grading
  int cells_per_decade = 8;    // outer cells per factor-10 shell in d
  double eps_cut = 1e-6;       // boundary cutoff on d(x)
  int inner_samples = 16;      // inner Gauss order (1D)
  int radial_samples = 8;      // inner radial nodes (2D)
  int angular_samples = 16;    // inner angular nodes (2D)
  int outer_order = 8;         // Gauss order per outer cell (1D)
  int outer_order_2d = 3;      // tensor Gauss order per Whitney cell (2D)
  std::size_t max_cells = 4000000;
  unsigned jobs = 1;

  void validate(const DomainApprox& d) const {
    if (!(grading > 0 && grading <= 1)) throw DomainError("quadrature: grading must lie in (0,1]");
    if (cells_per_decade < 1) throw DomainError("quadrature: cells_per_decade must be positive");
    if (!(eps_cut > 0)) throw DomainError("quadrature: eps_cut must be positive");
    if (!(eps_cut > d.distance_error())) throw DomainError("quadrature: eps_cut must exceed the domain distance error");
    if (inner_samples < 8 || radial_samples < 8 || angular_samples < 8) throw DomainError("quadrature: sample counts must be >= 8");
    if (outer_order < 1 || outer_order_2d < 1) throw DomainError("quadrature: outer order must be positive");
  }
};

enum class RegionKind { whole, box, ball };

struct Region {
  RegionKind kind = RegionKind::whole;
  BBox box;
  Point2 center;
  double radius = 0;

  static Region whole() { return {}; }
  static Region make_box(BBox b) { Region r; r.kind = RegionKind::box; r.box = b; return r; }
  static Region interval(double lo, double hi) {
    BBox b;
    b.expand(Point2{lo, -1});
    b.expand(Point2{hi, 1});
    return make_box(b);
  }
  static Region make_ball(Point2 c, double rad) { Region r; r.kind = RegionKind::ball; r.center = c; r.radius = rad; return r; }

  bool contains(Point2 x) const {
    switch (kind) {
      case RegionKind::whole: return true;
      case RegionKind::box: return x.x >= box.xmin && x.x <= box.xmax && x.y >= box.ymin && x.y <= box.ymax;
      case RegionKind::ball: return dist(x, center) < radius;
    }
    return false;
  }
};

struct NuResult {
  double value = 0;
  double error = 0;
  double cutoff = 0;
  std::size_t cells = 0;
  bool divergent = false;
  std::optional<double> growth_exponent;
};

struct InnerMean {
  double value = 0;
  double error = 0;
};

// ---------------------------------------------------------------------------
// exponent function

inline double alpha(double s, double theta, double p, int n) {
  if (!(theta >= 1.0)) throw DomainError("alpha: theta must be >= 1");
  if (!(p >= 1.0)) throw DomainError("alpha: p must be >= 1");
  const double e = p * s - n;
  if (e <= p - 1.0) return p * (1.0 - theta) + e * theta;
  return (1.0 - theta) + e;
}

// ---------------------------------------------------------------------------
// inner integrals

namespace detail {

// Sorted breakpoints of u strictly inside (lo,hi).
inline void cuts_in(const std::vector<double>& bps, double lo, double hi, std::vector<double>& out) {
  auto it = std::upper_bound(bps.begin(), bps.end(), lo);
  for (; it != bps.end() && *it < hi; ++it) out.push_back(*it);
}

// Mean of f over (lo,hi), splitting at the given sorted interior cuts.
template <class F>
double mean_1d(F&& f, double lo, double hi, const std::vector<double>& cuts, const Rule1D& rule) {
  double total = 0;
  double a = lo;
  auto piece = [&](double x0, double x1) {
    double h = x1 - x0, s = 0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * f(x0 + h * rule.nodes[k]);
    total += s * h;
  };
  for (double c : cuts) {
    if (c > a) piece(a, c);
    a = std::max(a, c);
  }
  if (hi > a) piece(a, hi);
  return total / (hi - lo);
}

// Weighted polar nodes on the unit disk; weights sum to one.
struct DiskRule {
  std::vector<Point2> nodes;
  std::vector<double> weights;
};

inline DiskRule disk_rule(int nr, int na, bool stratified) {
  DiskRule r;
  const double two_pi = 2.0 * std::acos(-1.0);
  if (stratified) {
    // equal-area midpoint cells in (rho^2, phi)
    for (int i = 0; i < nr; ++i) {
      double rad = std::sqrt((i + 0.5) / nr);
      for (int k = 0; k < na; ++k) {
        double phi = two_pi * (k + 0.5 * (i % 2)) / na;
        r.nodes.push_back({rad * std::cos(phi), rad * std::sin(phi)});
        r.weights.push_back(1.0 / (nr * na));
      }
    }
    return r;
  }
  const Rule1D& g = gauss_rule(nr);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    double t = g.nodes[i];
    for (int k = 0; k < na; ++k) {
      double phi = two_pi * (k + 0.5 * (i % 2)) / na;
      r.nodes.push_back({t * std::cos(phi), t * std::sin(phi)});
      r.weights.push_back(g.weights[i] * 2.0 * t / na);
    }
  }
  return r;
}

inline const DiskRule& cached_disk_rule(int nr, int na, bool stratified) {
  thread_local std::deque<std::pair<std::array<int, 3>, DiskRule>> cache;
  std::array<int, 3> key{nr, na, stratified ? 1 : 0};
  for (auto& [k, r] : cache)
    if (k == key) return r;
  cache.emplace_back(key, disk_rule(nr, na, stratified));
  return cache.back().second;
}

template <class F>
double mean_disk(F&& f, Point2 c, double R, const DiskRule& rule) {
  double s = 0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * f(c + R * rule.nodes[k]);
  return s;
}

// Mean over B_R(c) of f at two resolutions; value from the finer.
template <class F>
InnerMean ball_mean(F&& f, const DomainApprox& dom, const ScalarField& u, Point2 c, double R, const QuadratureSpec& spec,
                    double split_at) {
  if (dom.is_1d()) {
    std::vector<double> cuts;
    if (split_at > c.x - R && split_at < c.x + R) cuts.push_back(split_at);
    if (u.regularity() == Regularity::indicator_sum) {
      cuts_in(u.breakpoints(), c.x - R, c.x + R, cuts);
      std::sort(cuts.begin(), cuts.end());
    }
    auto g = [&](double y) { return f(Point2{y, 0.0}); };
    double fine = mean_1d(g, c.x - R, c.x + R, cuts, gauss_rule(spec.inner_samples));
    double coarse = mean_1d(g, c.x - R, c.x + R, cuts, gauss_rule(spec.inner_samples / 2));
    return {fine, std::abs(fine - coarse)};
  }
  bool strat = u.regularity() != Regularity::smooth;
  const DiskRule& fr = cached_disk_rule(spec.radial_samples, spec.angular_samples, strat);
  const DiskRule& cr = cached_disk_rule(spec.radial_samples / 2, spec.angular_samples / 2, strat);
  double fine = mean_disk(f, c, R, fr);
  double coarse = mean_disk(f, c, R, cr);
  return {fine, std::abs(fine - coarse)};
}

}  // namespace detail

// Mean of |u(y)-u(x)|^q over Psi(x).
inline InnerMean mean_oscillation(const ScalarField& u, const DomainApprox& d, Point2 x, const QuadratureSpec& spec,
                                  double q = 1.0) {
  if (!d.is_inside(x)) throw CutoffError("mean_oscillation: point is not interior");
  double dx = d.distance(x);
  if (!(dx > spec.eps_cut)) throw CutoffError("mean_oscillation: point lies within the boundary cutoff");
  const double ux = u(x);
  auto f = [&](Point2 y) {
    double v = std::abs(u(y) - ux);
    return q == 1.0 ? v : std::pow(v, q);
  };
  return detail::ball_mean(f, d, u, x, 0.5 * dx, spec, x.x);
}

// Mean of u over Phi(x).
inline InnerMean g_mean(const ScalarField& u, const DomainApprox& d, Point2 x, const QuadratureSpec& spec) {
  if (!d.is_inside(x)) throw CutoffError("g_mean: point is not interior");
  double dx = d.distance(x);
  if (!(dx > spec.eps_cut)) throw CutoffError("g_mean: point lies within the boundary cutoff");
  return detail::ball_mean([&](Point2 y) { return u(y); }, d, u, x, dx / 6.0, spec, std::numeric_limits<double>::quiet_NaN());
}

// ---------------------------------------------------------------------------
// outer integral

namespace detail {

// Outer integrand (inner mean of |u(y)-u(x)|^q / d^{q s(x)})^{p/q}, using both inner resolutions.
inline std::pair<double, double> nu_integrand(const ScalarField& u, const ExponentField& s, double p, double q,
                                              const DomainApprox& d, Point2 x, double dx, const QuadratureSpec& spec) {
  const double ux = u(x);
  auto f = [&](Point2 y) {
    double v = std::abs(u(y) - ux);
    return q == 1.0 ? v : std::pow(v, q);
  };
  InnerMean m = ball_mean(f, d, u, x, 0.5 * dx, spec, x.x);
  double w = std::pow(dx, -q * s(x));
  double e = p / q;
  double val = std::pow(m.value * w, e);
  double alt = std::pow(std::max(0.0, m.value - m.error) * w, e);
  return {val, std::abs(val - alt)};
}

// Shell boundaries in d from D down toward 0 (fixed absolute positions).
inline double shell_position(const QuadratureSpec& spec, double D, int k) {
  if (spec.grading == 1.0) return D * std::pow(10.0, -static_cast<double>(k) / spec.cells_per_decade);
  const int N = 16 * spec.cells_per_decade;
  if (k >= N) return 0.0;
  return D * std::pow(1.0 - static_cast<double>(k) / N, 1.0 / (1.0 - spec.grading));
}

inline NuResult nu_1d(const ScalarField& u, const ExponentField& s, double p, double q, const Region& E,
                      const DomainApprox& dom, const QuadratureSpec& spec) {
  const double a = dom.params().a, b = dom.params().b;
  const double D = 0.5 * (b - a);
  const double eps = spec.eps_cut;
  const std::vector<double>& bps = u.breakpoints();
  std::vector<double> rb;
  if (E.kind == RegionKind::box) rb = {E.box.xmin, E.box.xmax};
  if (E.kind == RegionKind::ball) rb = {E.center.x - E.radius, E.center.x + E.radius};

  struct Cell { double x0, x1; };
  std::vector<Cell> cells;
  for (int side = 0; side < 2; ++side) {
    auto xof = [&](double dd) { return side == 0 ? a + dd : b - dd; };
    auto dof = [&](double x) { return side == 0 ? x - a : b - x; };
    // critical distances where the integrand changes formula
    std::vector<double> crit;
    for (double c : bps) {
      double t = dof(c);
      for (double m : {1.0, 2.0, 2.0 / 3.0})
        if (t * m > eps && t * m < D) crit.push_back(t * m);
    }
    for (double c : rb) {
      double t = dof(c);
      if (t > eps && t < D) crit.push_back(t);
    }
    std::sort(crit.begin(), crit.end(), std::greater<>());
    // walk from the interior toward the boundary so refining eps only appends cells
    std::size_t ci = 0;
    double hi = D;
    for (int k = 1; hi > eps; ++k) {
      double lo = std::max(shell_position(spec, D, k), eps);
      while (ci < crit.size() && crit[ci] >= hi) ++ci;
      while (ci < crit.size() && crit[ci] > lo) {
        cells.push_back({xof(hi), xof(crit[ci])});
        hi = crit[ci];
        ++ci;
      }
      if (hi > lo) cells.push_back({xof(hi), xof(lo)});
      hi = lo;
      if (cells.size() > spec.max_cells) throw ResourceError("nu: outer cell budget exceeded");
    }
  }

  const Rule1D& rule = gauss_rule(spec.outer_order);
  std::vector<std::array<double, 3>> out(cells.size());
  parallel_for(cells.size(), spec.jobs, [&](std::size_t i) {
    double x0 = std::min(cells[i].x0, cells[i].x1), x1 = std::max(cells[i].x0, cells[i].x1);
    auto integrate = [&](double l, double r, double& err) {
      double h = r - l, acc = 0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        Point2 x{l + h * rule.nodes[k], 0.0};
        if (!E.contains(x)) continue;
        auto [v, e] = nu_integrand(u, s, p, q, dom, x, dom.distance(x), spec);
        acc += rule.weights[k] * v;
        err += rule.weights[k] * e * h;
      }
      return acc * h;
    };
    double e_inner = 0, dummy = 0;
    double coarse = integrate(x0, x1, dummy);
    double xm = 0.5 * (x0 + x1);
    double fine = integrate(x0, xm, e_inner) + integrate(xm, x1, e_inner);
    out[i] = {fine, std::abs(fine - coarse), e_inner};
  });
  NeumaierSum val, err;
  for (auto& o : out) {
    val.add(o[0]);
    err.add(o[1] + o[2]);
  }
  NuResult r;
  r.value = val.value();
  r.error = err.value() + 1e-14 * std::abs(r.value);
  r.cutoff = eps;
  r.cells = cells.size();
  return r;
}

inline NuResult nu_2d(const ScalarField& u, const ExponentField& s, double p, double q, const Region& E,
                      const DomainApprox& dom, const QuadratureSpec& spec) {
  const double eps = spec.eps_cut;
  const double kappa = std::log(10.0) / spec.cells_per_decade;
  BBox bb = dom.bbox();
  if (E.kind == RegionKind::box) {
    bb.xmin = std::max(bb.xmin, E.box.xmin); bb.xmax = std::min(bb.xmax, E.box.xmax);
    bb.ymin = std::max(bb.ymin, E.box.ymin); bb.ymax = std::min(bb.ymax, E.box.ymax);
  } else if (E.kind == RegionKind::ball) {
    bb.xmin = std::max(bb.xmin, E.center.x - E.radius); bb.xmax = std::min(bb.xmax, E.center.x + E.radius);
    bb.ymin = std::max(bb.ymin, E.center.y - E.radius); bb.ymax = std::min(bb.ymax, E.center.y + E.radius);
  }
  NuResult r;
  r.cutoff = eps;
  if (!(bb.xmax > bb.xmin) || !(bb.ymax > bb.ymin)) return r;
  struct Cell { Point2 c; double h; };
  std::vector<Cell> leaves;
  std::vector<Cell> stack{{bb.center(), 0.5 * std::max(bb.width(), bb.height()) * (1 + 1e-12)}};
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    const double diag = c.h * std::sqrt(2.0);
    if (E.kind == RegionKind::ball && dist(c.c, E.center) - diag >= E.radius) continue;
    if (E.kind == RegionKind::box && (c.c.x + c.h < E.box.xmin || c.c.x - c.h > E.box.xmax ||
                                      c.c.y + c.h < E.box.ymin || c.c.y - c.h > E.box.ymax))
      continue;
    double dc = dom.distance(c.c);
    if (dc > diag && !dom.is_inside(c.c)) continue;
    if (dc + diag < eps) continue;
    bool whitney = dc - diag > 0 && 2 * c.h <= kappa * std::pow(dc, spec.grading);
    if (whitney || 2 * c.h < kappa * eps) {
      leaves.push_back(c);
      if (leaves.size() > spec.max_cells) throw ResourceError("nu: outer cell budget exceeded");
      continue;
    }
    double hh = 0.5 * c.h;
    for (int k = 0; k < 4; ++k)
      stack.push_back({{c.c.x + ((k & 1) ? hh : -hh), c.c.y + ((k & 2) ? hh : -hh)}, hh});
  }
  const Rule1D& rule = gauss_rule(spec.outer_order_2d);
  std::vector<std::array<double, 3>> out(leaves.size());
  parallel_for(leaves.size(), spec.jobs, [&](std::size_t i) {
    const Cell& c = leaves[i];
    auto integrate = [&](Point2 lo, double side, double& err) {
      double acc = 0;
      for (std::size_t a = 0; a < rule.nodes.size(); ++a)
        for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
          Point2 x{lo.x + side * rule.nodes[a], lo.y + side * rule.nodes[b]};
          if (!E.contains(x)) continue;
          double dx = dom.distance(x);
          if (!(dx > eps) || !dom.is_inside(x)) continue;
          auto [v, e] = nu_integrand(u, s, p, q, dom, x, dx, spec);
          double w = rule.weights[a] * rule.weights[b] * side * side;
          acc += w * v;
          err += w * e;
        }
      return acc;
    };
    double e_inner = 0, dummy = 0;
    Point2 lo{c.c.x - c.h, c.c.y - c.h};
    double coarse = integrate(lo, 2 * c.h, dummy);
    double fine = 0;
    for (int k = 0; k < 4; ++k) fine += integrate({lo.x + ((k & 1) ? c.h : 0), lo.y + ((k & 2) ? c.h : 0)}, c.h, e_inner);
    out[i] = {fine, std::abs(fine - coarse), e_inner};
  });
  NeumaierSum val, err;
  for (auto& o : out) {
    val.add(o[0]);
    err.add(o[1] + o[2]);
  }
  r.value = val.value();
  r.error = err.value() + 1e-14 * std::abs(r.value);
  r.cells = leaves.size();
  return r;
}

}  // namespace detail

inline NuResult nu_pq(const ScalarField& u, const ExponentField& s, double p, double q, const Region& E,
                      const DomainApprox& d, const QuadratureSpec& spec) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("nu: p must be >= 1");
  if (!(q >= 1.0) || !std::isfinite(q)) throw DomainError("nu: q must be >= 1");
  spec.validate(d);
  return d.is_1d() ? detail::nu_1d(u, s, p, q, E, d, spec) : detail::nu_2d(u, s, p, q, E, d, spec);
}

inline NuResult nu(const ScalarField& u, const ExponentField& s, double p, const Region& E, const DomainApprox& d,
                   const QuadratureSpec& spec) {
  return nu_pq(u, s, p, 1.0, E, d, spec);
}

// ---------------------------------------------------------------------------
// divergence ladder

struct NuLadder {
  std::vector<NuResult> results;     // one per cutoff, largest cutoff first
  double power_exponent = 0;         // slope of log nu vs log(1/eps), tail half
  double log_exponent = 0;           // slope of log nu vs log log(1/eps), tail half
  bool divergent = false;
};

// Growth fit over the tail half of a ladder of positive values against x-abscissae.
inline double tail_slope(const std::vector<double>& xs, const std::vector<double>& vals) {
  std::vector<double> a, b;
  std::size_t start = vals.size() / 2;
  if (vals.size() - start < 2) start = vals.size() >= 2 ? vals.size() - 2 : 0;
  for (std::size_t i = start; i < vals.size(); ++i)
    if (vals[i] > 0) {
      a.push_back(xs[i]);
      b.push_back(std::log(vals[i]));
    }
  if (a.size() < 2) return 0.0;
  return least_squares(a, b).slope;
}

inline NuLadder nu_ladder(const ScalarField& u, const ExponentField& s, double p, double q, const Region& E,
                          const DomainApprox& d, QuadratureSpec spec, std::vector<double> eps_ladder,
                          double divergence_threshold = 0.2) {
  if (eps_ladder.size() < 3) throw EstimationError("nu_ladder: need at least three cutoffs");
  std::sort(eps_ladder.begin(), eps_ladder.end(), std::greater<>());
  if (!(eps_ladder.front() < 1.0)) throw DomainError("nu_ladder: cutoffs must be below 1");
  NuLadder L;
  std::vector<double> lx, llx, vals;
  for (double e : eps_ladder) {
    spec.eps_cut = e;
    L.results.push_back(nu_pq(u, s, p, q, E, d, spec));
    lx.push_back(std::log(1.0 / e));
    llx.push_back(std::log(std::log(1.0 / e)));
    vals.push_back(L.results.back().value);
  }
  L.power_exponent = tail_slope(lx, vals);
  L.log_exponent = tail_slope(llx, vals);
  L.divergent = L.log_exponent > divergence_threshold;
  for (auto& r : L.results) {
    r.divergent = L.divergent;
    if (L.divergent) r.growth_exponent = L.log_exponent;
  }
  return L;
}

// ---------------------------------------------------------------------------
// lower envelopes

struct Envelope {
  double value = 0;
  double resolution = 0;  // smallest sampled distance from xbar
  std::size_t samples = 0;
};

// Sampled inf of s over Omega ∩ B_delta(xbar), on fixed absolute shells r = 2^{-k/4}.
inline Envelope s_lower_envelope(const ExponentField& s, const DomainApprox& d, Point2 xbar, double delta,
                                 const QuadratureSpec& spec, int angles = 64) {
  if (!(delta > 0)) throw DomainError("s_lower_envelope: delta must be positive");
  Envelope env;
  env.value = std::numeric_limits<double>::infinity();
  const double r_min = std::max(spec.eps_cut, 1e-12);
  const int k0 = static_cast<int>(std::ceil(-4.0 * std::log2(delta) - 1e-9));
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int k = k0;; ++k) {
    double r = std::pow(2.0, -k / 4.0);
    if (r >= delta) continue;
    if (r < r_min) break;
    auto take = [&](Point2 x) {
      if (!d.is_inside(x)) return;
      env.value = std::min(env.value, s(x));
      env.resolution = r;
      ++env.samples;
    };
    if (d.is_1d()) {
      take({xbar.x - r, 0});
      take({xbar.x + r, 0});
    } else {
      for (int a = 0; a < angles; ++a) {
        double phi = two_pi * a / angles;
        take({xbar.x + r * std::cos(phi), xbar.y + r * std::sin(phi)});
      }
    }
  }
  if (env.samples == 0) throw ResolutionError("s_lower_envelope: no interior samples below delta");
  return env;
}

inline Envelope alpha_lower_envelope(const ExponentField& s, double theta, Point2 xbar, double delta, double p, int n,
                                     const DomainApprox& d, const QuadratureSpec& spec) {
  Envelope e = s_lower_envelope(s, d, xbar, delta, spec);
  e.value = alpha(e.value, theta, p, n);
  return e;
}

struct EnvelopeLadder {
  std::vector<double> deltas;
  std::vector<double> values;
  double limit = 0;  // extrapolated delta -> 0 value
};

inline EnvelopeLadder alpha_envelope_ladder(const ExponentField& s, double theta, Point2 xbar,
                                            std::vector<double> deltas, double p, int n, const DomainApprox& d,
                                            const QuadratureSpec& spec) {
  if (deltas.empty()) throw DomainError("alpha_envelope_ladder: empty ladder");
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  EnvelopeLadder L;
  for (double dl : deltas) {
    L.deltas.push_back(dl);
    L.values.push_back(alpha_lower_envelope(s, theta, xbar, dl, p, n, d, spec).value);
  }
  L.limit = L.values.back();
  std::size_t m = L.values.size();
  if (m >= 3) {
    double i1 = L.values[m - 2] - L.values[m - 3], i2 = L.values[m - 1] - L.values[m - 2];
    if (i1 > 0 && i2 > 0 && i2 < i1) {
      double r = i2 / i1;
      L.limit += i2 * r / (1 - r);
    }
  }
  return L;
}

}  // namespace nlfrac
