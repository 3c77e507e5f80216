#pragma once

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "core.hpp"
#include "geometry.hpp"

namespace nlfrac {

// ---------------------------------------------------------------------------
// index algebra

struct Index {
  int i_prime = 3;                   // 3 or 4
  std::vector<std::uint8_t> tail;    // digits in {1,2}

  int length() const { return 1 + static_cast<int>(tail.size()); }
  Index truncated(int len) const {
    Index r{i_prime, {}};
    r.tail.assign(tail.begin(), tail.begin() + (len - 1));
    return r;
  }
  friend bool operator==(const Index& a, const Index& b) { return a.i_prime == b.i_prime && a.tail == b.tail; }
  friend bool operator!=(const Index& a, const Index& b) { return !(a == b); }
  friend bool operator<(const Index& a, const Index& b) {
    if (a.i_prime != b.i_prime) return a.i_prime < b.i_prime;
    return a.tail < b.tail;
  }
};

struct CompositeIndex {
  std::vector<Index> entries;

  std::size_t size() const { return entries.size(); }
  int norm() const {
    int n = 0;
    for (auto& e : entries) n += e.length();
    return n;
  }
  const Index& last() const { return entries.back(); }

  // Successor number k in 1..4 of the grouped-set tree.
  CompositeIndex child(int k) const {
    CompositeIndex c = *this;
    if (k == 1 || k == 2)
      c.entries.back().tail.push_back(static_cast<std::uint8_t>(k));
    else
      c.entries.push_back(Index{k, {}});
    return c;
  }
  CompositeIndex truncated(std::size_t k) const {
    CompositeIndex c;
    c.entries.assign(entries.begin(), entries.begin() + k);
    return c;
  }
  friend bool operator==(const CompositeIndex& a, const CompositeIndex& b) { return a.entries == b.entries; }
  friend bool operator<(const CompositeIndex& a, const CompositeIndex& b) { return a.entries < b.entries; }
};

inline void validate(const Index& i) {
  if (i.i_prime != 3 && i.i_prime != 4) throw DomainError("index: i' must be 3 or 4");
  for (auto d : i.tail)
    if (d != 1 && d != 2) throw DomainError("index: i'' digits must be 1 or 2");
}

inline void validate(const CompositeIndex& c) {
  if (c.entries.empty()) throw DomainError("composite index must be nonempty");
  for (auto& e : c.entries) validate(e);
}

inline std::string to_string(const Index& i) {
  std::string s = std::to_string(i.i_prime);
  if (!i.tail.empty()) {
    s += '.';
    for (auto d : i.tail) s += static_cast<char>('0' + d);
  }
  return s;
}

inline std::string to_string(const CompositeIndex& c) {
  std::string s;
  for (std::size_t k = 0; k < c.entries.size(); ++k) {
    if (k) s += '|';
    s += to_string(c.entries[k]);
  }
  return s;
}

inline CompositeIndex parse_composite_index(const std::string& text) {
  CompositeIndex c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, '|')) {
    if (item.empty()) throw DomainError("index string has an empty entry: " + text);
    Index e;
    if (item[0] != '3' && item[0] != '4') throw DomainError("index entry must start with 3 or 4: " + item);
    e.i_prime = item[0] - '0';
    if (item.size() > 1) {
      if (item[1] != '.' || item.size() == 2) throw DomainError("malformed index entry: " + item);
      for (std::size_t k = 2; k < item.size(); ++k) {
        if (item[k] != '1' && item[k] != '2') throw DomainError("index digits must be 1 or 2: " + item);
        e.tail.push_back(static_cast<std::uint8_t>(item[k] - '0'));
      }
    }
    c.entries.push_back(std::move(e));
  }
  validate(c);
  return c;
}

inline bool partial_order_leq(const CompositeIndex& a, const CompositeIndex& b) {
  const std::size_t j = a.size();
  if (j == 0 || j > b.size()) return false;
  for (std::size_t k = 0; k + 1 < j; ++k)
    if (a.entries[k] != b.entries[k]) return false;
  const Index& la = a.entries[j - 1];
  const Index& lb = b.entries[j - 1];
  if (la.length() > lb.length()) return false;
  return lb.truncated(la.length()) == la;
}

// All descendants of `root` in the successor tree (including root) with norm <= max_norm.
inline std::vector<CompositeIndex> grouped_family(const CompositeIndex& root, int max_norm) {
  validate(root);
  if (max_norm < root.norm()) throw DomainError("grouped_family: max_norm below the root norm");
  std::vector<CompositeIndex> out{root};
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (out[k].norm() >= max_norm) continue;
    for (int c = 1; c <= 4; ++c) out.push_back(out[k].child(c));
  }
  return out;
}

// Removed middle-third interval I_{i''} of the Cantor construction.
inline std::pair<double, double> cantor_interval(const std::vector<std::uint8_t>& tail) {
  double lo = 0.0, w = 1.0;
  for (auto d : tail) {
    w /= 3.0;
    if (d == 2) lo += 2.0 * w;
  }
  return {lo + w / 3.0, lo + 2.0 * w / 3.0};
}

// Cantor piece J_{i''} whose middle third is I_{i''}.
inline std::pair<double, double> cantor_piece(const std::vector<std::uint8_t>& tail) {
  double lo = 0.0, w = 1.0;
  for (auto d : tail) {
    w /= 3.0;
    if (d == 2) lo += 2.0 * w;
  }
  return {lo, lo + w};
}

// ---------------------------------------------------------------------------
// similarities

// Orientation-preserving similarity z -> a z + b.
class Similarity {
 public:
  Similarity() = default;
  Similarity(std::complex<double> a, std::complex<double> b) : a_(a), b_(b) {}

  static Similarity identity() { return {}; }

  Point2 apply(Point2 p) const { return to_point(a_ * to_complex(p) + b_); }
  Point2 operator()(Point2 p) const { return apply(p); }
  double scale() const { return std::abs(a_); }
  double rotation() const { return std::arg(a_); }
  Point2 translation() const { return to_point(b_); }
  bool reflection() const { return false; }
  std::complex<double> linear() const { return a_; }

  // (*this) o g
  Similarity then_inner(const Similarity& g) const { return {a_ * g.a_, a_ * g.b_ + b_}; }

 private:
  std::complex<double> a_{1.0, 0.0};
  std::complex<double> b_{0.0, 0.0};
};

inline Similarity compose(const Similarity& f, const Similarity& g) { return f.then_inner(g); }

// ---------------------------------------------------------------------------
// dimension

inline double hausdorff_dimension(double L) {
  const double Lmax = 0.5 * (1.0 + std::sqrt(3.0));
  if (!(L > 0.5 && L <= Lmax * (1 + 1e-15))) throw DomainError("hausdorff_dimension: L must lie in (1/2, (1+sqrt3)/2]");
  auto g = [L](double t) { return std::pow(3.0, t) - 2.0 * std::pow(L, t) - 2.0; };
  double lo = 1.0, hi = 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// prickly snowflake

struct PricklyOptions {
  int tile_depth = 8;                 // levels resolved by full recursive tiling
  double arc_tolerance = 0.02;        // sagitta of drawn arcs relative to the frontier group scale
  std::size_t vertex_budget = 4000000;
  int diameter_depth = 5;             // depth used to estimate D0
};

struct PieceRange {
  double lo = 0.0;   // parameter s (distance below the cusp) at the start
  double hi = 0.0;
};

class PricklySystem {
 public:
  static PricklySystem build(double theta0, double H, PricklyOptions opt = {}) {
    if (!(theta0 >= 1.0) || !std::isfinite(theta0)) throw DomainError("prickly: theta0 must be >= 1");
    if (!(H > 0.5 && H <= std::sqrt(3.0) / 2.0 + 1e-15)) throw DomainError("prickly: H must lie in (1/2, sqrt(3)/2]");
    PricklySystem p;
    auto d = std::make_shared<Data>();
    d->theta0 = theta0;
    d->H = H;
    d->opt = opt;
    p.d_ = d;
    p.solve_L();
    const double Lmax = 0.5 * (1.0 + std::sqrt(3.0));
    if (!(d->L > 0.5 && d->L < Lmax)) throw ConstructionError("prickly: computed L outside (1/2, (1+sqrt3)/2)");
    d->t = hausdorff_dimension(d->L);
    d->table.assign((std::size_t(2) << opt.tile_depth) - 1, {});
    d->gaps.assign((std::size_t(1) << opt.tile_depth) - 1, {});
    p.build_piece(0.0, 0, 0, true);
    for (std::size_t id = 0; id < d->table.size(); id = 2 * id + 2) d->table[id].hi = H;
    p.compute_constants();
    return p;
  }

  double theta0() const { return d_->theta0; }
  double H() const { return d_->H; }
  double L() const { return d_->L; }
  double t() const { return d_->t; }
  double D0() const { return d_->D0; }
  double r0() const { return d_->r0; }
  Point2 x0() const { return d_->x0; }
  const PricklyOptions& options() const { return d_->opt; }
  bool is_koch() const { return d_->theta0 == 1.0; }

  static Point2 corner_A() { return {-0.5, 0.0}; }
  static Point2 corner_B() { return {0.5, 0.0}; }
  Point2 cusp() const { return {0.0, d_->H}; }

  // Point on side i' of U0 at depth s below the cusp (3: left side, 4: right side).
  Point2 side_point(int ip, double s) const {
    double w = 0.5 * std::pow(s / d_->H, d_->theta0);
    return {ip == 3 ? -w : w, d_->H - s};
  }

  double chord(double u, double v) const { return dist(side_point(3, u), side_point(3, v)); }

  // Parameter increment lambda with chord(u, u+lambda) = target.
  double leaf_arc(double u, double target) const {
    if (target <= 0) return 0.0;
    auto f = [&](double lam) { return chord(u, u + lam) - target; };
    std::uintmax_t iters = 200;
    boost::math::tools::eps_tolerance<double> tol(52);
    double hi = target;
    double fhi = f(hi);
    if (fhi <= 0) return hi;
    double lo = 0.0, flo = -target;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (r.first + r.second);
  }

  // Splits a piece of the given level at its middle gap; table lookup when available.
  std::pair<double, double> gap_in_piece(const PieceRange& piece, int level, std::size_t heap_id) const {
    const int K = d_->opt.tile_depth;
    if (level < K) return d_->gaps[heap_id];
    double gm = piece.lo + leaf_arc(piece.lo, std::pow(3.0, -(level + 1)) * d_->L);
    double gp = gm + leaf_arc(gm, std::pow(3.0, -(level + 1)) * d_->L);
    return {gm, std::min(gp, piece.hi)};
  }

  PieceRange piece_range(const std::vector<std::uint8_t>& tail) const {
    const int K = d_->opt.tile_depth;
    std::size_t id = 0;
    int lev = 0;
    PieceRange pr = d_->table[0];
    for (auto dgt : tail) {
      if (lev < K) {
        id = 2 * id + dgt;
        ++lev;
        pr = d_->table[id];
        continue;
      }
      auto g = gap_in_piece(pr, lev, id);
      if (dgt == 1)
        pr.hi = g.first;
      else
        pr.lo = g.second;
      ++lev;
    }
    return pr;
  }

  std::pair<double, double> gap_range(const std::vector<std::uint8_t>& tail) const {
    PieceRange pr = piece_range(tail);
    std::size_t id = heap_id(tail);
    return gap_in_piece(pr, static_cast<int>(tail.size()), id);
  }

  // Chord endpoints x^- (nearer the cusp) and x^+ of the gap I_{i''} on side i'.
  std::pair<Point2, Point2> gap_endpoints(const Index& i) const {
    auto g = gap_range(i.tail);
    return {side_point(i.i_prime, g.first), side_point(i.i_prime, g.second)};
  }

  Similarity map(const Index& i) const {
    validate(i);
    auto [xm, xp] = gap_endpoints(i);
    return map_from_chord(i.i_prime, xm, xp);
  }

  static Similarity map_from_chord(int ip, Point2 xm, Point2 xp) {
    std::complex<double> zm = to_complex(xm), zp = to_complex(xp);
    if (ip == 3) {
      std::complex<double> a = zm - zp;  // B -> x^-, A -> x^+
      return {a, zp + 0.5 * a};
    }
    std::complex<double> a = zp - zm;    // A -> x^-, B -> x^+
    return {a, zm + 0.5 * a};
  }

  Similarity compose(const CompositeIndex& c) const {
    validate(c);
    Similarity f;
    for (auto& e : c.entries) f = f.then_inner(map(e));
    return f;
  }

  // Map of all entries but the last (frame of the group's piece).
  Similarity frame(const CompositeIndex& c) const {
    Similarity f;
    for (std::size_t k = 0; k + 1 < c.entries.size(); ++k) f = f.then_inner(map(c.entries[k]));
    return f;
  }

  double sigma(const CompositeIndex& c) const {
    return std::pow(3.0, -c.norm()) * std::pow(d_->L, static_cast<double>(c.size()));
  }

  // Generator curve gamma_{i'}(x), x in [0,1], following the Cantor tiling.
  Point2 gamma(int ip, double x) const {
    if (ip != 3 && ip != 4) throw DomainError("gamma: i' must be 3 or 4");
    x = std::clamp(x, 0.0, 1.0);
    const int K = d_->opt.tile_depth;
    PieceRange pr = d_->table[0];
    double lo = 0.0, w = 1.0;
    std::size_t id = 0;
    for (int lev = 0; lev < 40; ++lev) {
      if (x <= lo) return side_point(ip, pr.lo);
      if (x >= lo + w) return side_point(ip, pr.hi);
      auto g = gap_in_piece(pr, lev, id);
      double third = w / 3.0;
      if (x < lo + third) {
        pr.hi = g.first;
        w = third;
        id = 2 * id + 1;
      } else if (x > lo + 2 * third) {
        pr.lo = g.second;
        lo += 2 * third;
        w = third;
        id = 2 * id + 2;
      } else {
        double f = (x - lo - third) / third;
        return side_point(ip, g.first + f * (g.second - g.first));
      }
      if (lev + 1 >= K) id = 0;
    }
    return side_point(ip, pr.lo);
  }

  // Closed polyline: base A->B, then the depth-truncated curve from B over the cusp to A.
  Polyline boundary_polyline(int depth, double* distance_error = nullptr) const {
    if (depth < 0) throw DomainError("boundary_polyline: depth must be >= 0");
    Emitter em{this, {}, 0.0};
    em.out.push_back(corner_A());
    em.push(corner_B());
    em.path(Similarity::identity(), depth);
    if (em.out.size() > 1 && dist(em.out.back(), em.out.front()) <= 1e-12) em.out.pop_back();
    if (distance_error) *distance_error = em.err;
    return Polyline{std::move(em.out), true};
  }

  // Points of Gamma at the endpoints of all pieces of groups with sigma <= sigma_min (frontier of a cover).
  std::vector<Point2> attractor_points(double sigma_min, std::size_t budget = 20000000) const {
    std::vector<Point2> pts;
    struct Item { Similarity F; int ip; PieceRange pr; int level; std::size_t id; double sigma; };
    std::vector<Item> stack;
    const double s0 = d_->L / 3.0;
    stack.push_back({Similarity(), 3, d_->table[0], 0, 0, s0});
    stack.push_back({Similarity(), 4, d_->table[0], 0, 0, s0});
    while (!stack.empty()) {
      Item it = stack.back();
      stack.pop_back();
      if (it.sigma <= sigma_min) {
        pts.push_back(it.F(side_point(it.ip, it.pr.lo)));
        if (pts.size() > budget) throw ResourceError("attractor_points: point budget exceeded");
        continue;
      }
      auto g = gap_in_piece(it.pr, it.level, it.id);
      auto cid = [&](int k) { return it.level + 1 < d_->opt.tile_depth ? 2 * it.id + k : 0; };
      stack.push_back({it.F, it.ip, {it.pr.lo, g.first}, it.level + 1, cid(1), it.sigma / 3.0});
      stack.push_back({it.F, it.ip, {g.second, it.pr.hi}, it.level + 1, cid(2), it.sigma / 3.0});
      Similarity G = it.F.then_inner(map_from_chord(it.ip, side_point(it.ip, g.first), side_point(it.ip, g.second)));
      stack.push_back({G, 3, d_->table[0], 0, 0, it.sigma * d_->L / 3.0});
      stack.push_back({G, 4, d_->table[0], 0, 0, it.sigma * d_->L / 3.0});
    }
    return pts;
  }

  // Polygon of U0 itself (a wedge with cusp at the top).
  Polyline initial_set_polyline(double tol = 1e-5) const {
    const double c = 0.5 / std::pow(d_->H, d_->theta0);
    std::vector<double> xs{0.0};
    double worst = 0;
    detail::sample_power_arc(c, d_->theta0, 0.0, d_->H, tol, xs, worst);
    Polyline pl;
    pl.closed = true;
    for (double s : xs) pl.vertices.push_back(side_point(3, s));
    for (std::size_t k = xs.size() - 1; k >= 1; --k) pl.vertices.push_back(side_point(4, xs[k]));
    return pl;
  }

  static std::size_t heap_id(const std::vector<std::uint8_t>& tail) {
    std::size_t id = 0;
    for (auto dgt : tail) id = 2 * id + dgt;
    return id;
  }

 private:
  struct Data {
    double theta0 = 1, H = 0, L = 0, t = 0, D0 = 0, r0 = 0;
    Point2 x0;
    PricklyOptions opt;
    std::vector<PieceRange> table;
    std::vector<std::pair<double, double>> gaps;
  };
  std::shared_ptr<Data> d_;

  // Tiles a piece of the given level starting at u; returns its end.
  double build_piece(double u, int level, std::size_t id, bool store) const {
    const int K = d_->opt.tile_depth;
    if (level >= K) {
      double end = u + leaf_arc(u, std::pow(3.0, -level) * d_->L);
      if (store) d_->table[id] = {u, end};
      return end;
    }
    double gm = build_piece(u, level + 1, 2 * id + 1, store);
    double gp = gm + leaf_arc(gm, std::pow(3.0, -(level + 1)) * d_->L);
    double end = build_piece(gp, level + 1, 2 * id + 2, store);
    if (store) {
      d_->table[id] = {u, end};
      d_->gaps[id] = {gm, gp};
    }
    return end;
  }

  void solve_L() {
    const double H = d_->H;
    auto f = [&](double L) {
      d_->L = L;
      return build_piece(0.0, 0, 0, false) - H;
    };
    double lo = H, hi = H * (1.0 + d_->theta0 / (2.0 * H)) * 1.5;
    double flo = f(lo), fhi = f(hi);
    if (flo > 0) {
      d_->L = lo;
      return;
    }
    while (fhi < 0) {
      hi *= 1.5;
      fhi = f(hi);
    }
    std::uintmax_t iters = 200;
    boost::math::tools::eps_tolerance<double> tol(50);
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    d_->L = 0.5 * (r.first + r.second);
  }

  void compute_constants() {
    double err = 0;
    Polyline pl = boundary_polyline(d_->opt.diameter_depth, &err);
    d_->D0 = polygon_diameter(pl.vertices);
    // inscribed ball of U0
    auto u0 = DomainApprox::from_polyline(DomainKind::polygon, initial_set_polyline(), 0, 0.0);
    Point2 best{0, 0.1};
    double bestd = -1;
    const int n = 64;
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j) {
        Point2 q{-0.5 + static_cast<double>(i) / n, d_->H * static_cast<double>(j) / n};
        if (!u0.is_inside(q)) continue;
        double dq = u0.distance(q);
        if (dq > bestd) bestd = dq, best = q;
      }
    double step = 1.0 / n;
    while (step > 1e-7) {
      bool moved = false;
      for (Point2 dlt : {Point2{step, 0}, Point2{-step, 0}, Point2{0, step}, Point2{0, -step}}) {
        Point2 q = best + dlt;
        if (!u0.is_inside(q)) continue;
        double dq = u0.distance(q);
        if (dq > bestd) bestd = dq, best = q, moved = true;
      }
      if (!moved) step *= 0.5;
    }
    d_->x0 = best;
    d_->r0 = bestd;
  }

  static double polygon_diameter(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    std::vector<Point2> hull;
    for (int pass = 0; pass < 2; ++pass) {
      std::size_t start = hull.size();
      for (auto& p : pts) {
        while (hull.size() >= start + 2 && cross(hull[hull.size() - 1] - hull[hull.size() - 2], p - hull[hull.size() - 2]) <= 0)
          hull.pop_back();
        hull.push_back(p);
      }
      hull.pop_back();
      std::reverse(pts.begin(), pts.end());
    }
    double best = 0;
    for (std::size_t i = 0; i < hull.size(); ++i)
      for (std::size_t j = i + 1; j < hull.size(); ++j) best = std::max(best, dist(hull[i], hull[j]));
    return best;
  }

  struct Emitter {
    const PricklySystem* sys;
    std::vector<Point2> out;
    double err;

    void push(Point2 p) {
      if (!out.empty() && dist(out.back(), p) <= 1e-12) return;
      out.push_back(p);
      if (out.size() > sys->d_->opt.vertex_budget) throw ResourceError("boundary_polyline: vertex budget exceeded");
    }

    // From F(B) over F(cusp) to F(A).
    void path(const Similarity& F, int budget) {
      side(F, 4, sys->d_->table[0], 0, 0, budget, true);
      side(F, 3, sys->d_->table[0], 0, 0, budget, false);
    }

    void arc(const Similarity& F, int ip, double s0, double s1, double tol) {
      Point2 a = sys->side_point(ip, s0), b = sys->side_point(ip, s1);
      Point2 m = sys->side_point(ip, 0.5 * (s0 + s1));
      double sag = point_segment_distance(m, a, b);
      if (sag > tol && std::abs(s1 - s0) > 1e-12) {
        arc(F, ip, s0, 0.5 * (s0 + s1), tol);
        arc(F, ip, 0.5 * (s0 + s1), s1, tol);
        return;
      }
      push(F(b));
    }

    void side(const Similarity& F, int ip, PieceRange pr, int level, std::size_t id, int budget, bool reversed) {
      const int K = sys->d_->opt.tile_depth;
      if (level + 1 > budget) {
        double sigma = F.scale() * std::pow(3.0, -(1 + level)) * sys->d_->L;
        double tol = sys->d_->opt.arc_tolerance * std::pow(3.0, -(1 + level)) * sys->d_->L;
        err = std::max(err, 3.0 * sigma * sys->D0_or_one() + tol * F.scale());
        if (reversed) {
          push(F(sys->side_point(ip, pr.hi)));
          arc(F, ip, pr.hi, pr.lo, tol);
        } else {
          push(F(sys->side_point(ip, pr.lo)));
          arc(F, ip, pr.lo, pr.hi, tol);
        }
        return;
      }
      auto g = sys->gap_in_piece(pr, level, id);
      auto cid = [&](int k) { return level + 1 < K ? 2 * id + k : std::size_t(0); };
      PieceRange left{pr.lo, g.first}, right{g.second, pr.hi};
      Similarity G = F.then_inner(map_from_chord(ip, sys->side_point(ip, g.first), sys->side_point(ip, g.second)));
      int sub = budget - (level + 1);
      if (!reversed) {
        side(F, ip, left, level + 1, cid(1), budget, false);
        path(G, sub);
        side(F, ip, right, level + 1, cid(2), budget, false);
      } else {
        side(F, ip, right, level + 1, cid(2), budget, true);
        path(G, sub);
        side(F, ip, left, level + 1, cid(1), budget, true);
      }
    }
  };

 public:
  double D0_or_one() const { return d_->D0 > 0 ? d_->D0 : 1.0; }
};

// Free-function facade.

inline double L_from_geometry(double theta0, double H) { return PricklySystem::build(theta0, H).L(); }

// Generator curve gamma_{i'} bound to a built system.
struct GeneratorCurve {
  int i_prime = 3;
  double theta0 = 1.0;
  double H = 0.0;
  PricklySystem system;

  Point2 sample(double x) const { return system.gamma(i_prime, x); }
};

inline GeneratorCurve generator_curve(int ip, const PricklySystem& sys) {
  if (ip != 3 && ip != 4) throw DomainError("generator_curve: i' must be 3 or 4");
  return {ip, sys.theta0(), sys.H(), sys};
}

inline GeneratorCurve generator_curve(int ip, double theta0, double H) {
  return generator_curve(ip, PricklySystem::build(theta0, H));
}

inline Similarity similarity_for_index(const Index& i, const PricklySystem& sys) { return sys.map(i); }
inline Similarity compose(const CompositeIndex& c, const PricklySystem& sys) { return sys.compose(c); }

inline Polyline boundary_polyline(const PricklySystem& sys, int depth) { return sys.boundary_polyline(depth); }

inline DomainApprox prickly_domain(const PricklySystem& sys, int depth) {
  double err = 0;
  Polyline pl = sys.boundary_polyline(depth, &err);
  DomainParams prm;
  prm.theta0 = sys.theta0();
  prm.H = sys.H();
  return DomainApprox::from_polyline(sys.is_koch() ? DomainKind::koch : DomainKind::prickly_snowflake, std::move(pl),
                                     depth, err, prm);
}

}  // namespace nlfrac
