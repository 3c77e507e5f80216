#pragma once

#include <random>
#include <unordered_set>
#include <vector>

#include "fractal.hpp"

namespace nlfrac {

// L recovered from the dimension equation 2(L^t+1) = 3^t.
inline double L_from_dimension(double t) { return std::pow((std::pow(3.0, t) - 2.0) / 2.0, 1.0 / t); }

inline double group_mass_from_sigma(double sigma, double t) {
  double three_t = std::pow(3.0, t);
  return three_t / (three_t - 2.0) * std::pow(sigma, t);
}

inline double group_mass(const CompositeIndex& istar, double t) {
  if (!(t > 1.0 && t < 2.0)) throw DomainError("group_mass: t must lie in (1,2)");
  validate(istar);
  double L = L_from_dimension(t);
  double sigma = std::pow(3.0, -istar.norm()) * std::pow(L, static_cast<double>(istar.size()));
  return group_mass_from_sigma(sigma, t);
}

struct ConformalMeasure {
  double t = 0.0;
  double mass(const CompositeIndex& istar) const { return group_mass(istar, t); }
  // m(Gamma_{i*}) for the image of the whole attractor
  double image_mass(const CompositeIndex& istar) const {
    double L = L_from_dimension(t);
    return std::pow(std::pow(3.0, -istar.norm()) * std::pow(L, static_cast<double>(istar.size())), t);
  }
};

// Node of the grouped-set tree with its geometry resolved.
struct GroupNode {
  Similarity frame;
  int ip = 3;
  PieceRange piece;
  int level = 0;
  std::size_t heap = 0;
  double sigma = 0.0;
  int norm = 1;
};

// Bounding balls of grouped sets, tabulated per Cantor piece in the U0 frame.
class GroupGeometry {
 public:
  explicit GroupGeometry(const PricklySystem& sys, int table_depth = 10) : sys_(sys), depth_(table_depth) {
    double err = 0;
    Polyline pl = sys.boundary_polyline(6, &err);
    BBox bb;
    for (auto& v : pl.vertices) bb.expand(v);
    c_omega_ = bb.center();
    r_omega_ = 0;
    for (auto& v : pl.vertices) r_omega_ = std::max(r_omega_, dist(v, c_omega_));
    r_omega_ += err;
    balls_.assign((std::size_t(2) << depth_) - 1, {});
    fill(sys.options().tile_depth, {0.0, sys.H()}, 0, 0);
  }

  const PricklySystem& system() const { return sys_; }

  std::array<GroupNode, 2> roots() const {
    const double s = sys_.L() / 3.0;
    PieceRange root{0.0, sys_.H()};
    return {GroupNode{Similarity(), 3, root, 0, 0, s, 1}, GroupNode{Similarity(), 4, root, 0, 0, s, 1}};
  }

  std::array<GroupNode, 4> children(const GroupNode& n) const {
    const int K = sys_.options().tile_depth;
    auto g = sys_.gap_in_piece(n.piece, n.level, n.level < K ? n.heap : 0);
    std::size_t h1 = 2 * n.heap + 1, h2 = 2 * n.heap + 2;
    Similarity G = n.frame.then_inner(
        PricklySystem::map_from_chord(n.ip, sys_.side_point(n.ip, g.first), sys_.side_point(n.ip, g.second)));
    PieceRange root{0.0, sys_.H()};
    const double sc = n.sigma * sys_.L() / 3.0;
    return {GroupNode{n.frame, n.ip, {n.piece.lo, g.first}, n.level + 1, h1, n.sigma / 3.0, n.norm + 1},
            GroupNode{n.frame, n.ip, {g.second, n.piece.hi}, n.level + 1, h2, n.sigma / 3.0, n.norm + 1},
            GroupNode{G, 3, root, 0, 0, sc, n.norm + 1}, GroupNode{G, 4, root, 0, 0, sc, n.norm + 1}};
  }

  // Ball containing the grouped set of the node (world frame).
  BallSpec ball(const GroupNode& n) const {
    BallSpec b;
    if (n.level <= depth_) {
      b = balls_[n.heap];
    } else {
      auto gap = sys_.gap_in_piece(n.piece, n.level, 0);
      Similarity f = PricklySystem::map_from_chord(3, sys_.side_point(3, gap.first), sys_.side_point(3, gap.second));
      b = {f(sys_.x0()), 3.0 * f.scale() * sys_.D0()};
    }
    if (n.ip == 4) b.center.x = -b.center.x;
    return {n.frame(b.center), n.frame.scale() * b.radius};
  }

  // Anchor point of the node on Gamma (start of its piece).
  Point2 anchor(const GroupNode& n) const { return n.frame(sys_.side_point(n.ip, n.piece.lo)); }

  double mass(const GroupNode& n, double t) const { return group_mass_from_sigma(n.sigma, t); }

 private:
  // Ball for a piece of side 3, computed bottom-up.
  BallSpec fill(int K, PieceRange pr, int level, std::size_t heap) {
    auto gap = sys_.gap_in_piece(pr, level, level < K ? heap : 0);
    Similarity f = PricklySystem::map_from_chord(3, sys_.side_point(3, gap.first), sys_.side_point(3, gap.second));
    BallSpec copy{f(c_omega_), f.scale() * r_omega_};
    std::vector<BallSpec> parts{copy};
    if (level < depth_) {
      parts.push_back(fill(K, {pr.lo, gap.first}, level + 1, 2 * heap + 1));
      parts.push_back(fill(K, {gap.second, pr.hi}, level + 1, 2 * heap + 2));
    } else {
      parts.push_back({f(sys_.x0()), 3.0 * f.scale() * sys_.D0()});
    }
    Point2 a = sys_.side_point(3, pr.lo), b = sys_.side_point(3, pr.hi);
    Point2 m = 0.5 * (a + b);
    double r = 0.5 * dist(a, b);
    for (auto& p : parts) r = std::max(r, dist(p.center, m) + p.radius);
    balls_[heap] = {m, r};
    return balls_[heap];
  }

  PricklySystem sys_;
  int depth_;
  Point2 c_omega_;
  double r_omega_ = 0;
  std::vector<BallSpec> balls_;
};

struct BallMass {
  double lower = 0.0;    // mass of disjoint groups contained in the ball
  double upper = 0.0;    // mass of the cover groups meeting the ball
  double witness = 0.0;  // largest single contained group
  std::size_t nodes = 0;
};

inline BallMass ball_mass(const GroupGeometry& geo, Point2 x, double rho, double t, int extra_levels = 4,
                          int max_norm = 60) {
  if (!(rho > 0)) throw DomainError("ball_mass: rho must be positive");
  const double D0 = geo.system().D0();
  BallMass out;
  struct Item { GroupNode n; int below_cover; };
  std::vector<Item> stack;
  for (auto& r : geo.roots()) stack.push_back({r, -1});
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    ++out.nodes;
    BallSpec b = geo.ball(it.n);
    double dc = dist(b.center, x);
    if (dc - b.radius >= rho) continue;
    double m = geo.mass(it.n, t);
    int below = it.below_cover;
    if (below < 0 && it.n.sigma * D0 <= rho) {
      out.upper += m;
      below = 0;
    }
    if (dc + b.radius <= rho) {
      if (below < 0) out.upper += m;
      out.lower += m;
      out.witness = std::max(out.witness, m);
      continue;
    }
    if (below >= extra_levels) continue;
    if (it.n.norm >= max_norm) {
      if (below < 0) out.upper += m;
      continue;
    }
    for (auto& c : geo.children(it.n)) stack.push_back({c, below < 0 ? -1 : below + 1});
  }
  if (out.lower <= 0) throw ResolutionError("ball_mass: no contained group found within the search budget");
  return out;
}

struct AhlforsSample {
  Point2 center;
  double rho = 0;
  double lower = 0;
  double upper = 0;
  double estimate = 0;  // geometric mean of lower and upper
  bool lower_checked = true;
};

struct AhlforsReport {
  double t = 0;
  std::vector<AhlforsSample> samples;
  double upper_const = 0;   // max upper/rho^t
  double lower_const = 0;   // min lower/rho^t over rho <= diam
  double estimate_max = 0;  // max estimate/rho^t
  double estimate_min = 0;  // min estimate/rho^t over rho <= diam
  double A_certified = 0;   // upper_const / lower_const
  double A_estimate = 0;    // estimate_max / estimate_min
  bool pass = false;
};

inline AhlforsReport ahlfors_scan(const GroupGeometry& geo, const std::vector<Point2>& centers,
                                  const std::vector<double>& radii, double A_max = 1e3, unsigned jobs = 1) {
  const double t = geo.system().t();
  const double diam = geo.system().D0();
  AhlforsReport rep;
  rep.t = t;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t k = 0; k < radii.size(); ++k) pairs.push_back({i, k});
  rep.samples.resize(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t q) {
    auto [i, k] = pairs[q];
    BallMass bm = ball_mass(geo, centers[i], radii[k], t);
    AhlforsSample s;
    s.center = centers[i];
    s.rho = radii[k];
    s.lower = bm.lower;
    s.upper = bm.upper;
    s.estimate = std::sqrt(bm.lower * bm.upper);
    s.lower_checked = radii[k] <= diam;
    rep.samples[q] = s;
  });
  rep.upper_const = 0;
  rep.lower_const = std::numeric_limits<double>::infinity();
  rep.estimate_min = std::numeric_limits<double>::infinity();
  for (auto& s : rep.samples) {
    double rt = std::pow(s.rho, t);
    rep.upper_const = std::max(rep.upper_const, s.upper / rt);
    rep.estimate_max = std::max(rep.estimate_max, s.estimate / rt);
    if (s.lower_checked) {
      rep.lower_const = std::min(rep.lower_const, s.lower / rt);
      rep.estimate_min = std::min(rep.estimate_min, s.estimate / rt);
    }
  }
  if (std::isfinite(rep.lower_const) && rep.lower_const > 0) {
    rep.A_certified = rep.upper_const / rep.lower_const;
    rep.A_estimate = rep.estimate_max / rep.estimate_min;
    rep.pass = std::isfinite(rep.A_certified) && rep.A_certified <= A_max;
  } else {
    rep.lower_const = 0;
    rep.A_certified = std::numeric_limits<double>::infinity();
    rep.A_estimate = std::numeric_limits<double>::infinity();
    rep.pass = false;
  }
  return rep;
}

// Deterministic selection of n points on Gamma: anchors of the groups at scale sigma_level.
inline std::vector<Point2> boundary_centers(const PricklySystem& sys, std::size_t n, std::uint64_t seed,
                                            double sigma_level) {
  std::vector<Point2> pool = sys.attractor_points(sigma_level);
  if (pool.size() < n) throw ResolutionError("boundary_centers: not enough attractor points");
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(gen() % (pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return pool;
}

inline double box_counting_dimension(const std::vector<Point2>& points, const std::vector<double>& scales) {
  if (points.size() < 1000) throw EstimationError("box_counting_dimension: need at least 1000 points");
  if (scales.size() < 4) throw EstimationError("box_counting_dimension: need at least 4 scales");
  auto [mn, mx] = std::minmax_element(scales.begin(), scales.end());
  if (!(*mn > 0) || *mx / *mn < 100.0 * (1 - 1e-12)) throw EstimationError("box_counting_dimension: scales must span two decades");
  BBox bb;
  for (auto& p : points) bb.expand(p);
  if (bb.width() <= 0 && bb.height() <= 0) throw EstimationError("box_counting_dimension: degenerate point set");
  std::vector<double> xs, ys;
  for (double eps : scales) {
    std::unordered_set<std::uint64_t> cells;
    cells.reserve(points.size());
    for (auto& p : points) {
      auto ix = static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor((p.x - bb.xmin) / eps)));
      auto iy = static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor((p.y - bb.ymin) / eps)));
      cells.insert((ix << 32) ^ iy);
    }
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(std::log(static_cast<double>(cells.size())));
  }
  LinearFit f = least_squares(xs, ys);
  if (!std::isfinite(f.slope)) throw EstimationError("box_counting_dimension: fit failed");
  return f.slope;
}

inline void write_csv(std::ostream& os, const AhlforsReport& r) {
  os << "center_x,center_y,rho,lower,upper,lower_over_rho_t,upper_over_rho_t\n";
  os.precision(17);
  for (auto& s : r.samples) {
    double rt = std::pow(s.rho, r.t);
    os << s.center.x << ',' << s.center.y << ',' << s.rho << ',' << s.lower << ',' << s.upper << ',' << s.lower / rt
       << ',' << s.upper / rt << '\n';
  }
}

}  // namespace nlfrac
