#pragma once

#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "core.hpp"

namespace nlfrac {

enum class DomainKind { wedge, prickly_snowflake, interval_1d, koch, polygon };

inline const char* to_string(DomainKind k) {
  switch (k) {
    case DomainKind::wedge: return "wedge";
    case DomainKind::prickly_snowflake: return "prickly_snowflake";
    case DomainKind::interval_1d: return "interval_1d";
    case DomainKind::koch: return "koch";
    case DomainKind::polygon: return "polygon";
  }
  return "unknown";
}

enum class Containment { outside, boundary, inside };

struct Polyline {
  std::vector<Point2> vertices;
  bool closed = false;

  std::size_t segment_count() const {
    if (vertices.size() < 2) return 0;
    return closed ? vertices.size() : vertices.size() - 1;
  }
  std::pair<Point2, Point2> segment(std::size_t i) const {
    return {vertices[i], vertices[(i + 1) % vertices.size()]};
  }
};

struct BBox {
  double xmin = std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();

  void expand(Point2 p) {
    xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
  }
  void expand(const BBox& b) {
    xmin = std::min(xmin, b.xmin); xmax = std::max(xmax, b.xmax);
    ymin = std::min(ymin, b.ymin); ymax = std::max(ymax, b.ymax);
  }
  double distance(Point2 p) const {
    double dx = std::max({xmin - p.x, 0.0, p.x - xmax});
    double dy = std::max({ymin - p.y, 0.0, p.y - ymax});
    return std::hypot(dx, dy);
  }
  bool overlaps(const BBox& b) const {
    return !(b.xmin > xmax || b.xmax < xmin || b.ymin > ymax || b.ymax < ymin);
  }
  Point2 center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

struct BallSpec {
  Point2 center;
  double radius = 0.0;
};

struct ApproachParams {
  Point2 base_point;
  double lambda = 0.5;
  double theta = 1.0;
  double delta = 1.0;
};

inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  Point2 ab = b - a;
  double len2 = dot(ab, ab);
  double t = len2 > 0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return dist(p, a + t * ab);
}

// Proper crossing or touching of two segments that do not merely share an endpoint.
inline bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  auto orient = [](Point2 p, Point2 q, Point2 r) {
    double v = cross(q - p, r - p);
    return (v > 0) - (v < 0);
  };
  auto on_seg = [](Point2 p, Point2 q, Point2 r) {
    return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) && std::min(p.y, r.y) <= q.y &&
           q.y <= std::max(p.y, r.y);
  };
  int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_seg(a, c, b)) return true;
  if (o2 == 0 && on_seg(a, d, b)) return true;
  if (o3 == 0 && on_seg(c, a, d)) return true;
  if (o4 == 0 && on_seg(c, b, d)) return true;
  return false;
}

// Bounding-volume hierarchy over the segments of a polyline.
class SegmentTree {
 public:
  explicit SegmentTree(const Polyline& pl) : pl_(pl) {
    const std::size_t n = pl_.segment_count();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    if (n > 0) nodes_.reserve(2 * n / kLeaf + 2), build(0, n);
  }

  const Polyline& polyline() const { return pl_; }

  double distance(Point2 p) const {
    if (nodes_.empty()) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
      const Node& nd = nodes_[stack.back()];
      stack.pop_back();
      if (nd.box.distance(p) >= best) continue;
      if (nd.left == kNone) {
        for (std::size_t k = nd.begin; k < nd.end; ++k) {
          auto [a, b] = pl_.segment(order_[k]);
          best = std::min(best, point_segment_distance(p, a, b));
        }
        continue;
      }
      double dl = nodes_[nd.left].box.distance(p), dr = nodes_[nd.right].box.distance(p);
      if (dl < dr) {
        stack.push_back(nd.right);
        stack.push_back(nd.left);
      } else {
        stack.push_back(nd.left);
        stack.push_back(nd.right);
      }
    }
    return best;
  }

  // Parity of crossings of the ray from p towards +x.
  bool odd_crossings(Point2 p) const {
    if (nodes_.empty()) return false;
    bool odd = false;
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
      const Node& nd = nodes_[stack.back()];
      stack.pop_back();
      if (nd.box.ymin > p.y || nd.box.ymax < p.y || nd.box.xmax < p.x) continue;
      if (nd.left == kNone) {
        for (std::size_t k = nd.begin; k < nd.end; ++k) {
          auto [a, b] = pl_.segment(order_[k]);
          if ((a.y > p.y) != (b.y > p.y)) {
            double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (xc > p.x) odd = !odd;
          }
        }
        continue;
      }
      stack.push_back(nd.left);
      stack.push_back(nd.right);
    }
    return odd;
  }

  // True if two non-adjacent segments meet.
  bool self_intersects() const {
    const std::size_t n = pl_.segment_count();
    for (std::size_t i = 0; i < n; ++i) {
      auto [a, b] = pl_.segment(i);
      BBox q;
      q.expand(a);
      q.expand(b);
      std::vector<std::size_t> stack{0};
      while (!stack.empty()) {
        const Node& nd = nodes_[stack.back()];
        stack.pop_back();
        if (!nd.box.overlaps(q)) continue;
        if (nd.left == kNone) {
          for (std::size_t k = nd.begin; k < nd.end; ++k) {
            std::size_t j = order_[k];
            if (j <= i) continue;
            bool adjacent = (j == i + 1) || (pl_.closed && i == 0 && j == n - 1);
            if (adjacent) continue;
            auto [c, d] = pl_.segment(j);
            if (segments_intersect(a, b, c, d)) return true;
          }
          continue;
        }
        stack.push_back(nd.left);
        stack.push_back(nd.right);
      }
    }
    return false;
  }

 private:
  static constexpr std::size_t kLeaf = 8;
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  struct Node {
    BBox box;
    std::size_t begin = 0, end = 0;
    std::size_t left = kNone, right = kNone;
  };

  BBox seg_box(std::size_t s) const {
    auto [a, b] = pl_.segment(s);
    BBox bb;
    bb.expand(a);
    bb.expand(b);
    return bb;
  }

  std::size_t build(std::size_t begin, std::size_t end) {
    std::size_t id = nodes_.size();
    nodes_.push_back({});
    BBox box, cbox;
    for (std::size_t k = begin; k < end; ++k) {
      BBox sb = seg_box(order_[k]);
      box.expand(sb);
      cbox.expand(sb.center());
    }
    nodes_[id].box = box;
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    if (end - begin <= kLeaf) return id;
    bool by_x = cbox.width() >= cbox.height();
    std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::size_t a, std::size_t b) {
                       Point2 ca = seg_box(a).center(), cb = seg_box(b).center();
                       return by_x ? ca.x < cb.x : ca.y < cb.y;
                     });
    std::size_t l = build(begin, mid);
    std::size_t r = build(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  Polyline pl_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

// Shape parameters carried along with a domain approximation.
struct DomainParams {
  double theta0 = 1.0;
  double H = 0.0;
  double a = 0.0;  // interval endpoints
  double b = 0.0;
};

// A planar (or 1D) domain: exact for intervals and polygons, boundary-approximated otherwise.
class DomainApprox {
 public:
  DomainApprox() = default;

  static DomainApprox interval(double a, double b) {
    DomainApprox d;
    d.kind_ = DomainKind::interval_1d;
    d.params_.a = a;
    d.params_.b = b;
    d.boundary_.vertices = {{a, 0.0}, {b, 0.0}};
    d.boundary_.closed = false;
    d.box_.expand(Point2{a, 0});
    d.box_.expand(Point2{b, 0});
    return d;
  }

  static DomainApprox from_polyline(DomainKind kind, Polyline boundary, int depth, double distance_error,
                                    DomainParams params = {}) {
    if (boundary.vertices.size() < 3) throw DomainError("polygonal domain needs at least 3 vertices");
    DomainApprox d;
    d.kind_ = kind;
    boundary.closed = true;
    d.boundary_ = std::move(boundary);
    d.depth_ = depth;
    d.distance_error_ = distance_error;
    d.params_ = params;
    for (auto& v : d.boundary_.vertices) d.box_.expand(v);
    d.tree_ = std::make_shared<const SegmentTree>(d.boundary_);
    return d;
  }

  DomainKind kind() const { return kind_; }
  bool is_1d() const { return kind_ == DomainKind::interval_1d; }
  int dimension() const { return is_1d() ? 1 : 2; }
  const Polyline& boundary() const { return boundary_; }
  int depth() const { return depth_; }
  double distance_error() const { return distance_error_; }
  const DomainParams& params() const { return params_; }
  const BBox& bbox() const { return box_; }

  double distance(Point2 p) const {
    if (is_1d()) return std::min(std::abs(p.x - params_.a), std::abs(params_.b - p.x));
    return tree_->distance(p);
  }

  Containment contains(Point2 p) const {
    if (is_1d()) {
      if (p.x > params_.a && p.x < params_.b) return Containment::inside;
      if (p.x == params_.a || p.x == params_.b) return Containment::boundary;
      return Containment::outside;
    }
    double dd = tree_->distance(p);
    if (dd <= distance_error_) return Containment::boundary;
    return tree_->odd_crossings(p) ? Containment::inside : Containment::outside;
  }

  // Strict interior of the approximating polygon itself (no error band).
  bool is_inside(Point2 p) const {
    if (is_1d()) return p.x > params_.a && p.x < params_.b;
    return tree_->odd_crossings(p) && tree_->distance(p) > 0;
  }

  bool boundary_is_simple() const { return is_1d() || !tree_->self_intersects(); }

  // Signed area of the boundary polygon (length for intervals).
  double measure() const {
    if (is_1d()) return params_.b - params_.a;
    double a = 0;
    const auto& v = boundary_.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * std::abs(a);
  }

 private:
  DomainKind kind_ = DomainKind::polygon;
  Polyline boundary_;
  int depth_ = 0;
  double distance_error_ = 0.0;
  DomainParams params_;
  BBox box_;
  std::shared_ptr<const SegmentTree> tree_;
};

// ---------------------------------------------------------------------------
// constructors

inline DomainApprox interval_domain(double a, double b) {
  if (!(a < b)) throw DomainError("interval_domain requires a < b");
  return DomainApprox::interval(a, b);
}

inline DomainApprox polygon_domain(std::vector<Point2> vertices) {
  Polyline pl{std::move(vertices), true};
  auto d = DomainApprox::from_polyline(DomainKind::polygon, std::move(pl), 0, 0.0);
  if (!d.boundary_is_simple()) throw DomainError("polygon boundary is not simple");
  return d;
}

inline DomainApprox unit_square() { return polygon_domain({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

namespace detail {

// Max distance between the convex arc x -> c*x^theta on [x0,x1] and its chord.
inline double power_arc_sagitta(double c, double theta, double x0, double x1) {
  if (theta == 1.0) return 0.0;
  double f0 = c * std::pow(x0, theta), f1 = c * std::pow(x1, theta);
  double slope = (f1 - f0) / (x1 - x0);
  double xs = std::pow(slope / (c * theta), 1.0 / (theta - 1.0));
  xs = std::clamp(xs, x0, x1);
  double gap = f0 + slope * (xs - x0) - c * std::pow(xs, theta);
  return std::abs(gap) / std::sqrt(1.0 + slope * slope);
}

inline void sample_power_arc(double c, double theta, double x0, double x1, double tol, std::vector<double>& xs,
                             double& worst, int level = 0) {
  double s = power_arc_sagitta(c, theta, x0, x1);
  if (s > tol && level < 40) {
    double xm = 0.5 * (x0 + x1);
    sample_power_arc(c, theta, x0, xm, tol, xs, worst, level + 1);
    sample_power_arc(c, theta, xm, x1, tol, xs, worst, level + 1);
    return;
  }
  worst = std::max(worst, s);
  xs.push_back(x1);
}

}  // namespace detail

// Cusped wedge {0<x1<H, |x2| < (1/2)(x1/H)^theta0}, cusp at the origin.
inline DomainApprox wedge_domain(double theta0, double H, double tolerance = 1e-4) {
  if (!(theta0 >= 1.0) || !std::isfinite(theta0)) throw DomainError("wedge_domain: theta0 must be >= 1");
  if (!(H > 0.5 && H <= std::sqrt(3.0) / 2.0 + 1e-15)) throw DomainError("wedge_domain: H must lie in (1/2, sqrt(3)/2]");
  if (!(tolerance > 0)) throw DomainError("wedge_domain: tolerance must be positive");
  const double c = 0.5 / std::pow(H, theta0);
  std::vector<double> xs{0.0};
  double worst = 0.0;
  detail::sample_power_arc(c, theta0, 0.0, H, tolerance, xs, worst);
  Polyline pl;
  pl.closed = true;
  for (double x : xs) pl.vertices.push_back({x, c * std::pow(x, theta0)});
  pl.vertices.back() = {H, 0.5};
  pl.vertices.push_back({H, -0.5});
  for (std::size_t k = xs.size() - 1; k-- > 1;) pl.vertices.push_back({xs[k], -c * std::pow(xs[k], theta0)});
  DomainParams prm;
  prm.theta0 = theta0;
  prm.H = H;
  return DomainApprox::from_polyline(DomainKind::wedge, std::move(pl), 0, worst, prm);
}

// ---------------------------------------------------------------------------
// queries

inline double distance_to_boundary(const DomainApprox& d, Point2 x) { return d.distance(x); }
inline Containment contains(const DomainApprox& d, Point2 x) { return d.contains(x); }

inline BallSpec psi_ball(const DomainApprox& d, Point2 x) {
  if (d.contains(x) != Containment::inside) throw DomainError("psi_ball: point is not interior");
  double r = d.distance(x);
  if (!(r > 0)) throw DomainError("psi_ball: point is on the boundary");
  return {x, 0.5 * r};
}

inline BallSpec phi_ball(const DomainApprox& d, Point2 x) {
  if (d.contains(x) != Containment::inside) throw DomainError("phi_ball: point is not interior");
  double r = d.distance(x);
  if (!(r > 0)) throw DomainError("phi_ball: point is on the boundary");
  return {x, r / 6.0};
}

inline void validate(const ApproachParams& a) {
  if (!(a.lambda > 0 && a.lambda < 1)) throw DomainError("approach: lambda must lie in (0,1)");
  if (!(a.theta >= 1)) throw DomainError("approach: theta must be >= 1");
  if (!(a.delta > 0)) throw DomainError("approach: delta must be positive");
}

// Membership in the approach region with precomputed distance value.
inline bool approach_test(const ApproachParams& a, double r, double dx) {
  return r < a.delta && dx > std::pow(a.lambda * r, a.theta);
}

inline bool approach_contains(const ApproachParams& a, const DomainApprox& d, Point2 x) {
  validate(a);
  if (d.contains(x) != Containment::inside) throw DomainError("approach_contains: point is not interior");
  return approach_test(a, dist(a.base_point, x), d.distance(x));
}

inline void write_csv(std::ostream& os, const Polyline& pl) {
  os << "x,y\n";
  os.precision(17);
  for (auto& v : pl.vertices) os << v.x << ',' << v.y << '\n';
}

}  // namespace nlfrac
