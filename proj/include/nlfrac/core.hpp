#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/random/sobol.hpp>

namespace nlfrac {

// ---------------------------------------------------------------------------
// errors

enum class ErrorClass { usage, domain, resolution, resource, construction, cutoff, estimation, degenerate_pair, inconsistency };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass c, const std::string& what) : std::runtime_error(what), cls_(c) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

struct DomainError : Error { explicit DomainError(const std::string& w) : Error(ErrorClass::domain, w) {} };
struct ResolutionError : Error { explicit ResolutionError(const std::string& w) : Error(ErrorClass::resolution, w) {} };
struct ResourceError : Error { explicit ResourceError(const std::string& w) : Error(ErrorClass::resource, w) {} };
struct ConstructionError : Error { explicit ConstructionError(const std::string& w) : Error(ErrorClass::construction, w) {} };
struct CutoffError : Error { explicit CutoffError(const std::string& w) : Error(ErrorClass::cutoff, w) {} };
struct EstimationError : Error { explicit EstimationError(const std::string& w) : Error(ErrorClass::estimation, w) {} };
struct DegeneratePairError : Error { explicit DegeneratePairError(const std::string& w) : Error(ErrorClass::degenerate_pair, w) {} };
struct InconsistencyError : Error { explicit InconsistencyError(const std::string& w) : Error(ErrorClass::inconsistency, w) {} };

// ---------------------------------------------------------------------------
// points

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
inline bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(Point2 a, Point2 b) { return !(a == b); }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline bool finite(Point2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

inline std::complex<double> to_complex(Point2 p) { return {p.x, p.y}; }
inline Point2 to_point(std::complex<double> z) { return {z.real(), z.imag()}; }

// ---------------------------------------------------------------------------
// summation and fitting

// Compensated (Neumaier) accumulator.
class NeumaierSum {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

inline LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw EstimationError("least_squares needs at least two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0) throw EstimationError("least_squares: abscissae coincide");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.n = xs.size();
  return f;
}

// Kendall rank correlation (tau-a).
inline double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  if (n < 2) return 0.0;
  long conc = 0, disc = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = (a[i] - a[j]) * (b[i] - b[j]);
      if (s > 0) ++conc;
      else if (s < 0) ++disc;
    }
  return static_cast<double>(conc - disc) / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

// ---------------------------------------------------------------------------
// quadrature rules on [0,1]

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {
template <unsigned N>
Rule1D make_gauss_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  Rule1D r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0) {
      r.nodes.push_back(0.5);
      r.weights.push_back(0.5 * w[k]);
    } else {
      r.nodes.push_back(0.5 - 0.5 * a[k]);
      r.weights.push_back(0.5 * w[k]);
      r.nodes.push_back(0.5 + 0.5 * a[k]);
      r.weights.push_back(0.5 * w[k]);
    }
  }
  std::vector<std::size_t> idx(r.nodes.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return r.nodes[i] < r.nodes[j]; });
  Rule1D s;
  for (auto i : idx) { s.nodes.push_back(r.nodes[i]); s.weights.push_back(r.weights[i]); }
  return s;
}
}  // namespace detail

// Gauss-Legendre rule mapped to [0,1]; order is rounded up to a supported size.
inline const Rule1D& gauss_rule(int order) {
  static const Rule1D g2 = detail::make_gauss_rule<2>();
  static const Rule1D g3 = detail::make_gauss_rule<3>();
  static const Rule1D g4 = detail::make_gauss_rule<4>();
  static const Rule1D g6 = detail::make_gauss_rule<6>();
  static const Rule1D g8 = detail::make_gauss_rule<8>();
  static const Rule1D g12 = detail::make_gauss_rule<12>();
  static const Rule1D g16 = detail::make_gauss_rule<16>();
  static const Rule1D g24 = detail::make_gauss_rule<24>();
  static const Rule1D g32 = detail::make_gauss_rule<32>();
  if (order <= 2) return g2;
  if (order <= 3) return g3;
  if (order <= 4) return g4;
  if (order <= 6) return g6;
  if (order <= 8) return g8;
  if (order <= 12) return g12;
  if (order <= 16) return g16;
  if (order <= 24) return g24;
  return g32;
}

// ---------------------------------------------------------------------------
// low-discrepancy points

// First n points of the 2D Sobol sequence, digitally shifted by a seed-derived offset.
inline std::vector<Point2> sobol_points(std::size_t n, std::uint64_t seed) {
  boost::random::sobol_engine<std::uint64_t, 64> gen(2);
  gen.seed(1);
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL;
  auto mix = [](std::uint64_t v) {
    v ^= v >> 30; v *= 0xBF58476D1CE4E5B9ULL;
    v ^= v >> 27; v *= 0x94D049BB133111EBULL;
    v ^= v >> 31;
    return v;
  };
  const std::uint32_t sx = static_cast<std::uint32_t>(mix(z) >> 32);
  const std::uint32_t sy = static_cast<std::uint32_t>(mix(z + 1) >> 32);
  std::vector<Point2> out;
  out.reserve(n);
  const double scale = 1.0 / 4294967296.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t a = static_cast<std::uint32_t>(static_cast<std::uint64_t>(gen()) >> 32) ^ sx;
    std::uint32_t b = static_cast<std::uint32_t>(static_cast<std::uint64_t>(gen()) >> 32) ^ sy;
    out.push_back({(a + 0.5) * scale, (b + 0.5) * scale});
  }
  return out;
}

// ---------------------------------------------------------------------------
// parallelism

inline unsigned default_jobs() {
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1u : h;
}

// Runs body(i) for i in [0,n) on up to `jobs` threads. Results must be written to
// per-index slots so the outcome is independent of scheduling.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& body) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += jobs) body(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace nlfrac
