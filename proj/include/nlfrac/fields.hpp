#pragma once

#include <functional>
#include <memory>
#include <sstream>

#include "geometry.hpp"

namespace nlfrac {

enum class Regularity { smooth, piecewise_constant, indicator_sum };

inline const char* to_string(Regularity r) {
  switch (r) {
    case Regularity::smooth: return "smooth";
    case Regularity::piecewise_constant: return "piecewise_constant";
    case Regularity::indicator_sum: return "indicator_sum";
  }
  return "?";
}

// One interval of a 1D indicator-sum field, on (0,1] before mirroring.
struct SupportInterval {
  int j = 0;
  double lo = 0;
  double hi = 0;
  double amplitude = 1;
  bool degenerate = false;      // written endpoints were reversed
  std::string convention;       // which reading produced [lo,hi]
};

class ScalarField {
 public:
  using Eval = std::function<double(Point2)>;

  ScalarField() = default;
  ScalarField(Eval f, Regularity r, std::string description) : f_(std::move(f)), reg_(r), desc_(std::move(description)) {}

  double operator()(Point2 x) const { return f_(x); }
  double operator()(double x) const { return f_({x, 0.0}); }

  Regularity regularity() const { return reg_; }
  const std::string& description() const { return desc_; }

  // support descriptor; empty unless the field is an indicator sum
  const std::vector<SupportInterval>& intervals() const { return intervals_; }
  const std::vector<std::string>& diagnostics() const { return diag_; }
  bool mirrored() const { return mirror_; }

  // Exact integral of |u| over the support (both halves when mirrored).
  double support_measure() const {
    std::vector<std::pair<double, double>> iv;
    for (auto& s : intervals_)
      if (s.hi > s.lo) iv.push_back({s.lo, s.hi});
    std::sort(iv.begin(), iv.end());
    double m = 0, cur_lo = 0, cur_hi = -1;
    for (auto& [a, b] : iv) {
      if (a > cur_hi) {
        if (cur_hi > cur_lo) m += cur_hi - cur_lo;
        cur_lo = a;
        cur_hi = b;
      } else {
        cur_hi = std::max(cur_hi, b);
      }
    }
    if (cur_hi > cur_lo) m += cur_hi - cur_lo;
    return mirror_ ? 2 * m : m;
  }

  // Sorted endpoints of all support intervals, mirrored ones included.
  const std::vector<double>& breakpoints() const {
    static const std::vector<double> none;
    return bps_ ? *bps_ : none;
  }

  static ScalarField constant(double c) {
    return {[c](Point2) { return c; }, Regularity::smooth, "constant"};
  }

 private:
  friend struct FieldBuilder;
  Eval f_;
  Regularity reg_ = Regularity::smooth;
  std::string desc_;
  std::vector<SupportInterval> intervals_;
  std::vector<std::string> diag_;
  bool mirror_ = false;
  std::shared_ptr<const std::vector<double>> bps_;
};

struct ExponentField {
  std::function<double(Point2)> eval;
  double bound = 0;
  std::string kind;
  double base = 0;
  double exponent = 0;

  double operator()(Point2 x) const { return eval(x); }
  double operator()(double x) const { return eval({x, 0.0}); }
  bool is_constant() const { return kind == "constant"; }
};

// ---------------------------------------------------------------------------
// counterexample

enum class EjConvention { shifted, min_max };

inline const char* to_string(EjConvention c) { return c == EjConvention::shifted ? "shifted" : "min_max"; }

inline EjConvention parse_convention(const std::string& s) {
  if (s == "shifted") return EjConvention::shifted;
  if (s == "min_max" || s == "minmax") return EjConvention::min_max;
  throw DomainError("unknown E_j convention: " + s);
}

struct CounterexampleSpec {
  double p = 1.0;
  double s0 = 1.0;
  int J_max = 60;
  EjConvention convention = EjConvention::shifted;
  bool damped = false;  // amplitudes 1/ln(j+1) instead of 1

  void validate() const {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("counterexample: p must be >= 1");
    if (!(s0 * p >= 1.0 - 1e-15) || !std::isfinite(s0)) throw DomainError("counterexample: s0 must be >= 1/p");
    if (J_max < 1 || J_max > 500) throw DomainError("counterexample: J_max must lie in [1,500]");
  }
};

inline double amplitude_a(const CounterexampleSpec& spec, int j) {
  if (j < 1) throw DomainError("amplitude_a: j must be >= 1");
  const double p = spec.p;
  const double jj = static_cast<double>(j);
  double num = std::pow(4.0, -jj * (spec.s0 - 1.0 / p));
  double den = 5.0 * std::pow(jj, 1.0 / p) * std::pow(std::log(jj + 2.0), 2.0 / p);
  return num / den;
}

inline double counterexample_amplitude(const CounterexampleSpec& spec, int j) {
  return spec.damped ? 1.0 / std::log(j + 1.0) : 1.0;
}

// E_j as realized under the chosen convention.
inline SupportInterval counterexample_interval(const CounterexampleSpec& spec, int j) {
  const double base = std::pow(4.0, -static_cast<double>(j));
  const double a = amplitude_a(spec, j);
  SupportInterval s;
  s.j = j;
  s.amplitude = counterexample_amplitude(spec, j);
  s.degenerate = a < 1.0;
  if (spec.convention == EjConvention::shifted) {
    s.lo = base;
    s.hi = (1.0 + a) * base;
    s.convention = "shifted";
  } else {
    s.lo = std::min(base, a * base);
    s.hi = std::max(base, a * base);
    s.convention = s.degenerate ? "min_max(reversed)" : "min_max";
  }
  return s;
}

struct FieldBuilder {
  static ScalarField indicator_sum(std::vector<SupportInterval> iv, bool mirror, std::string desc,
                                   std::vector<std::string> diag) {
    auto ivs = std::make_shared<const std::vector<SupportInterval>>(iv);
    auto eval = [ivs, mirror](Point2 p) {
      double x = p.x;
      if (mirror && x > 1.0) x = 2.0 - x;
      if (!(x > 0.0) || !(x <= 1.0)) return 0.0;
      // intervals may overlap under min_max; take the largest amplitude covering x
      double v = 0.0;
      for (auto& s : *ivs)
        if (s.lo < x && x < s.hi) v = std::max(v, s.amplitude);
      return v;
    };
    ScalarField f(eval, Regularity::indicator_sum, std::move(desc));
    f.intervals_ = std::move(iv);
    f.mirror_ = mirror;
    f.diag_ = std::move(diag);
    std::vector<double> b;
    for (auto& s : f.intervals_) {
      if (!(s.hi > s.lo)) continue;
      b.push_back(s.lo);
      b.push_back(s.hi);
      if (mirror) {
        b.push_back(2 - s.lo);
        b.push_back(2 - s.hi);
      }
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    f.bps_ = std::make_shared<const std::vector<double>>(std::move(b));
    return f;
  }
};

inline ScalarField counterexample_field(const CounterexampleSpec& spec) {
  spec.validate();
  std::vector<SupportInterval> iv;
  std::vector<std::string> diag;
  for (int j = 1; j <= spec.J_max; ++j) {
    auto s = counterexample_interval(spec, j);
    if (s.degenerate) {
      std::ostringstream os;
      os << "E_" << j << ": a_j=" << amplitude_a(spec, j) << " < 1, endpoints reversed; using " << s.convention;
      diag.push_back(os.str());
    }
    iv.push_back(s);
  }
  std::ostringstream d;
  d << "counterexample(p=" << spec.p << ", s0=" << spec.s0 << ", J_max=" << spec.J_max << ", "
    << to_string(spec.convention) << (spec.damped ? ", damped" : "") << ")";
  return FieldBuilder::indicator_sum(std::move(iv), true, d.str(), std::move(diag));
}

// ---------------------------------------------------------------------------
// exponent fields

struct ExponentFormula {
  enum class Kind { constant, distance_power } kind = Kind::constant;
  double base = 0;
  double exponent = 0;

  static ExponentFormula constant(double s0) { return {Kind::constant, s0, 0}; }
  static ExponentFormula distance_power(double base, double exponent) { return {Kind::distance_power, base, exponent}; }
};

// Upper bound for the distance to the boundary inside the domain.
inline double max_boundary_distance(const DomainApprox& dom) {
  BBox b = dom.bbox();
  if (dom.is_1d()) return 0.5 * b.width();
  return 0.5 * std::min(b.width(), b.height());
}

inline ExponentField variable_exponent_field(const ExponentFormula& f, const DomainApprox* dom = nullptr) {
  if (!std::isfinite(f.base) || !std::isfinite(f.exponent)) throw DomainError("exponent field: parameters must be finite");
  ExponentField e;
  e.base = f.base;
  e.exponent = f.exponent;
  if (f.kind == ExponentFormula::Kind::constant) {
    if (f.base < 0) throw DomainError("exponent field: constant must be nonnegative");
    double s = f.base;
    e.kind = "constant";
    e.eval = [s](Point2) { return s; };
    e.bound = s;
    return e;
  }
  if (!dom) throw DomainError("exponent field: distance_power needs a domain");
  double dmax = max_boundary_distance(*dom);
  double lo = f.base + std::min(0.0, f.exponent) * dmax;
  if (f.base < 0 || lo < 0) throw DomainError("exponent field: s must stay nonnegative");
  auto d = std::make_shared<DomainApprox>(*dom);
  double b = f.base, k = f.exponent;
  e.kind = "distance_power";
  e.eval = [d, b, k](Point2 x) { return b + k * d->distance(x); };
  e.bound = f.base + std::max(0.0, f.exponent) * dmax;
  return e;
}

}  // namespace nlfrac
