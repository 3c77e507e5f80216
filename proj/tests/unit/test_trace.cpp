#include <gtest/gtest.h>

#include <nlfrac/fractal.hpp>
#include <nlfrac/trace.hpp>

using namespace nlfrac;

namespace {

const DomainApprox& prickly() {
  static const DomainApprox d = prickly_domain(PricklySystem::build(2.0, 0.6), 6);
  return d;
}

}  // namespace

TEST(Trace, CorkscrewSequenceGeometry) {
  auto w = wedge_domain(2.0, 0.6);
  auto seq = corkscrew_sequence(w, {0.0, 0.0}, 0.3, 0.5, 2.0, 12);
  ASSERT_FALSE(seq.points.empty());
  EXPECT_TRUE(seq.missing.empty());
  for (auto& p : seq.points) {
    EXPECT_LE(p.offset, p.rho * (1 + 1e-12));
    EXPECT_GE(p.offset, 0.5 * p.rho * (1 - 1e-12));
    EXPECT_GT(p.distance, std::pow(0.3 * p.offset, 2.0));
    EXPECT_TRUE(w.is_inside(p.x));
  }
  // a nontangential cone does not reach into the cusp
  EXPECT_TRUE(corkscrew_sequence(w, {0.0, 0.0}, 0.3, 0.5, 1.0, 12).points.empty());
  EXPECT_THROW(corkscrew_sequence(w, {0.0, 0.0}, 1.2, 0.5, 2.0, 12), DomainError);
}

TEST(Trace, ContinuousFieldTraceIsBoundaryValue) {
  ScalarField u([](Point2 x) { return x.x + x.y; }, Regularity::smooth, "x+y");
  QuadratureSpec q;
  const auto& V = prickly().boundary().vertices;
  for (std::size_t k : {std::size_t(0), V.size() / 3, V.size() / 2}) {
    auto seq = corkscrew_sequence(prickly(), V[k], 0.4, 0.5, 2.0, 24);
    auto ts = trace_at(u, prickly(), seq, q);
    ASSERT_TRUE(ts.limit.has_value());
    EXPECT_NEAR(*ts.limit, u(V[k]), 1e-6);
    EXPECT_LT(ts.cauchy_tail, 1e-6);
  }
}

TEST(Trace, StepFieldTraceIsOneSided) {
  // the approach to the upper side stays in y > 0
  auto w = wedge_domain(1.0, 0.6);
  ScalarField u([](Point2 x) { return x.y > 0 ? 1.0 : 0.0; }, Regularity::piecewise_constant, "step");
  QuadratureSpec q;
  auto seq = corkscrew_sequence(w, {0.3, 0.5 * 0.3 / 0.6}, 0.4, 0.5, 1.0, 16);
  auto ts = trace_at(u, w, seq, q);
  ASSERT_TRUE(ts.limit.has_value());
  EXPECT_NEAR(*ts.limit, 1.0, 1e-9);
}

TEST(Trace, HolderRegressionRecoversExponent) {
  std::vector<double> off, res;
  for (int k = 0; k < 16; ++k) {
    off.push_back(std::pow(0.5, k));
    res.push_back(3.0 * std::pow(off.back(), 0.7));
  }
  auto h = holder_fit(off, res, 0.6);
  EXPECT_NEAR(h.beta_hat, 0.7, 1e-12);
  EXPECT_NEAR(h.C_hat, 3.0, 1e-11);
  EXPECT_TRUE(h.meets_prediction);
  EXPECT_THROW(holder_fit({1, 0.5}, {1, 0.5}, 0.5), EstimationError);
  EXPECT_NEAR(predicted_beta(0.0, 1.16, 2.0), 0.58, 1e-15);
}

TEST(Trace, LebesgueMeansShrink) {
  ScalarField u([](Point2 x) { return x.x + x.y; }, Regularity::smooth, "x+y");
  const Point2 xb = prickly().boundary().vertices[100];
  auto L = lebesgue_point_check(u, prickly(), xb, u(xb), 2, {0.1, 0.05, 0.02, 0.01});
  ASSERT_EQ(L.means.size(), 4u);
  EXPECT_NEAR(L.kendall, 1.0, 1e-15);
  EXPECT_LT(L.means.back(), L.means.front());
}

TEST(Trace, RegionMasksAndCurves) {
  const double t = PricklySystem::build(2.0, 0.6).t();
  auto g = region_grid({1, 4}, {0, 3}, 2.0, t, 2, 64);
  std::size_t strict = 0;
  for (std::size_t i = 0; i < g.ss.size(); ++i)
    for (std::size_t j = 0; j < g.ps.size(); ++j) {
      EXPECT_FALSE(g.lebesgue_mask[i][j] && !g.trace_mask[i][j]);
      strict += g.trace_mask[i][j] && !g.lebesgue_mask[i][j];
    }
  EXPECT_GT(strict, 0u);
  for (auto mode : {AdmissibleMode::trace_wbp, AdmissibleMode::lebesgue}) {
    const double c = admissible_threshold(mode, 2.0, t, 2);
    auto bp = level_curve_breakpoint(c, 2.0, 2);
    EXPECT_NEAR(bp.first, bp.second, 1e-12);
    for (double p : {1.2, 2.5, 3.7}) EXPECT_NEAR(alpha(level_curve_s(p, c, 2.0, 2), 2.0, p, 2), c, 1e-12);
  }
  EXPECT_THROW(region_grid({1, 4}, {0, 3}, 2.0, t, 2, 8), DomainError);
}
