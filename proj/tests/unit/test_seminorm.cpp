#include <gtest/gtest.h>

#include <nlfrac/seminorm.hpp>

using namespace nlfrac;

namespace {

ScalarField field(double (*f)(Point2), const char* name) { return ScalarField(f, Regularity::smooth, name); }

ExponentField s_const(double s) { return variable_exponent_field(ExponentFormula::constant(s)); }

}  // namespace

// reference values: nested adaptive quadrature in tests/oracles/oracles.py
TEST(Seminorm, IntervalOracles) {
  auto I = interval_domain(0.0, 2.0);
  QuadratureSpec q;
  auto x = field([](Point2 p) { return p.x; }, "x");
  auto sin3 = field([](Point2 p) { return std::sin(3 * p.x); }, "sin3x");
  auto sq = field([](Point2 p) { return p.x * p.x; }, "x2");
  EXPECT_NEAR(nu(x, s_const(1), 1, Region::whole(), I, q).value, 0.5, 1e-5);
  EXPECT_NEAR(nu(x, s_const(1), 2, Region::whole(), I, q).value, 0.125, 1e-5);
  EXPECT_NEAR(nu_pq(x, s_const(1), 2, 2, Region::whole(), I, q).value, 1.0 / 6.0, 1e-5);
  auto r = nu(sin3, s_const(0.5), 2, Region::whole(), I, q);
  EXPECT_NEAR(r.value, 0.22506588890768336, r.error);
  EXPECT_LT(r.error, 1e-4);
  EXPECT_NEAR(nu_pq(sin3, s_const(0.5), 1, 3, Region::whole(), I, q).value, 0.805872841907205, 1e-5);
  EXPECT_NEAR(nu_pq(sq, s_const(0.25), 1.5, 2, Region::whole(), I, q).value, 0.44374285702904537, 1e-5);
}

TEST(Seminorm, ConstantFieldHasZeroSeminorm) {
  auto I = interval_domain(0.0, 2.0);
  auto W = wedge_domain(2.0, 0.6);
  QuadratureSpec q;
  q.eps_cut = 1e-2;
  auto c = ScalarField::constant(3.0);
  EXPECT_EQ(nu(c, s_const(1), 2, Region::whole(), I, q).value, 0.0);
  EXPECT_EQ(nu_pq(c, s_const(1), 1, 2, Region::whole(), W, q).value, 0.0);
}

TEST(Seminorm, RegionRestrictionIsAdditive) {
  auto I = interval_domain(0.0, 2.0);
  QuadratureSpec q;
  auto u = field([](Point2 p) { return std::exp(p.x); }, "exp");
  const double all = nu(u, s_const(0.7), 2, Region::whole(), I, q).value;
  const double a = nu(u, s_const(0.7), 2, Region::interval(0.0, 0.8), I, q).value;
  const double b = nu(u, s_const(0.7), 2, Region::interval(0.8, 2.0), I, q).value;
  EXPECT_NEAR(a + b, all, 1e-7 * all);
}

TEST(Seminorm, PowerMeanOrdering) {
  auto I = interval_domain(0.0, 2.0);
  QuadratureSpec q;
  q.eps_cut = 1e-4;
  auto u = field([](Point2 p) { return std::cos(5 * p.x) + p.x; }, "cos5x+x");
  for (double p : {1.0, 2.0}) {
    const double base = nu(u, s_const(0.5), p, Region::whole(), I, q).value;
    double prev = base;
    for (double qq : {1.5, 2.0, 4.0}) {
      const double v = nu_pq(u, s_const(0.5), p, qq, Region::whole(), I, q).value;
      EXPECT_LE(prev, v * (1 + 1e-12));
      prev = v;
    }
  }
}

TEST(Seminorm, DivergentLadderIsDetected) {
  // s p > 1 + p for a linear field makes the boundary layer blow up like eps^{-(sp - p - 1)}
  auto I = interval_domain(0.0, 2.0);
  QuadratureSpec q;
  auto x = field([](Point2 p) { return p.x; }, "x");
  auto L = nu_ladder(x, s_const(2.5), 1, 1, Region::whole(), I, q, {1e-1, 1e-2, 1e-3, 1e-4});
  EXPECT_TRUE(L.divergent);
  EXPECT_NEAR(L.power_exponent, 0.5, 0.05);
  auto C = nu_ladder(x, s_const(1), 1, 1, Region::whole(), I, q, {1e-1, 1e-2, 1e-3, 1e-4});
  EXPECT_FALSE(C.divergent);
}

TEST(Seminorm, Square2DLinearField) {
  // for u = x the inner mean over a disk of radius r is 4r/(3 pi), so the integrand is (2/(3 pi)) d^{1-s}
  auto sq = unit_square();
  auto x = field([](Point2 p) { return p.x; }, "x");
  const double exact = 2.0 / (3.0 * M_PI) * (1 - 2e-2) * (1 - 2e-2);
  double prev = 1;
  for (int na : {16, 32, 64}) {
    QuadratureSpec q;
    q.eps_cut = 1e-2;
    q.angular_samples = na;
    auto r = nu(x, s_const(1), 1, Region::whole(), sq, q);
    EXPECT_NEAR(r.value, exact, r.error);
    EXPECT_LT(std::abs(r.value - exact), prev);
    prev = std::abs(r.value - exact);
  }
  EXPECT_LT(prev, 1e-4);
}

TEST(Seminorm, AlphaPiecewiseBilinear) {
  EXPECT_DOUBLE_EQ(alpha(1.5, 2.0, 2.0, 2), 2 * (1 - 2) + (3 - 2) * 2);
  EXPECT_DOUBLE_EQ(alpha(2.0, 2.0, 2.0, 2), (1 - 2) + (4 - 2));
  // the two branches agree at ps - n = p - 1
  const double p = 3, n = 2, s_b = (p - 1 + n) / p;
  EXPECT_NEAR(alpha(s_b - 1e-12, 1.7, p, n), alpha(s_b + 1e-12, 1.7, p, n), 1e-10);
  EXPECT_THROW(alpha(1, 0.5, 2, 2), DomainError);
}

TEST(Seminorm, EnvelopeOfConstantExponent) {
  auto W = wedge_domain(2.0, 0.6);
  QuadratureSpec q;
  auto L = alpha_envelope_ladder(s_const(1.5), 2.0, {0.0, 0.0}, {0.1, 0.05, 0.025}, 2.0, 2, W, q);
  for (double v : L.values) EXPECT_NEAR(v, alpha(1.5, 2.0, 2.0, 2), 1e-15);
}

TEST(Seminorm, CutoffValidation) {
  auto W = wedge_domain(2.0, 0.6);
  QuadratureSpec q;
  q.eps_cut = 1e-6;
  auto x = field([](Point2 p) { return p.x; }, "x");
  EXPECT_THROW(nu(x, s_const(1), 1, Region::whole(), W, q), DomainError);
}
