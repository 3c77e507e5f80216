#include <gtest/gtest.h>

#include <random>

#include <nlfrac/measure.hpp>

using namespace nlfrac;

TEST(Measure, LFromDimensionInverts) {
  for (double L : {0.6, 0.81, 1.0, 1.3}) EXPECT_NEAR(L_from_dimension(hausdorff_dimension(L)), L, 1e-10);
}

TEST(Measure, SuccessorMassesSumToParent) {
  const double t = PricklySystem::build(2.0, 0.6).t();
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    CompositeIndex c;
    for (int e = 0, n = 1 + int(gen() % 5); e < n; ++e) {
      Index i{3 + int(gen() % 2), {}};
      for (int k = 0, m = int(gen() % 6); k < m; ++k) i.tail.push_back(std::uint8_t(1 + gen() % 2));
      c.entries.push_back(i);
    }
    double sum = 0;
    for (int k = 1; k <= 4; ++k) sum += group_mass(c.child(k), t);
    EXPECT_NEAR(sum / group_mass(c, t), 1.0, 1e-12);
  }
}

TEST(Measure, TopLevelGroupsCarryUnitMass) {
  const double t = PricklySystem::build(2.0, 0.6).t();
  ConformalMeasure mu{t};
  EXPECT_NEAR(mu.mass(parse_composite_index("3")) + mu.mass(parse_composite_index("4")), 1.0, 1e-12);
  EXPECT_THROW(group_mass(parse_composite_index("3"), 2.5), DomainError);
}

TEST(Measure, BallMassBracketsAndGrows) {
  auto sys = PricklySystem::build(2.0, 0.6);
  GroupGeometry geo(sys);
  auto c = boundary_centers(sys, 3, 5, 1e-3);
  ASSERT_EQ(c.size(), 3u);
  for (Point2 x : c) {
    double prev = 0;
    for (double rho : {0.004, 0.012, 0.037, 0.11}) {
      auto b = ball_mass(geo, x, rho, sys.t());
      EXPECT_LE(b.lower, b.upper);
      EXPECT_LE(b.witness, b.lower + 1e-15);
      EXPECT_GE(b.upper, prev);
      prev = b.upper;
    }
  }
  EXPECT_THROW(ball_mass(geo, c[0], 0.0, sys.t()), DomainError);
}

TEST(Measure, AhlforsScanDeterministicAndBounded) {
  auto sys = PricklySystem::build(2.0, 0.6);
  GroupGeometry geo(sys);
  auto centers = boundary_centers(sys, 6, 9, 1e-3);
  std::vector<double> radii{1.0 / 9, 1.0 / 27, 1.0 / 81, 1.0 / 243};
  auto a = ahlfors_scan(geo, centers, radii, 1e3, 1);
  auto b = ahlfors_scan(geo, centers, radii, 1e3, 3);
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(a.A_certified, b.A_certified);
  EXPECT_EQ(a.A_estimate, b.A_estimate);
  EXPECT_GE(a.A_certified, a.A_estimate);
  EXPECT_LT(a.A_certified, 1e3);
  EXPECT_EQ(a.samples.size(), centers.size() * radii.size());
}

TEST(Measure, BoxCountingOnKnownSets) {
  std::vector<Point2> line, plane;
  for (int i = 0; i < 100000; ++i) line.push_back({i / 100000.0, 0.3});
  for (int i = 0; i < 1000; ++i)
    for (int j = 0; j < 1000; ++j) plane.push_back({i / 1000.0, j / 1000.0});
  std::vector<double> scales{0.2, 0.08, 0.03, 0.01, 0.004, 0.002};
  EXPECT_NEAR(box_counting_dimension(line, scales), 1.0, 0.02);
  EXPECT_NEAR(box_counting_dimension(plane, scales), 2.0, 0.05);
}

TEST(Measure, KochBoxCounting) {
  auto sys = PricklySystem::build(1.0, std::sqrt(3.0) / 2);
  auto pts = sys.attractor_points(std::pow(3.0, -10) * (1 + 1e-9));
  std::vector<double> scales;
  for (int k = 2; k <= 7; ++k) scales.push_back(std::pow(3.0, -k));
  EXPECT_NEAR(box_counting_dimension(pts, scales), std::log(4.0) / std::log(3.0), 0.05);
}
