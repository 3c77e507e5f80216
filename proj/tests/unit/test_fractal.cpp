#include <gtest/gtest.h>

#include <nlfrac/fractal.hpp>

using namespace nlfrac;

// reference roots of 2(L^t + 1) = 3^t (mpmath, tests/oracles/oracles.py)
TEST(Fractal, DimensionSolverOracle) {
  EXPECT_NEAR(hausdorff_dimension(1.0), 1.2618595071429149, 1e-13);
  EXPECT_NEAR(hausdorff_dimension((1 + std::sqrt(3.0)) / 2), 1.4993608253247978, 1e-12);
  EXPECT_NEAR(hausdorff_dimension(0.75), 1.1262881039516677, 1e-12);
  EXPECT_THROW(hausdorff_dimension(0.4), DomainError);
  EXPECT_THROW(hausdorff_dimension(1.5), DomainError);
}

TEST(Fractal, DimensionInvertsMeasureRelation) {
  for (double L : {0.6, 0.8, 1.0, 1.2, 1.3}) {
    const double t = hausdorff_dimension(L);
    EXPECT_NEAR(2 * (std::pow(L, t) + 1), std::pow(3.0, t), 1e-11);
  }
}

TEST(Fractal, IndexAlgebra) {
  auto c = parse_composite_index("3.12|4");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.norm(), 4);
  EXPECT_EQ(to_string(c), "3.12|4");
  EXPECT_TRUE(partial_order_leq(c.truncated(1), c));
  EXPECT_FALSE(partial_order_leq(c, c.truncated(1)));
  EXPECT_EQ(c.child(1).norm(), 5);
  EXPECT_EQ(c.child(3).size(), 3u);
  EXPECT_THROW(parse_composite_index("5"), DomainError);
  EXPECT_THROW(parse_composite_index("3.13"), DomainError);
}

TEST(Fractal, GroupedFamilyCounts) {
  // each group has two tail children and two new entries
  auto fam = grouped_family(parse_composite_index("3"), 4);
  std::size_t expected = 0;
  for (int k = 1; k <= 4; ++k) expected += static_cast<std::size_t>(std::pow(4, k - 1));
  EXPECT_EQ(fam.size(), expected);
}

TEST(Fractal, KochSpecialCase) {
  auto sys = PricklySystem::build(1.0, std::sqrt(3.0) / 2);
  EXPECT_TRUE(sys.is_koch());
  EXPECT_NEAR(sys.L(), 1.0, 1e-10);
  EXPECT_NEAR(sys.t(), std::log(4.0) / std::log(3.0), 1e-9);
}

TEST(Fractal, PricklyConstants) {
  auto sys = PricklySystem::build(2.0, 0.6);
  EXPECT_NEAR(sys.t(), hausdorff_dimension(sys.L()), 1e-12);
  EXPECT_NEAR(sys.L(), L_from_geometry(2.0, 0.6), 1e-12);
  EXPECT_GT(sys.t(), 1.0);
  EXPECT_LT(sys.t(), std::log(4.0) / std::log(3.0));
  // images of the initial chord have ratio L/3
  Index i{3, {}};
  EXPECT_NEAR(sys.map(i).scale(), sys.L() / 3.0, 1e-9);
}

TEST(Fractal, PolylineIsSimpleAndConverges) {
  auto sys = PricklySystem::build(2.0, 0.6);
  double e4 = 0, e6 = 0;
  auto p4 = sys.boundary_polyline(4, &e4);
  auto p6 = sys.boundary_polyline(6, &e6);
  EXPECT_GT(p6.vertices.size(), p4.vertices.size());
  EXPECT_LT(e6, e4);
  auto dom = prickly_domain(sys, 6);
  EXPECT_TRUE(dom.boundary_is_simple());
  EXPECT_EQ(dom.contains(sys.x0()), Containment::inside);
}

TEST(Fractal, OpenSetConditionRejectsBadHeight) {
  EXPECT_THROW(PricklySystem::build(2.0, 0.3), Error);
  EXPECT_THROW(PricklySystem::build(0.5, 0.6), Error);
}
