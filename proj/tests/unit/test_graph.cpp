#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dyncomp/errors.hpp"
#include "dyncomp/graph.hpp"
#include "dyncomp/spectrum.hpp"
#include "random_scenarios.hpp"

using namespace dyncomp;
using namespace dyncomp::testing;

namespace {

DiGraph chain(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, i + 1, 1.0});
  return DiGraph(n, edges);
}

}  // namespace

TEST(SpanningTree, Examples) {
  EXPECT_TRUE(has_spanning_tree(chain(5)));
  const std::vector<Edge> isolated = {{0, 1, 1}, {1, 2, 1}, {2, 4, 1}};
  EXPECT_FALSE(has_spanning_tree(DiGraph(4, isolated)));
  std::vector<Edge> star;
  for (int i = 1; i <= 4; ++i) star.push_back({0, i, 1.0});
  EXPECT_TRUE(has_spanning_tree(DiGraph(4, star)));
  // Reachable only against edge direction.
  const std::vector<Edge> backwards = {{0, 1, 1}, {2, 1, 1}};
  EXPECT_FALSE(has_spanning_tree(DiGraph(2, backwards)));
}

TEST(Construction, Rejections) {
  const std::vector<Edge> self = {{1, 1, 1.0}};
  EXPECT_THROW(DiGraph(2, self), ValidationError);
  const std::vector<Edge> to_leader = {{1, 0, 1.0}};
  EXPECT_THROW(DiGraph(2, to_leader), ValidationError);
  const std::vector<Edge> negative = {{0, 1, -1.0}};
  EXPECT_THROW(DiGraph(1, negative), ValidationError);
  const std::vector<Edge> out_of_range = {{0, 3, 1.0}};
  EXPECT_ANY_THROW(DiGraph(2, out_of_range));
}

TEST(BuildH, Examples) {
  Eigen::MatrixXd expected(2, 2);
  expected << 1, 0, -1, 1;
  EXPECT_EQ(build_h(chain(2)), expected);

  const std::vector<Edge> one = {{0, 1, 1.0}};
  EXPECT_EQ(build_h(DiGraph(1, one)), Eigen::MatrixXd::Ones(1, 1));

  const std::vector<Edge> leaderless = {{1, 2, 1.0}, {2, 1, 1.0}};
  EXPECT_NEAR(min_real_part(build_h(DiGraph(2, leaderless))), 0.0, 1e-12);
}

TEST(BuildAugmentedH, Examples) {
  const std::vector<Edge> one = {{0, 1, 1.0}};
  Eigen::MatrixXd expected(2, 2);
  expected << 1, -1, 0, 1;
  EXPECT_EQ(build_augmented_h(DiGraph(1, one), AugmentedSpec{{1}}), expected);

  // Chain 0 -> 1 -> 2, r = (1, 1): block lower triangular with unipotent
  // diagonal blocks, so the characteristic polynomial is (1 - lambda)^4.
  const Eigen::MatrixXd h = build_augmented_h(chain(2), AugmentedSpec{{1, 1}});
  Eigen::MatrixXd m(4, 4);
  m << 1, -1, 0, 0,
       0, 1, 0, 0,
       0, 0, 1, -1,
       -1, 0, 0, 1;
  EXPECT_EQ(h, m);
  Eigen::MatrixXd shifted = h - Eigen::MatrixXd::Identity(4, 4);
  EXPECT_NEAR((shifted * shifted * shifted * shifted).norm(), 0.0, 1e-12);

  const std::vector<Edge> leaderless = {{1, 2, 1.0}, {2, 1, 1.0}};
  EXPECT_LE(min_real_part(build_augmented_h(DiGraph(2, leaderless), AugmentedSpec{{1, 2}})), 1e-9);
  EXPECT_THROW(build_augmented_h(chain(2), AugmentedSpec{{1}}), DimensionError);
  EXPECT_THROW(build_augmented_h(chain(2), AugmentedSpec{{1, 0}}), DimensionError);
}

TEST(BuildAugmentedH, BlockLayout) {
  const std::vector<Edge> edges = {{0, 1, 0.7}, {1, 2, 1.3}, {2, 1, 0.4}};
  const AugmentedSpec spec{{2, 1}};
  const Eigen::MatrixXd h = build_augmented_h(DiGraph(2, edges), spec);
  ASSERT_EQ(h.rows(), 5);
  EXPECT_EQ(spec.offset(1), 0);
  EXPECT_EQ(spec.offset(2), 3);
  // Agent 1: rows 0..1 are [1 -1] shifts, last row carries 0.7 + 0.4.
  EXPECT_EQ(h(0, 0), 1.0);
  EXPECT_EQ(h(0, 1), -1.0);
  EXPECT_EQ(h(1, 1), 1.0);
  EXPECT_EQ(h(1, 2), -1.0);
  EXPECT_DOUBLE_EQ(h(2, 2), 1.1);
  // Coupling to agent 2 enters the bottom-left entry of block (1, 2).
  EXPECT_DOUBLE_EQ(h(2, 3), -0.4);
  EXPECT_DOUBLE_EQ(h(4, 4), 1.3);
  EXPECT_DOUBLE_EQ(h(4, 0), -1.3);
  EXPECT_EQ(h.row(3).sum(), 0.0);
}

// Property: H and the augmented matrix have spectra in the open
// right half plane exactly when the leader reaches every agent.
TEST(Spectrum, RandomDigraphs) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = uniform_int(rng, 1, 7);
    DiGraph g = random_graph(rng, n);
    std::vector<int> orders;
    for (int i = 0; i < n; ++i) orders.push_back(uniform_int(rng, 1, 3));
    if (trial % 2 == 1 && n > 1) {
      // Cut every edge into one agent: it becomes unreachable.
      Eigen::MatrixXd a = g.adjacency();
      a.row(uniform_int(rng, 1, n)).setZero();
      g = DiGraph(a);
      ASSERT_FALSE(has_spanning_tree(g));
    }
    const double h_min = min_real_part(build_h(g));
    const double aug_min = min_real_part(build_augmented_h(g, AugmentedSpec{orders}));
    if (has_spanning_tree(g)) {
      EXPECT_GT(h_min, 1e-9);
      EXPECT_GT(aug_min, 1e-9);
    } else {
      EXPECT_LE(h_min, 1e-9);
      EXPECT_LE(aug_min, 1e-9);
    }
    // Gershgorin: all eigenvalues of H lie in discs centred on the diagonal
    // with radius at most that diagonal, so Re lambda >= 0 always.
    EXPECT_GE(h_min, -1e-9);
  }
}

TEST(MinRealPart, Examples) {
  Eigen::MatrixXd a(2, 2);
  a << 1, -1, 0, 1;
  EXPECT_NEAR(min_real_part(a), 1.0, 1e-12);
  EXPECT_NEAR(min_real_part(Eigen::MatrixXd::Identity(3, 3)), 1.0, 1e-12);
  Eigen::MatrixXd rot(2, 2);
  rot << 0, 1, -1, 0;
  EXPECT_NEAR(min_real_part(rot), 0.0, 1e-12);
}

TEST(Edges, RoundTrip) {
  Rng rng(3);
  const DiGraph g = random_graph(rng, 5);
  const auto edges = g.edges();
  EXPECT_EQ(DiGraph(5, edges), g);
}
