#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dyncomp/compensator.hpp"
#include "dyncomp/errors.hpp"
#include "dyncomp/gain.hpp"
#include "dyncomp/graph.hpp"
#include "random_scenarios.hpp"

using namespace dyncomp;
using namespace dyncomp::testing;

namespace {

LeaderModel scalar_leader() {
  LeaderModel l;
  l.A = Eigen::MatrixXd::Zero(1, 1);
  l.C = Eigen::RowVectorXd::Ones(1);
  l.x0 = Eigen::VectorXd::Zero(1);
  return l;
}

LeaderModel oscillator() {
  LeaderModel l;
  l.A = (Eigen::MatrixXd(2, 2) << 0, 1, -1, 0).finished();
  l.C = (Eigen::RowVectorXd(2) << 1, 0).finished();
  l.x0 = (Eigen::VectorXd(2) << 1, -1).finished();
  return l;
}

}  // namespace

TEST(Deriv, ScalarHandExample) {
  CompensatorState s;
  s.eta = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, 0.0)};
  const NeighborOutputs nbrs = {{0, 1.0, 0.0}};
  const CompensatorState d =
      compensator_deriv(s, 0.5, nbrs, scalar_leader(), Eigen::VectorXd::Constant(1, 2.0));
  ASSERT_EQ(d.eta.size(), 2u);
  EXPECT_DOUBLE_EQ(d.eta[0](0), -2.0);
  EXPECT_DOUBLE_EQ(d.eta[1](0), 1.0);
}

TEST(Deriv, ManifoldIsInvariant) {
  const LeaderModel l = oscillator();
  const Eigen::VectorXd K = synthesize_k(solve_care(l), l.C, 12.8);
  const double y0 = l.C * l.x0;
  CompensatorState s;
  s.eta.assign(3, l.x0);
  const NeighborOutputs nbrs = {{0, 1.0, y0}, {2, 0.5, y0}};
  const CompensatorState d = compensator_deriv(s, y0, nbrs, l, K);
  for (const auto& v : d.eta) EXPECT_LT((v - l.A * l.x0).norm(), 1e-14);
}

TEST(Deriv, ZeroStaysZero) {
  const LeaderModel l = oscillator();
  const CompensatorState s = CompensatorState::zero(2, 2);
  const NeighborOutputs nbrs = {{0, 1.0, 0.0}};
  const CompensatorState d = compensator_deriv(s, 0.0, nbrs, l, Eigen::VectorXd::Ones(2));
  for (const auto& v : d.eta) EXPECT_EQ(v, Eigen::VectorXd::Zero(2));
}

TEST(Deriv, DimensionMismatch) {
  CompensatorState s;
  s.eta = {Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)};
  EXPECT_THROW(compensator_deriv(s, 0.0, {}, oscillator(), Eigen::VectorXd::Ones(2)), DimensionError);
}

// With every agent reporting y_j = C eta_{j,1}, the stacked observer error
// eta - 1 (x) x0 obeys the linear system driven by A_hat.
TEST(Deriv, StackedErrorDynamicsMatchAhat) {
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const int nu = 1 + trial % 4;
    const int n = uniform_int(rng, 1, 5);
    LeaderModel l = random_leader(rng, nu);
    const DiGraph g = random_graph(rng, n);
    std::vector<int> orders;
    for (int i = 0; i < n; ++i) orders.push_back(uniform_int(rng, 1, 3));
    const AugmentedSpec spec{orders};
    const Eigen::MatrixXd h = build_augmented_h(g, spec);
    const Eigen::VectorXd K = synthesize_k(solve_care(l), l.C, uniform(rng, 0.5, 3.0));
    const auto chains = random_chains(rng, orders, nu, 1.0);

    Eigen::VectorXd err(spec.dimension() * nu);
    Eigen::VectorXd rate(spec.dimension() * nu);
    for (int i = 1; i <= n; ++i) {
      const auto& chain = chains[static_cast<std::size_t>(i - 1)];
      NeighborOutputs nbrs;
      for (int j = 0; j <= n; ++j) {
        if (g.weight(i, j) == 0.0) continue;
        const double yj = j == 0 ? double(l.C * l.x0)
                                 : compensator_output(chains[static_cast<std::size_t>(j - 1)], l.C);
        nbrs.push_back({j, g.weight(i, j), yj});
      }
      const CompensatorState d = compensator_deriv(chain, compensator_output(chain, l.C), nbrs, l, K);
      for (int k = 0; k <= orders[static_cast<std::size_t>(i - 1)]; ++k) {
        const int row = (spec.offset(i) + k) * nu;
        err.segment(row, nu) = chain.eta[static_cast<std::size_t>(k)] - l.x0;
        rate.segment(row, nu) = d.eta[static_cast<std::size_t>(k)] - l.A * l.x0;
      }
    }
    const Eigen::VectorXd expected = stacked_matrix(l.A, l.C, K, h) * err;
    EXPECT_LT((rate - expected).norm(), 1e-11 * std::max(1.0, expected.norm())) << "trial " << trial;
  }
}

TEST(Output, Examples) {
  const LeaderModel l = oscillator();
  CompensatorState s;
  s.eta = {(Eigen::VectorXd(2) << 3, 7).finished(), Eigen::VectorXd::Zero(2)};
  EXPECT_EQ(compensator_output(s, l.C), 3.0);
  EXPECT_EQ(compensator_output(CompensatorState::zero(1, 2), l.C), 0.0);
  s.eta[0] = l.x0;
  EXPECT_EQ(compensator_output(s, l.C), double(l.C * l.x0));
}

TEST(ObserverError, Examples) {
  const Eigen::VectorXd x0 = (Eigen::VectorXd(2) << 1, -1).finished();
  CompensatorState on;
  on.eta.assign(3, x0);
  for (const auto& v : observer_error(on, x0)) EXPECT_EQ(v, Eigen::VectorXd::Zero(2));
  EXPECT_EQ(observer_error_norm(on, x0), 0.0);

  const auto off = observer_error(CompensatorState::zero(2, 2), x0);
  ASSERT_EQ(off.size(), 3u);
  for (const auto& v : off) EXPECT_EQ(v, -x0);
  EXPECT_DOUBLE_EQ(observer_error_norm(CompensatorState::zero(2, 2), x0), std::sqrt(6.0));
}

TEST(ConsensusError, WeightedSum) {
  const NeighborOutputs nbrs = {{0, 2.0, 1.0}, {3, 0.5, -1.0}};
  EXPECT_DOUBLE_EQ(consensus_error(0.5, nbrs), 2.0 * (0.5 - 1.0) + 0.5 * (0.5 + 1.0));
}
