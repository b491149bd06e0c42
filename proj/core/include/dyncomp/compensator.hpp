#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dyncomp/gain.hpp"

namespace dyncomp {

// Observer chain eta_1, ..., eta_{r+1} of one agent, each of leader order.
struct CompensatorState {
  std::vector<Eigen::VectorXd> eta;

  int order() const noexcept { return static_cast<int>(eta.size()) - 1; }

  static CompensatorState zero(int agent_order, int leader_order);
};

// What agent i receives over the network: one scalar output per in-neighbour
// (j = 0 is the leader). No compensator or controller state can be expressed
// here, which is what keeps the scheme output-only.
struct NeighborOutput {
  int id = 0;
  double weight = 0.0;
  double y = 0.0;
};
using NeighborOutputs = std::vector<NeighborOutput>;

// e_v = sum_j a_ij (y_i - y_j).
double consensus_error(double y_i, const NeighborOutputs& nbrs);

// Right-hand side of the distributed dynamic compensator:
//
//   eta_l'     = A eta_l - K C (eta_l - eta_{l+1}),             l = 1..r
//   eta_{r+1}' = A eta_{r+1} - K C sum_j a_ij (eta_{r+1} - eta_1) - K e_v
//
// Throws DimensionError on inconsistent sizes.
CompensatorState compensator_deriv(const CompensatorState& state, double y_i,
                                   const NeighborOutputs& nbrs, const LeaderModel& leader,
                                   const Eigen::VectorXd& K);

// y_hat = C eta_1.
double compensator_output(const CompensatorState& state, const Eigen::RowVectorXd& C);

// eta_l - x0 for every link of the chain. Needs the leader state, so only
// the simulator (never an agent) can call it meaningfully.
std::vector<Eigen::VectorXd> observer_error(const CompensatorState& state,
                                            const Eigen::VectorXd& x0);

// Euclidean norm of the stacked observer error of one agent.
double observer_error_norm(const CompensatorState& state, const Eigen::VectorXd& x0);

}  // namespace dyncomp
