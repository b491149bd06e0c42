#include "dyncomp/compensator.hpp"

#include <cmath>
#include <string>

#include "dyncomp/errors.hpp"

namespace dyncomp {

CompensatorState CompensatorState::zero(int agent_order, int leader_order) {
  CompensatorState s;
  s.eta.assign(static_cast<std::size_t>(agent_order + 1), Eigen::VectorXd::Zero(leader_order));
  return s;
}

double consensus_error(double y_i, const NeighborOutputs& nbrs) {
  double ev = 0.0;
  for (const NeighborOutput& n : nbrs) ev += n.weight * (y_i - n.y);
  return ev;
}

CompensatorState compensator_deriv(const CompensatorState& state, double y_i,
                                   const NeighborOutputs& nbrs, const LeaderModel& leader,
                                   const Eigen::VectorXd& K) {
  const auto nu = leader.A.rows();
  const int r = state.order();
  if (r < 1) throw DimensionError("compensator chain needs at least two links");
  if (K.size() != nu || leader.C.cols() != nu) {
    throw DimensionError("compensator gain and leader dimensions disagree");
  }
  for (const auto& e : state.eta) {
    if (e.size() != nu) {
      throw DimensionError("compensator link has " + std::to_string(e.size()) +
                           " entries, expected " + std::to_string(nu));
    }
  }

  CompensatorState d;
  d.eta.resize(state.eta.size());
  for (int l = 0; l < r; ++l) {
    const auto& cur = state.eta[static_cast<std::size_t>(l)];
    const auto& next = state.eta[static_cast<std::size_t>(l + 1)];
    const double innovation = leader.C.dot(cur - next);
    d.eta[static_cast<std::size_t>(l)] = leader.A * cur - K * innovation;
  }

  double weight_sum = 0.0;
  for (const NeighborOutput& n : nbrs) weight_sum += n.weight;
  const auto& last = state.eta[static_cast<std::size_t>(r)];
  const auto& first = state.eta.front();
  const double loop = weight_sum * leader.C.dot(last - first);
  d.eta[static_cast<std::size_t>(r)] = leader.A * last - K * (loop + consensus_error(y_i, nbrs));
  return d;
}

double compensator_output(const CompensatorState& state, const Eigen::RowVectorXd& C) {
  return C.dot(state.eta.front());
}

std::vector<Eigen::VectorXd> observer_error(const CompensatorState& state,
                                            const Eigen::VectorXd& x0) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(state.eta.size());
  for (const auto& e : state.eta) out.push_back(e - x0);
  return out;
}

double observer_error_norm(const CompensatorState& state, const Eigen::VectorXd& x0) {
  double sq = 0.0;
  for (const auto& e : state.eta) sq += (e - x0).squaredNorm();
  return std::sqrt(sq);
}

}  // namespace dyncomp
