#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dyncomp/compensator.hpp"
#include "dyncomp/controller.hpp"
#include "dyncomp/gain.hpp"
#include "dyncomp/graph.hpp"

namespace dyncomp {

struct AgentSpec {
  AgentModel model;
  Eigen::VectorXd x0;
  Eigen::VectorXd theta_hat0;
  double k0 = 0.0;  // Nussbaum gain state, nussbaum mode only
  CompensatorState eta0;
};

struct Integration {
  double h = 1e-3;
  double T = 30.0;
  int stride = 10;

  long steps() const;
};

struct Scenario {
  std::string name;
  LeaderModel leader;
  DiGraph graph = DiGraph(1, {});
  std::vector<AgentSpec> agents;
  std::optional<double> mu;  // empty: kDefaultMuMargin times the spectral bound
  Integration integration;

  int num_agents() const noexcept { return static_cast<int>(agents.size()); }
  AugmentedSpec augmented_spec() const;
};

// Structural and standing-assumption checks: leader dimensions, neutral
// stability and detectability, graph size and spanning tree, agent models
// and initial-condition dimensions, integration settings. Throws
// ValidationError (or DimensionError) naming the failed check.
void validate(const Scenario& s);

// Gain design for a validated scenario. A pinned mu below the spectral bound
// raises SynthesisError naming the minimum.
GainDesign design_gain(const Scenario& s);

// x0' = A x0.
Eigen::VectorXd leader_deriv(const Eigen::VectorXd& x0, const LeaderModel& leader);

// Plant right-hand side x_l' = x_{l+1} + psi_l^T theta, x_r' = b u + psi_r^T theta.
Eigen::VectorXd agent_deriv(std::span<const double> x, double u, const AgentModel& model);

// One classical RK4 step of x' = f(x).
Eigen::VectorXd rk4_step(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& x, double h);

// Stacked closed loop. State layout: leader x0 first, then per agent
// [x_i (r_i), theta_hat_i (m_i), k_i (nussbaum mode only), eta_i ((r_i+1) nu)].
class ClosedLoop {
 public:
  explicit ClosedLoop(const Scenario& s);  // validates and designs the gain

  const Scenario& scenario() const noexcept { return scenario_; }
  const GainDesign& design() const noexcept { return design_; }
  int dimension() const noexcept { return dimension_; }

  Eigen::VectorXd initial_state() const;

  struct AgentView {
    std::span<const double> x;
    ControllerState ctrl;
    CompensatorState comp;
  };
  AgentView agent_view(const Eigen::VectorXd& state, int agent) const;  // agent is 1-based
  Eigen::VectorXd leader_state(const Eigen::VectorXd& state) const;

  // Half-open index range [first, last) of the state owned by one agent.
  std::pair<int, int> agent_range(int agent) const;

  // Full right-hand side. When `traces` is non-null it receives the
  // backstepping trace of every agent at this state.
  Eigen::VectorXd derivative(const Eigen::VectorXd& state,
                             std::vector<BackstepTrace>* traces = nullptr) const;

  // Control input of one agent, computed from its own slice of the state and
  // the scalar outputs of its in-neighbours only.
  double control(const Eigen::VectorXd& state, int agent) const;

  const BacksteppingController& controller(int agent) const {
    return controllers_[static_cast<std::size_t>(agent - 1)];
  }

 private:
  struct Slots {
    int x = 0;
    int theta = 0;
    int k = -1;
    int eta = 0;
  };

  NeighborOutputs neighbor_outputs(const Eigen::VectorXd& state, int agent) const;

  Scenario scenario_;
  GainDesign design_;
  std::vector<BacksteppingController> controllers_;
  std::vector<Slots> slots_;
  int dimension_ = 0;
};

struct TrajectoryLog {
  std::vector<int> num_params;
  std::vector<bool> nussbaum;

  double h = 0.0;
  int stride = 1;
  std::vector<double> t;
  std::vector<double> y0;
  // [agent][sample]
  std::vector<std::vector<double>> y, e, yhat, ehat, u, V, Vdot, etaerr, k;
  // [agent][sample][j]
  std::vector<std::vector<std::vector<double>>> theta_hat;

  // Step-resolution statistics (every integration step, not only logged
  // samples), per agent.
  std::vector<double> sup_x, sup_theta_hat, sup_u;
  // max over steps of |(V_{n+1} - V_n)/h - (Vdot_n + Vdot_{n+1})/2|; NaN for
  // nussbaum-mode agents.
  std::vector<double> lyapunov_residual;

  bool escaped = false;
  double escape_time = 0.0;
  std::string escape_reason;

  int num_agents() const noexcept { return static_cast<int>(y.size()); }
  std::size_t samples() const noexcept { return t.size(); }
};

// Integrates with fixed-step RK4 from t = 0 to the horizon (or the first
// escape: non-finite state, |state| > 1e9, or an evaluation fault), logging
// every `stride` steps. Deterministic.
TrajectoryLog run(const Scenario& s);
TrajectoryLog run(const ClosedLoop& loop);

inline constexpr double kEscapeBound = 1e9;
inline constexpr double kConsensusTolerance = 0.05;

// Compensator-only probe: the agents are replaced by y_i = y_hat_i + w_i(t)
// with w_i(t) = amplitude * sin(frequency * t + i), so with amplitude 0 the
// tracking error e_hat is frozen at zero and only the observer error
// eta - x0 evolves.
struct ProbeOptions {
  double h = 1e-2;
  double T = 10.0;
  int stride = 1;
  double amplitude = 0.0;
  double frequency = 1.0;
};

struct ProbeLog {
  std::vector<double> t;
  std::vector<double> error_norm;  // || eta - 1 (x) x0 || over all agents
};

ProbeLog run_compensator_probe(const LeaderModel& leader, const DiGraph& graph,
                               const std::vector<int>& orders, const Eigen::VectorXd& K,
                               const std::vector<CompensatorState>& eta0,
                               const ProbeOptions& options);

}  // namespace dyncomp
