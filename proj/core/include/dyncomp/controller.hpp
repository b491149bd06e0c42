#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dyncomp/compensator.hpp"
#include "dyncomp/expr.hpp"
#include "dyncomp/gain.hpp"
#include "dyncomp/jet.hpp"

namespace dyncomp {

enum class DirectionMode { known, nussbaum };

// Nussbaum function used when the sign of the control coefficient is
// unknown. k2cos (N(k) = k^2 cos k) is the default.
enum class NussbaumKind { k2cos, k2sin };

double nussbaum_value(NussbaumKind kind, double k);

// Parametric strict-feedback agent
//
//   x_l' = x_{l+1} + psi_l(x_1..x_l)^T theta,   l < r
//   x_r' = b u     + psi_r(x)^T theta
//
// with b = 1 in known mode.
struct AgentModel {
  int order = 1;
  int num_params = 1;
  // regressors[l][j] is component j of psi_{l+1}.
  std::vector<std::vector<expr::Expr>> regressors;
  Eigen::VectorXd theta;  // ground truth, never read by the controller
  Eigen::VectorXd gains;  // c_1..c_r
  DirectionMode mode = DirectionMode::known;
  double b = 1.0;
  NussbaumKind nussbaum = NussbaumKind::k2cos;
};

// Throws ValidationError (dimensions, strict-feedback structure, gains,
// control coefficient).
void validate(const AgentModel& model);

// psi_l(x) for l = 1..r, one m-vector per row.
std::vector<Eigen::VectorXd> evaluate_regressors(const AgentModel& model,
                                                 std::span<const double> x);

struct ControllerState {
  Eigen::VectorXd theta_hat;
  double nussbaum_k = 0.0;
};

// Positions of the controller arguments inside the gradient vectors of
// BackstepTrace: z = (x_1..x_r, eta_1, ..., eta_{r+1}, theta_hat).
struct GradientLayout {
  int r = 1;
  int nu = 1;
  int m = 1;

  int size() const noexcept { return r + (r + 1) * nu + m; }
  int x(int l) const noexcept { return l - 1; }                     // l = 1..r
  int eta(int l, int c) const noexcept { return r + (l - 1) * nu + c; }  // l = 1..r+1
  int theta(int j) const noexcept { return r + (r + 1) * nu + j; }
};

struct BackstepTrace {
  Eigen::VectorXd errors;            // e_hat_1..e_hat_r
  Eigen::VectorXd alphas;            // alpha_1..alpha_r; alpha_r is the adaptive law
  std::vector<Eigen::VectorXd> tuning;  // tau_1..tau_r
  double u = 0.0;                    // applied input
  Eigen::VectorXd theta_hat_dot;     // tau_r
  double k_dot = 0.0;                // nussbaum mode only
  // d alpha_k / dz for k = 1..r (see GradientLayout); filled on request.
  std::vector<Eigen::VectorXd> alpha_gradients;

  double alpha_r() const { return alphas(alphas.size() - 1); }
};

// Adaptive backstepping controller of one agent, compiled from its model.
//
// The partial derivatives of the virtual controls are exact: the recursion
// is evaluated on truncated Taylor expansions in all controller arguments,
// with the regressor expansions seeded from symbolic derivatives.
class BacksteppingController {
 public:
  BacksteppingController(AgentModel model, const LeaderModel& leader, Eigen::VectorXd K);

  // The compiled model; theta and b are replaced by NaN because the
  // controller must not depend on them.
  const AgentModel& model() const noexcept { return model_; }
  GradientLayout layout() const noexcept { return layout_; }

  // Evaluates the recursion at one snapshot. Only the agent's own state,
  // its own compensator chain and its own estimates enter. Throws
  // DimensionError on size mismatch and EvalError on non-finite values.
  BackstepTrace backstep(std::span<const double> x, const CompensatorState& comp,
                         const ControllerState& ctrl, bool with_gradients = false) const;

 private:
  struct SeedTerm {
    int monomial;
    int degree;
    double scale;  // 1 / beta!
    expr::Expr tree;
  };

  AgentModel model_;
  Eigen::MatrixXd A_;
  Eigen::RowVectorXd C_;
  Eigen::VectorXd K_;
  GradientLayout layout_;
  std::shared_ptr<const JetSpace> value_space_;
  std::shared_ptr<const JetSpace> gradient_space_;
  // seeds_[l][j]: Taylor terms of psi_{l+1, j} in the x variables.
  std::vector<std::vector<std::vector<SeedTerm>>> seeds_;
};

struct Step1Result {
  double error = 0.0;       // e_hat_1 = x_1 - C eta_1
  Eigen::VectorXd tuning;   // tau_1 = psi_1 e_hat_1
  double alpha = 0.0;       // alpha_1
};

// First backstepping step in closed form:
//   alpha_1 = -c_1 e_hat_1 - psi_1^T theta_hat + C A eta_1 - C K C (eta_1 - eta_2)
Step1Result step1(double x1, const CompensatorState& comp, const Eigen::VectorXd& theta_hat,
                  const AgentModel& model, const LeaderModel& leader, const Eigen::VectorXd& K);

// One-off evaluation; compiles a controller for the call.
BackstepTrace backstep(std::span<const double> x, const CompensatorState& comp,
                       const ControllerState& ctrl, const AgentModel& model,
                       const LeaderModel& leader, const Eigen::VectorXd& K);

// u = -N(k) alpha_r and k' = -e_hat_r alpha_r.
std::pair<double, double> nussbaum_control(const BackstepTrace& trace, const ControllerState& ctrl,
                                           NussbaumKind kind = NussbaumKind::k2cos);

struct LyapunovValue {
  double value = 0.0;      // 1/2 sum e_hat^2 + 1/2 |theta_hat - theta|^2
  double predicted = 0.0;  // -sum c_l e_hat_l^2
};

LyapunovValue lyapunov_value(const BackstepTrace& trace, const ControllerState& ctrl,
                             const AgentModel& model);

}  // namespace dyncomp
