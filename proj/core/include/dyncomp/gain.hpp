#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

namespace dyncomp {

// Exosystem generating the reference: x0' = A x0, y0 = C x0.
struct LeaderModel {
  Eigen::MatrixXd A;
  Eigen::RowVectorXd C;
  Eigen::VectorXd x0;

  int order() const noexcept { return static_cast<int>(A.rows()); }
};

// Throws DimensionError unless A is square and C, x0 match its order.
void check_dimensions(const LeaderModel& leader);

// Empty when every eigenvalue of A is semi-simple with |Re| <= 1e-9,
// otherwise a human-readable description of the first violation.
std::string neutral_stability_issue(const Eigen::MatrixXd& A);

// PBH test: empty when rank [A - lambda I; C] = n for every eigenvalue with
// Re(lambda) >= 0 (rank tolerance 1e-9), otherwise names the unobservable
// mode.
std::string detectability_issue(const Eigen::MatrixXd& A, const Eigen::RowVectorXd& C);

// Solves A X + X A^T = -Q (dense Kronecker formulation; intended for the
// small leader orders used here). Throws SynthesisError when singular.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

// Frobenius norm of A P + P A^T + I - P C^T C P.
double riccati_residual(const Eigen::MatrixXd& A, const Eigen::RowVectorXd& C,
                        const Eigen::MatrixXd& P);

// Stabilising solution P0 = P0^T > 0 of A P + P A^T + I - P C^T C P = 0.
//
// The stable invariant subspace of the Hamiltonian [A^T, -C^T C; -I, -A] is
// extracted from a reordered complex Schur form and the result is polished
// by Newton-Kleinman steps. Throws SynthesisError naming the obstruction
// when (A, C) is not detectable.
Eigen::MatrixXd solve_care(const LeaderModel& leader);

// 1 / min Re(lambda(h_aug)). Throws ValidationError if that real part is not
// positive (the graph has no spanning tree rooted at the leader).
double mu_lower_bound(const Eigen::MatrixXd& h_aug);

// K = mu P0 C^T.
Eigen::VectorXd synthesize_k(const Eigen::MatrixXd& P0, const Eigen::RowVectorXd& C, double mu);

// Same, rejecting mu < mu_min with a SynthesisError that names mu_min.
Eigen::VectorXd synthesize_k(const Eigen::MatrixXd& P0, const Eigen::RowVectorXd& C, double mu,
                             double mu_min);

// A_hat = I_D (x) A - h_aug (x) (K C).
Eigen::MatrixXd stacked_matrix(const Eigen::MatrixXd& A, const Eigen::RowVectorXd& C,
                               const Eigen::VectorXd& K, const Eigen::MatrixXd& h_aug);

struct StackedCheck {
  // max Re lambda(A_hat), computed on the full stacked matrix.
  double spectral_abscissa = 0.0;
  // max over lambda_i(h_aug) of max Re lambda(A - lambda_i K C), i.e. the
  // per-eigenvalue factored route.
  double factored_abscissa = 0.0;
  bool routes_agree = false;
  bool hurwitz() const noexcept { return spectral_abscissa < 0.0; }
};

StackedCheck verify_stacked_hurwitz(const LeaderModel& leader, const Eigen::VectorXd& K,
                                    const Eigen::MatrixXd& h_aug);

// Margin applied to the spectral lower bound when mu is not pinned.
inline constexpr double kDefaultMuMargin = 1.05;

struct GainDesign {
  Eigen::MatrixXd P0;
  double mu = 0.0;
  double mu_min = 0.0;
  Eigen::VectorXd K;
  double riccati_residual = 0.0;
  double min_real_part_h_aug = 0.0;
  StackedCheck stacked;
};

// Full synthesis: Riccati solve, mu selection (pinned or
// kDefaultMuMargin / min Re lambda(h_aug)), K, and certification.
GainDesign design_gain(const LeaderModel& leader, const Eigen::MatrixXd& h_aug,
                       std::optional<double> mu = std::nullopt);

}  // namespace dyncomp
