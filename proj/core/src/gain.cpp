#include "dyncomp/gain.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dyncomp/errors.hpp"
#include "dyncomp/spectrum.hpp"

namespace dyncomp {

namespace {

constexpr double kRealPartTol = 1e-9;
constexpr double kRankTol = 1e-9;
constexpr double kClusterTol = 1e-6;

using cd = std::complex<double>;

std::string format_complex(cd z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

int numerical_rank(const Eigen::MatrixXcd& m, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++rank;
  }
  return rank;
}

// Swap adjacent diagonal entries k, k+1 of an upper-triangular complex Schur
// factor, updating the unitary basis.
void swap_schur_pair(Eigen::MatrixXcd& t, Eigen::MatrixXcd& z, Eigen::Index k) {
  const cd t11 = t(k, k);
  const cd t22 = t(k + 1, k + 1);
  // Eigenvector of the 2x2 block for t22; it becomes the leading basis vector.
  Eigen::Vector2cd v(t(k, k + 1), t22 - t11);
  const double nv = v.norm();
  if (nv == 0.0) return;  // identical eigenvalues, nothing to do
  v /= nv;
  Eigen::Matrix2cd g;
  g << v(0), -std::conj(v(1)), v(1), std::conj(v(0));
  t.middleRows(k, 2) = g.adjoint() * t.middleRows(k, 2);
  t.middleCols(k, 2) = t.middleCols(k, 2) * g;
  z.middleCols(k, 2) = z.middleCols(k, 2) * g;
  t(k + 1, k) = 0.0;
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
}

}  // namespace

void check_dimensions(const LeaderModel& leader) {
  const auto n = leader.A.rows();
  if (n < 1 || leader.A.cols() != n) throw DimensionError("leader A must be square and non-empty");
  if (leader.C.cols() != n) {
    throw DimensionError("leader C has " + std::to_string(leader.C.cols()) +
                         " columns, expected " + std::to_string(n));
  }
  if (leader.x0.size() != n) {
    throw DimensionError("leader x0 has " + std::to_string(leader.x0.size()) +
                         " entries, expected " + std::to_string(n));
  }
}

std::string neutral_stability_issue(const Eigen::MatrixXd& A) {
  const Eigen::VectorXcd eig = eigenvalues(A);
  const auto n = A.rows();
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (std::abs(eig(i).real()) > kRealPartTol) {
      return "eigenvalue " + format_complex(eig(i)) + " of A has non-zero real part";
    }
  }
  std::vector<bool> done(static_cast<std::size_t>(eig.size()), false);
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (done[static_cast<std::size_t>(i)]) continue;
    cd center = 0.0;
    int algebraic = 0;
    for (Eigen::Index j = i; j < eig.size(); ++j) {
      if (!done[static_cast<std::size_t>(j)] &&
          std::abs(eig(j) - eig(i)) <= kClusterTol * std::max(1.0, std::abs(eig(i)))) {
        done[static_cast<std::size_t>(j)] = true;
        center += eig(j);
        ++algebraic;
      }
    }
    center /= static_cast<double>(algebraic);
    const Eigen::MatrixXcd shifted =
        A.cast<cd>() - center * Eigen::MatrixXcd::Identity(n, n);
    const double tol = kRankTol * std::max(1.0, A.norm());
    const int geometric = static_cast<int>(n) - numerical_rank(shifted, tol);
    if (geometric < algebraic) {
      return "eigenvalue " + format_complex(center) + " of A is not semi-simple (algebraic " +
             std::to_string(algebraic) + ", geometric " + std::to_string(geometric) + ")";
    }
  }
  return {};
}

std::string detectability_issue(const Eigen::MatrixXd& A, const Eigen::RowVectorXd& C) {
  const Eigen::VectorXcd eig = eigenvalues(A);
  const auto n = A.rows();
  const double tol = kRankTol * std::max(1.0, std::max(A.norm(), C.norm()));
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (eig(i).real() < -kRealPartTol) continue;
    Eigen::MatrixXcd pbh(n + 1, n);
    pbh.topRows(n) = A.cast<cd>() - eig(i) * Eigen::MatrixXcd::Identity(n, n);
    pbh.bottomRows(1) = C.cast<cd>();
    if (numerical_rank(pbh, tol) < n) {
      return "mode " + format_complex(eig(i)) +
             " of A is unobservable from C and not asymptotically stable";
    }
  }
  return {};
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
  const auto n = A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  // vec(A X + X A^T) = (I (x) A + A (x) I) vec(X), column-major vec.
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      op.block(i * n, j * n, n, n) += I(i, j) * A;
      op.block(i * n, j * n, n, n) += A(i, j) * I;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(op);
  if (!lu.isInvertible()) throw SynthesisError("Lyapunov operator is singular");
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(Q.data(), n * n);
  Eigen::VectorXd x = lu.solve(rhs);
  Eigen::MatrixXd X = Eigen::Map<Eigen::MatrixXd>(x.data(), n, n);
  return 0.5 * (X + X.transpose());
}

double riccati_residual(const Eigen::MatrixXd& A, const Eigen::RowVectorXd& C,
                        const Eigen::MatrixXd& P) {
  const auto n = A.rows();
  const Eigen::MatrixXd ctc = C.transpose() * C;
  const Eigen::MatrixXd r =
      A * P + P * A.transpose() + Eigen::MatrixXd::Identity(n, n) - P * ctc * P;
  return r.norm();
}

Eigen::MatrixXd solve_care(const LeaderModel& leader) {
  check_dimensions(leader);
  const Eigen::MatrixXd& A = leader.A;
  const Eigen::RowVectorXd& C = leader.C;
  const auto n = A.rows();

  if (auto issue = detectability_issue(A, C); !issue.empty()) {
    throw SynthesisError("(A, C) is not detectable: " + issue);
  }

  const Eigen::MatrixXd ctc = C.transpose() * C;
  Eigen::MatrixXd ham(2 * n, 2 * n);
  ham << A.transpose(), -ctc, -Eigen::MatrixXd::Identity(n, n), -A;

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(ham.cast<cd>());
  if (schur.info() != Eigen::Success) throw SynthesisError("Hamiltonian Schur form did not converge");
  Eigen::MatrixXcd t = schur.matrixT();
  Eigen::MatrixXcd z = schur.matrixU();

  const auto m = 2 * n;
  const double axis_tol = 1e-8 * std::max(1.0, ham.norm());
  int stable = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double re = t(i, i).real();
    if (std::abs(re) <= axis_tol) {
      throw SynthesisError("Hamiltonian has eigenvalue " + format_complex(t(i, i)) +
                           " on the imaginary axis; (A, C) is not detectable");
    }
    if (re < 0.0) ++stable;
  }
  if (stable != n) throw SynthesisError("Hamiltonian does not split into stable/antistable halves");

  // Bubble the stable eigenvalues to the leading block.
  for (Eigen::Index pass = 0; pass < m; ++pass) {
    bool swapped = false;
    for (Eigen::Index k = 0; k + 1 < m; ++k) {
      if (t(k, k).real() > 0.0 && t(k + 1, k + 1).real() < 0.0) {
        swap_schur_pair(t, z, k);
        swapped = true;
      }
    }
    if (!swapped) break;
  }

  const Eigen::MatrixXcd u1 = z.topLeftCorner(n, n);
  const Eigen::MatrixXcd u2 = z.bottomLeftCorner(n, n);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(u1.transpose());
  const Eigen::MatrixXcd x = lu.solve(u2.transpose()).transpose();  // u2 * u1^-1
  Eigen::MatrixXd p = x.real();
  p = 0.5 * (p + p.transpose());

  // Newton-Kleinman defect correction:
  //   (A - P C^T C) dP + dP (A - P C^T C)^T = -R(P).
  double residual = riccati_residual(A, C, p);
  for (int iter = 0; iter < 20 && residual > 1e-14 * std::max(1.0, p.norm()); ++iter) {
    const Eigen::MatrixXd closed = A - p * ctc;
    const Eigen::MatrixXd r =
        A * p + p * A.transpose() + Eigen::MatrixXd::Identity(n, n) - p * ctc * p;
    const Eigen::MatrixXd dp = solve_lyapunov(closed, r);
    Eigen::MatrixXd next = p + dp;
    next = 0.5 * (next + next.transpose());
    const double next_residual = riccati_residual(A, C, next);
    if (!(next_residual < residual)) break;
    p = std::move(next);
    residual = next_residual;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spd(p, Eigen::EigenvaluesOnly);
  if (spd.eigenvalues().minCoeff() <= 0.0) {
    throw SynthesisError("Riccati solution is not positive definite");
  }
  return p;
}

double mu_lower_bound(const Eigen::MatrixXd& h_aug) {
  const double lambda = min_real_part(h_aug);
  if (!(lambda > 0.0)) {
    std::ostringstream os;
    os << "augmented matrix has an eigenvalue with real part " << lambda
       << " <= 0; the graph has no spanning tree rooted at the leader";
    throw ValidationError(os.str());
  }
  return 1.0 / lambda;
}

Eigen::VectorXd synthesize_k(const Eigen::MatrixXd& P0, const Eigen::RowVectorXd& C, double mu) {
  if (P0.rows() != C.cols() || P0.cols() != C.cols()) {
    throw DimensionError("P0 and C dimensions disagree");
  }
  return mu * P0 * C.transpose();
}

Eigen::VectorXd synthesize_k(const Eigen::MatrixXd& P0, const Eigen::RowVectorXd& C, double mu,
                             double mu_min) {
  if (!(mu >= mu_min)) {
    std::ostringstream os;
    os.precision(10);
    os << "mu = " << mu << " is below the required minimum " << mu_min
       << " (1 / min Re lambda of the augmented matrix)";
    throw SynthesisError(os.str());
  }
  return synthesize_k(P0, C, mu);
}

Eigen::MatrixXd stacked_matrix(const Eigen::MatrixXd& A, const Eigen::RowVectorXd& C,
                               const Eigen::VectorXd& K, const Eigen::MatrixXd& h_aug) {
  const auto nu = A.rows();
  if (A.cols() != nu || C.cols() != nu || K.size() != nu || h_aug.rows() != h_aug.cols()) {
    throw DimensionError("stacked matrix operands have inconsistent dimensions");
  }
  const auto d = h_aug.rows();
  const Eigen::MatrixXd kc = K * C;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nu * d, nu * d);
  for (Eigen::Index p = 0; p < d; ++p) {
    for (Eigen::Index q = 0; q < d; ++q) {
      auto block = out.block(p * nu, q * nu, nu, nu);
      if (h_aug(p, q) != 0.0) block -= h_aug(p, q) * kc;
      if (p == q) block += A;
    }
  }
  return out;
}

StackedCheck verify_stacked_hurwitz(const LeaderModel& leader, const Eigen::VectorXd& K,
                                    const Eigen::MatrixXd& h_aug) {
  StackedCheck check;
  check.spectral_abscissa = spectral_abscissa(stacked_matrix(leader.A, leader.C, K, h_aug));

  const Eigen::VectorXcd lambdas = eigenvalues(h_aug);
  const Eigen::MatrixXcd a = leader.A.cast<cd>();
  const Eigen::MatrixXcd kc = (K * leader.C).cast<cd>();
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    worst = std::max(worst, spectral_abscissa(Eigen::MatrixXcd(a - lambdas(i) * kc)));
  }
  check.factored_abscissa = worst;
  check.routes_agree = (check.spectral_abscissa < 0.0) == (check.factored_abscissa < 0.0);
  return check;
}

GainDesign design_gain(const LeaderModel& leader, const Eigen::MatrixXd& h_aug,
                       std::optional<double> mu) {
  GainDesign d;
  d.P0 = solve_care(leader);
  d.riccati_residual = riccati_residual(leader.A, leader.C, d.P0);
  d.min_real_part_h_aug = min_real_part(h_aug);
  d.mu_min = mu_lower_bound(h_aug);
  d.mu = mu.value_or(kDefaultMuMargin * d.mu_min);
  d.K = synthesize_k(d.P0, leader.C, d.mu, d.mu_min);
  d.stacked = verify_stacked_hurwitz(leader, d.K, h_aug);
  return d;
}

}  // namespace dyncomp
