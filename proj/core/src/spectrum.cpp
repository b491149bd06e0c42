#include "dyncomp/spectrum.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "dyncomp/errors.hpp"

namespace dyncomp {

Eigen::MatrixXd balance(const Eigen::MatrixXd& m) {
  constexpr double kRadix = 2.0;
  constexpr double kRadixSq = kRadix * kRadix;
  Eigen::MatrixXd a = m;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / kRadix;
      while (c < g) {
        f *= kRadix;
        c *= kRadixSq;
      }
      g = r * kRadix;
      while (c > g) {
        f /= kRadix;
        c /= kRadixSq;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return a;
}

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DimensionError("eigenvalues of a non-square matrix");
  if (m.size() == 0) return {};
  if (!m.allFinite()) throw Error("eigenvalues requested for a matrix with non-finite entries");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(balance(m), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw Error("eigensolver did not converge");
  return solver.eigenvalues();
}

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw DimensionError("eigenvalues of a non-square matrix");
  if (m.size() == 0) return {};
  if (!m.allFinite()) throw Error("eigenvalues requested for a matrix with non-finite entries");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw Error("eigensolver did not converge");
  return solver.eigenvalues();
}

double min_real_part(const Eigen::MatrixXd& m) {
  if (m.size() == 0) throw DimensionError("spectrum of an empty matrix");
  return eigenvalues(m).real().minCoeff();
}

double spectral_abscissa(const Eigen::MatrixXd& m) {
  if (m.size() == 0) throw DimensionError("spectrum of an empty matrix");
  return eigenvalues(m).real().maxCoeff();
}

double spectral_abscissa(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) throw DimensionError("spectrum of an empty matrix");
  return eigenvalues(m).real().maxCoeff();
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j != 0) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace dyncomp
