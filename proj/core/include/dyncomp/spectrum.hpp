#pragma once

#include <iosfwd>

#include <Eigen/Dense>

namespace dyncomp {

// Diagonal similarity D^-1 M D that equalises row and column norms
// (Parlett-Reinsch with radix-2 scaling, so no rounding is introduced).
Eigen::MatrixXd balance(const Eigen::MatrixXd& m);

// Eigenvalues of a real matrix via balancing followed by Hessenberg
// reduction and shifted QR. Throws dyncomp::Error on non-convergence.
Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& m);
Eigen::VectorXcd eigenvalues(const Eigen::MatrixXcd& m);

// min Re(lambda) over the spectrum.
double min_real_part(const Eigen::MatrixXd& m);

// max Re(lambda) over the spectrum; negative iff m is Hurwitz.
double spectral_abscissa(const Eigen::MatrixXd& m);
double spectral_abscissa(const Eigen::MatrixXcd& m);

// Comma separated, one matrix row per line, full round-trip precision.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

}  // namespace dyncomp
