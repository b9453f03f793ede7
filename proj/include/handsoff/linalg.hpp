#pragma once

#include <span>

#include <Eigen/Dense>

namespace handsoff {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Builds a rows x cols matrix from row-major entries. Throws a dimension
/// error on a size mismatch and a domain error on NaN/Inf.
Matrix make_matrix(Eigen::Index rows, Eigen::Index cols,
                   std::span<const double> row_major);

Vector make_vector(std::span<const double> entries);

bool all_finite(const Matrix& m);

/// e^M by scaling and squaring with the degree-13 diagonal Pade approximant.
Matrix expm(const Matrix& m);

struct ZohPair {
  Matrix Ad;  // e^{A delta}
  Matrix Bd;  // int_0^delta e^{At} dt * Bext
};

/// Exact zero-order-hold discretization. Both blocks come out of a single
/// exponential of the augmented matrix [[A, Bext], [0, 0]] * delta.
ZohPair zoh_discretize(const Matrix& A, const Matrix& Bext, double delta);

}  // namespace handsoff
