#include "handsoff/linalg.hpp"

#include <array>
#include <cmath>
#include <string>

#include "handsoff/error.hpp"

namespace handsoff {

Matrix make_matrix(Eigen::Index rows, Eigen::Index cols,
                   std::span<const double> row_major) {
  if (rows <= 0 || cols <= 0) {
    throw Error(ErrorCode::kDimension, "matrix dimensions must be positive");
  }
  if (static_cast<Eigen::Index>(row_major.size()) != rows * cols) {
    throw Error(ErrorCode::kDimension,
                "matrix expects " + std::to_string(rows * cols) +
                    " entries, got " + std::to_string(row_major.size()));
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = row_major[static_cast<std::size_t>(i * cols + j)];
    }
  }
  if (!all_finite(m)) {
    throw Error(ErrorCode::kDomain, "matrix entries must be finite");
  }
  return m;
}

Vector make_vector(std::span<const double> entries) {
  Vector v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!std::isfinite(entries[i])) {
      throw Error(ErrorCode::kDomain, "vector entries must be finite");
    }
    v(static_cast<Eigen::Index>(i)) = entries[i];
  }
  return v;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

namespace {

// Degree-13 Pade coefficients and the 1-norm bound below which the
// approximant is accurate to double precision without scaling.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

}  // namespace

Matrix expm(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kDimension, "expm requires a square matrix");
  }
  if (!all_finite(m)) {
    throw Error(ErrorCode::kDomain, "expm requires finite entries");
  }
  const Eigen::Index n = m.rows();
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  }
  const Matrix a = m / std::ldexp(1.0, squarings);

  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const auto& b = kPade13;

  const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                         b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  const Matrix u = a * u_inner;
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                   b[4] * a4 + b[2] * a2 + b[0] * ident;

  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) {
    r = r * r;
  }
  return r;
}

ZohPair zoh_discretize(const Matrix& A, const Matrix& Bext, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::kDomain, "discretization step must be positive");
  }
  if (A.rows() != A.cols()) {
    throw Error(ErrorCode::kDimension, "A must be square");
  }
  if (Bext.rows() != A.rows()) {
    throw Error(ErrorCode::kDimension,
                "input matrix row count must match the state dimension");
  }
  const Eigen::Index n = A.rows();
  const Eigen::Index q = Bext.cols();
  Matrix aug = Matrix::Zero(n + q, n + q);
  aug.topLeftCorner(n, n) = A * delta;
  aug.topRightCorner(n, q) = Bext * delta;
  const Matrix e = expm(aug);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, q)};
}

}  // namespace handsoff
