#include "fermiwork/transform.hpp"

#include <cmath>
#include <string>

namespace fermiwork {

OrthogonalTransform::OrthogonalTransform(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  const auto rows = matrix_.rows();
  if (rows != matrix_.cols() || rows < 2 || rows % 2 != 0)
    throw ArgumentError("OrthogonalTransform: need a square matrix of even dimension >= 2");
  const double residual =
      (matrix_ * matrix_.transpose() - Eigen::MatrixXd::Identity(rows, rows))
          .cwiseAbs()
          .maxCoeff();
  if (!(residual < 1e-12))
    throw ValidationError("OrthogonalTransform: ||O O^T - 1||_max = " + std::to_string(residual));
  const double det = matrix_.determinant();
  if (std::abs(std::abs(det) - 1.0) > 1e-9)
    throw NumericError("OrthogonalTransform: |det| = " + std::to_string(std::abs(det)));
  det_sign_ = det > 0 ? 1 : -1;
}

OrthogonalTransform OrthogonalTransform::identity(int n_modes) {
  return OrthogonalTransform(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

}  // namespace fermiwork
