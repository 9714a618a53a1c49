#pragma once

#include <Eigen/Dense>

#include "fermiwork/errors.hpp"

namespace fermiwork {

/// Real orthogonal action on the 2n Majorana components, interleaved
/// ordering (c_1, c_2 | c_3, c_4 | ...). Conjugating a covariance matrix
/// goes as Gamma -> O Gamma O^T.
class OrthogonalTransform {
 public:
  /// Validates ||O O^T - 1||_max < 1e-12 and an even dimension >= 2.
  explicit OrthogonalTransform(Eigen::MatrixXd matrix);

  int n_modes() const { return static_cast<int>(matrix_.rows()) / 2; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  int det_sign() const { return det_sign_; }

  static OrthogonalTransform identity(int n_modes);

 private:
  Eigen::MatrixXd matrix_;
  int det_sign_;
};

}  // namespace fermiwork
