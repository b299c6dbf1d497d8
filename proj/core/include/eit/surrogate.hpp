#pragma once

// Finite-dimensional linear model of the weighted penalty, small enough that
// minimizers are exact.

#include <Eigen/Core>

namespace eit {

/// Weighted norm ||x||^2_{S,alpha} = alpha ||x||^2_{S+} + ||x||^2_{S-}, where
/// S+ is where support = 1 and S- its complement.
struct WeightedNorms {
  Eigen::VectorXd support;  // entries 0 or 1
  double alpha = 1.0;

  double plus_sq(const Eigen::VectorXd& x) const;
  double minus_sq(const Eigen::VectorXd& x) const;
  double weighted_sq(const Eigen::VectorXd& x) const;
  double plus(const Eigen::VectorXd& x) const;
  double minus(const Eigen::VectorXd& x) const;
};

/// argmin ||A x - y||^2 + ||x - x_star||^2_{S,alpha} from the normal
/// equations (A^T A + W) x = A^T y + W x_star, W = diag(alpha S + 1 - S).
Eigen::VectorXd solve_linear_surrogate(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                                       const Eigen::VectorXd& x_star, const Eigen::VectorXd& support,
                                       double alpha);

}  // namespace eit
