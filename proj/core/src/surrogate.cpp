#include "eit/surrogate.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "eit/errors.hpp"

namespace eit {

double WeightedNorms::plus_sq(const Eigen::VectorXd& x) const {
  return support.cwiseProduct(x.cwiseAbs2()).sum();
}

double WeightedNorms::minus_sq(const Eigen::VectorXd& x) const {
  return (1.0 - support.array()).matrix().cwiseProduct(x.cwiseAbs2()).sum();
}

double WeightedNorms::weighted_sq(const Eigen::VectorXd& x) const { return alpha * plus_sq(x) + minus_sq(x); }
double WeightedNorms::plus(const Eigen::VectorXd& x) const { return std::sqrt(plus_sq(x)); }
double WeightedNorms::minus(const Eigen::VectorXd& x) const { return std::sqrt(minus_sq(x)); }

Eigen::VectorXd solve_linear_surrogate(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                                       const Eigen::VectorXd& x_star, const Eigen::VectorXd& support,
                                       double alpha) {
  const Eigen::Index n = a.cols();
  if (y.size() != a.rows() || x_star.size() != n || support.size() != n) {
    throw ValidationError("solve_linear_surrogate: dimension mismatch");
  }
  if (!(alpha > 0.0)) throw ValidationError("solve_linear_surrogate: alpha must be positive");
  if (!(support.array() == 0.0 || support.array() == 1.0).all()) {
    throw ValidationError("solve_linear_surrogate: support must be binary");
  }
  const Eigen::VectorXd w = alpha * support.array() + (1.0 - support.array());
  Eigen::MatrixXd normal = a.transpose() * a;
  normal.diagonal() += w;
  Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) throw SingularSystemError("solve_linear_surrogate: normal system is singular");
  return llt.solve(a.transpose() * y + w.cwiseProduct(x_star));
}

}  // namespace eit
