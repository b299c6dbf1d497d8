#pragma once

// Support-weighted Gauss-Newton reconstruction and its Tikhonov special case.

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>

#include "eit/forward.hpp"
#include "eit/grid.hpp"
#include "eit/support.hpp"

namespace eit {

/// Inner product on the FE space used for the penalty and for J^T.
enum class InnerProduct {
  l2_mass,    // consistent mass matrix
  euclidean,  // raw nodal coefficients, for ablations
};

enum class NormalSolver {
  direct,              // Cholesky of the penalty plus a dense data-space system
  conjugate_gradient,  // matrix-free, Jacobi preconditioned
};

struct ReconConfig {
  double alpha = 1e-3;
  double gamma = 0.1;
  int iterations = 20;  // N_v
  MaskProvenance mask_source = MaskProvenance::oracle;
  double R = 1.4;
  int mesh_n = 80;
  double sigma_min = 0.1;  // sigma = max(m + 1, sigma_min) inside forward solves
  InnerProduct inner_product = InnerProduct::l2_mass;
  NormalSolver solver = NormalSolver::direct;
  double cg_tolerance = 1e-10;

  /// Throws ValidationError for out-of-range values.
  void validate() const;
};

struct ReconResult {
  std::vector<FeFunction> iterates;   // m_0 = 0, ..., m_{N_v}
  std::vector<double> residual_norms; // ||F(m_i) - f|| over the non-degenerate columns
  std::vector<double> reg_values;     // R_alpha(m_i)
  SupportMask mask;
  ReconConfig config;
  std::vector<std::string> warnings;
};

/// (S_alpha m)_n = alpha m_n where mask_n = 1, m_n where mask_n = 0.
Eigen::VectorXd weighted_operator_apply(const Eigen::VectorXd& m, const Eigen::VectorXd& mask, double alpha);

/// Quadratic penalty R(m) = 1/2 (alpha ||S m||^2 + ||(1 - S) m||^2) with the
/// products taken node by node. Its Hessian H is what enters the normal
/// equations: alpha S M S + (I - S) M (I - S) for the mass inner product.
class Regularizer {
 public:
  /// mask holds nodal values, each exactly 0 or 1.
  Regularizer(const TriMesh& mesh, const Eigen::VectorXd& mask, double alpha,
              InnerProduct ip = InnerProduct::l2_mass);

  const SparseMatrix& hessian() const { return hessian_; }
  double alpha() const { return alpha_; }
  double value(const Eigen::VectorXd& m) const;

 private:
  double alpha_;
  SparseMatrix hessian_;
};

double reg_functional(const FeFunction& m, const FeFunction& mask, double alpha,
                      InnerProduct ip = InnerProduct::l2_mass);

/// Solves (H + J^T J) s = J^T r. The direct route factors H once and works
/// in data space, (H + J^T J)^-1 J^T = H^-1 J^T (I + J H^-1 J^T)^-1, so a
/// factor can serve every iteration of a run.
class NormalEquations {
 public:
  NormalEquations(SparseMatrix h, NormalSolver solver = NormalSolver::direct, double cg_tolerance = 1e-10);

  Eigen::VectorXd solve(const Eigen::MatrixXd& j, const Eigen::VectorXd& r) const;

 private:
  SparseMatrix h_;
  NormalSolver solver_;
  double cg_tolerance_;
  std::shared_ptr<const Eigen::SimplicialLLT<SparseMatrix>> factor_;
};

/// m + (S_alpha + J^* J)^-1 J^* residual, residual flattened like J's rows.
FeFunction gauss_newton_step(const FeFunction& m, const Jacobian& j, const Eigen::VectorXd& residual,
                             const FeFunction& mask, double alpha, InnerProduct ip = InnerProduct::l2_mass,
                             NormalSolver solver = NormalSolver::direct);

/// f restricted to `columns` minus the predicted voltages, flattened column
/// by column (pattern-major, electrode fastest).
Eigen::VectorXd flatten_residual(const Eigen::MatrixXd& measured, const Eigen::MatrixXd& predicted,
                                 const std::vector<int>& columns);

/// Gauss-Newton from m_0 = 0 for exactly config.iterations steps.
ReconResult run_levr(const CauchyData& data, const ReconConfig& config, const SupportMask& mask);

/// run_levr with the all-ones mask, i.e. S_alpha = alpha I.
ReconResult run_tikhonov(const CauchyData& data, const ReconConfig& config);

}  // namespace eit
