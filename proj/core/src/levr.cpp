#include "eit/levr.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "eit/errors.hpp"

namespace eit {

void ReconConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0, 1)");
  if (iterations < 0) throw ValidationError("iteration count must be >= 0");
  if (!(R > 0.0) || !std::isfinite(R)) throw ValidationError("R must be positive");
  if (mesh_n < 2) throw ValidationError("mesh_N must be >= 2");
  if (!(sigma_min > 0.0)) throw ValidationError("sigma_min must be positive");
  if (!(cg_tolerance > 0.0)) throw ValidationError("cg_tolerance must be positive");
}

namespace {

void require_binary(const Eigen::VectorXd& mask, const char* what) {
  if (!(mask.array() == 0.0 || mask.array() == 1.0).all()) {
    throw ValidationError(std::string(what) + ": mask must be binary");
  }
}

}  // namespace

Eigen::VectorXd weighted_operator_apply(const Eigen::VectorXd& m, const Eigen::VectorXd& mask, double alpha) {
  if (m.size() != mask.size()) throw ValidationError("weighted_operator_apply: size mismatch");
  Eigen::VectorXd out(m.size());
  for (Eigen::Index n = 0; n < m.size(); ++n) out(n) = mask(n) != 0.0 ? alpha * m(n) : m(n);
  return out;
}

Regularizer::Regularizer(const TriMesh& mesh, const Eigen::VectorXd& mask, double alpha, InnerProduct ip)
    : alpha_(alpha) {
  if (mask.size() != mesh.node_count()) throw ValidationError("Regularizer: mask does not match the mesh");
  require_binary(mask, "Regularizer");
  if (!(alpha > 0.0)) throw ValidationError("Regularizer: alpha must be positive");
  const int n = mesh.node_count();
  if (ip == InnerProduct::euclidean) {
    hessian_.resize(n, n);
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(n);
    for (int i = 0; i < n; ++i) t.emplace_back(i, i, mask(i) != 0.0 ? alpha : 1.0);
    hessian_.setFromTriplets(t.begin(), t.end());
    return;
  }
  // entries coupling a masked and an unmasked node drop out
  hessian_ = mass_matrix(mesh);
  for (int col = 0; col < hessian_.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(hessian_, col); it; ++it) {
      const double si = mask(it.row());
      const double sj = mask(col);
      it.valueRef() *= alpha * si * sj + (1.0 - si) * (1.0 - sj);
    }
  }
  hessian_.prune(0.0);
}

double Regularizer::value(const Eigen::VectorXd& m) const {
  if (m.size() != hessian_.rows()) throw ValidationError("Regularizer::value: size mismatch");
  return 0.5 * m.dot(hessian_ * m);
}

double reg_functional(const FeFunction& m, const FeFunction& mask, double alpha, InnerProduct ip) {
  if (!m.mesh || m.mesh != mask.mesh) throw ValidationError("reg_functional: m and mask must share a mesh");
  return Regularizer(*m.mesh, mask.values, alpha, ip).value(m.values);
}

NormalEquations::NormalEquations(SparseMatrix h, NormalSolver solver, double cg_tolerance)
    : h_(std::move(h)), solver_(solver), cg_tolerance_(cg_tolerance) {
  if (solver_ == NormalSolver::direct) {
    auto f = std::make_shared<Eigen::SimplicialLLT<SparseMatrix>>(h_);
    if (f->info() != Eigen::Success) throw SingularSystemError("normal equations: penalty Hessian is not positive definite");
    factor_ = std::move(f);
  }
}

Eigen::VectorXd NormalEquations::solve(const Eigen::MatrixXd& j, const Eigen::VectorXd& r) const {
  if (j.cols() != h_.rows() || j.rows() != r.size()) throw ValidationError("normal equations: dimension mismatch");
  const Eigen::VectorXd hdiag = h_.diagonal();
  const double jscale = j.colwise().squaredNorm().maxCoeff();
  if (!(hdiag.minCoeff() > 1e-15 * jscale)) {
    throw SingularSystemError("normal equations: penalty weight is negligible next to J^T J (alpha too small)");
  }
  const Eigen::VectorXd jtr = j.transpose() * r;

  if (solver_ == NormalSolver::direct) {
    // Y = L^-1 P J^T, so J H^-1 J^T = Y^T Y
    Eigen::MatrixXd y = factor_->permutationP() * j.transpose();
    factor_->matrixL().solveInPlace(y);
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(j.rows(), j.rows());
    a.selfadjointView<Eigen::Lower>().rankUpdate(y.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) throw SingularSystemError("normal equations: data-space system failed to factor");
    const Eigen::VectorXd w = llt.solve(r);
    Eigen::VectorXd s = factor_->solve(j.transpose() * w);
    if (!s.allFinite()) throw SingularSystemError("normal equations: non-finite step");
    return s;
  }

  // preconditioned CG on (H + J^T J) s = J^T r
  const Eigen::VectorXd precond = (hdiag + j.colwise().squaredNorm().transpose()).cwiseInverse();
  const auto apply = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return h_ * v + j.transpose() * (j * v);
  };
  Eigen::VectorXd s = Eigen::VectorXd::Zero(h_.rows());
  Eigen::VectorXd res = jtr;
  const double target = cg_tolerance_ * jtr.norm();
  if (jtr.norm() == 0.0) return s;
  Eigen::VectorXd z = precond.cwiseProduct(res);
  Eigen::VectorXd d = z;
  double rz = res.dot(z);
  const int max_iter = 10 * static_cast<int>(h_.rows());
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd ad = apply(d);
    const double curv = d.dot(ad);
    if (!(curv > 0.0)) throw SingularSystemError("normal equations: CG met a non-positive curvature");
    const double step = rz / curv;
    s += step * d;
    res -= step * ad;
    if (res.norm() <= target) return s;
    z = precond.cwiseProduct(res);
    const double rz_next = res.dot(z);
    d = z + (rz_next / rz) * d;
    rz = rz_next;
  }
  throw SingularSystemError("normal equations: CG did not reach the tolerance");
}

FeFunction gauss_newton_step(const FeFunction& m, const Jacobian& j, const Eigen::VectorXd& residual,
                             const FeFunction& mask, double alpha, InnerProduct ip, NormalSolver solver) {
  if (!m.mesh || m.mesh != mask.mesh) throw ValidationError("gauss_newton_step: m and mask must share a mesh");
  const Regularizer reg(*m.mesh, mask.values, alpha, ip);
  const NormalEquations ne(reg.hessian(), solver);
  return FeFunction(m.mesh, m.values + ne.solve(j.values, residual));
}

Eigen::VectorXd flatten_residual(const Eigen::MatrixXd& measured, const Eigen::MatrixXd& predicted,
                                 const std::vector<int>& columns) {
  const Eigen::Index p = measured.rows();
  if (predicted.rows() != p || predicted.cols() != static_cast<Eigen::Index>(columns.size())) {
    throw ValidationError("flatten_residual: shape mismatch");
  }
  Eigen::VectorXd r(p * static_cast<Eigen::Index>(columns.size()));
  for (size_t k = 0; k < columns.size(); ++k) {
    r.segment(static_cast<Eigen::Index>(k) * p, p) = measured.col(columns[k]) - predicted.col(static_cast<Eigen::Index>(k));
  }
  return r;
}

namespace {

[[noreturn]] void rethrow_at(int iteration) {
  const std::string where = "iteration " + std::to_string(iteration) + ": ";
  try {
    throw;
  } catch (const SingularSystemError& e) {
    throw SingularSystemError(where + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(where + e.what());
  }
}

}  // namespace

ReconResult run_levr(const CauchyData& data, const ReconConfig& config, const SupportMask& mask) {
  config.validate();
  if (mask.grid.size() != config.mesh_n) {
    throw ValidationError("run_levr: mask is " + std::to_string(mask.grid.size()) + "x" +
                          std::to_string(mask.grid.size()) + " but mesh_N is " + std::to_string(config.mesh_n));
  }
  const CurrentPatterns& patterns = data.patterns;
  if (data.voltages.rows() != patterns.electrodes || data.voltages.cols() != patterns.count) {
    throw ValidationError("run_levr: voltages must be P x Q");
  }
  if (data.injection == Injection::continuum && !patterns.continuum) {
    throw ValidationError("run_levr: continuum injection needs trigonometric patterns");
  }

  const MeshPtr mesh = build_mesh(config.mesh_n);
  const ElectrodeLayout layout = electrode_positions(patterns.electrodes);
  const FeFunction mask_fe = pixels_to_fe(mask.values, mask.grid, mesh);
  const Regularizer reg(*mesh, mask_fe.values, config.alpha, config.inner_product);
  const NormalEquations normal(reg.hessian(), config.solver, config.cg_tolerance);
  const std::vector<int> columns = patterns.active_columns();

  std::vector<FeFunction> iterates;
  std::vector<double> residual_norms, reg_values;
  std::vector<std::string> warnings;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(mesh->node_count());
  double previous_objective = 0.0;

  for (int i = 0; i <= config.iterations; ++i) {
    try {
      const Eigen::VectorXd sigma = (m.array() + 1.0).max(config.sigma_min);
      const ForwardSolver solver(mesh, layout, FeFunction(mesh, sigma));
      const ForwardResponse response = forward_response(solver, patterns, columns, data.injection);
      const Eigen::VectorXd r = flatten_residual(data.voltages, response.voltages, columns);

      iterates.emplace_back(mesh, m);
      residual_norms.push_back(r.norm());
      reg_values.push_back(reg.value(m));
      const double objective = 0.5 * r.squaredNorm() + reg_values.back();
      if (i > 2 && objective > previous_objective) {
        warnings.push_back("objective increased at iteration " + std::to_string(i) + " (" +
                           std::to_string(previous_objective) + " -> " + std::to_string(objective) + ")");
      }
      previous_objective = objective;
      if (i == config.iterations) break;

      const Jacobian j = assemble_jacobian(solver, response);
      m += normal.solve(j.values, r);
    } catch (const NumericalError&) {
      rethrow_at(i);
    }
  }
  return ReconResult{std::move(iterates), std::move(residual_norms), std::move(reg_values), mask, config,
                     std::move(warnings)};
}

ReconResult run_tikhonov(const CauchyData& data, const ReconConfig& config) {
  config.validate();
  return run_levr(data, config, SupportMask::full(PixelGrid(config.mesh_n)));
}

}  // namespace eit
