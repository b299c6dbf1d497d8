#include "eit/forward.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/SVD>

#include "eit/errors.hpp"

namespace eit {

bool CurrentPatterns::degenerate(int q) const {
  return g.col(q).norm() < kDegenerateColumnTolerance * std::sqrt(static_cast<double>(electrodes));
}

std::vector<int> CurrentPatterns::active_columns() const {
  std::vector<int> cols;
  for (int q = 0; q < count; ++q) {
    if (!degenerate(q)) cols.push_back(q);
  }
  return cols;
}

int CurrentPatterns::rank() const {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  svd.setThreshold(1e-10);
  return static_cast<int>(svd.rank());
}

double trig_pattern_value(int q, double theta) {
  if (q % 2 == 1) return std::cos((q + 1) * theta / 2.0);
  return std::sin(q * theta / 2.0);
}

CurrentPatterns trig_patterns(int p, int q) {
  if (p < 2 || p % 2 != 0) throw ValidationError("trig_patterns: P must be even, got " + std::to_string(p));
  if (q < 1) throw ValidationError("trig_patterns: Q must be positive, got " + std::to_string(q));
  CurrentPatterns out;
  out.electrodes = p;
  out.count = q;
  out.continuum = true;
  out.g.resize(p, q);
  for (int c = 0; c < q; ++c) {
    for (int e = 0; e < p; ++e) out.g(e, c) = trig_pattern_value(c + 1, 2.0 * M_PI * e / p);
    out.g.col(c).array() -= out.g.col(c).mean();
  }
  return out;
}

CurrentPatterns custom_patterns(Eigen::MatrixXd g) {
  CurrentPatterns out;
  out.electrodes = static_cast<int>(g.rows());
  out.count = static_cast<int>(g.cols());
  out.continuum = false;
  out.g = std::move(g);
  for (int c = 0; c < out.count; ++c) out.g.col(c).array() -= out.g.col(c).mean();
  return out;
}

ForwardSolver::ForwardSolver(MeshPtr mesh, ElectrodeLayout electrodes, FeFunction sigma)
    : mesh_(std::move(mesh)), electrodes_(std::move(electrodes)), sigma_(std::move(sigma)) {
  if (!mesh_ || sigma_.mesh.get() != mesh_.get()) {
    throw ValidationError("ForwardSolver: sigma must live on the solver mesh");
  }
  const double smin = sigma_.values.minCoeff();
  if (!(smin > 0.0) || !sigma_.values.allFinite()) {
    throw NumericalError("ForwardSolver: conductivity must be positive and finite, min sigma = " +
                         std::to_string(smin));
  }
  electrode_nodes_ = eit::electrode_nodes(electrodes_, *mesh_);
  stiffness_ = stiffness_matrix(*mesh_, sigma_.values);
  boundary_mass_ = boundary_mass_vector(*mesh_);

  // The grounded saddle-point system is solved by block elimination: K with
  // one node pinned is SPD and reproduces K u = b for Kirchhoff-compatible b;
  // the multiplier constraint then fixes the additive constant.
  SparseMatrix pinned = stiffness_;
  const int pin = pinned_node_;
  pinned.prune([pin](Eigen::Index r, Eigen::Index c, double) { return r != pin && c != pin; });
  pinned.coeffRef(pin, pin) = 1.0;
  pinned.makeCompressed();
  auto factor = std::make_shared<Eigen::SimplicialLLT<SparseMatrix>>(pinned);
  if (factor->info() != Eigen::Success) {
    throw NumericalError("ForwardSolver: factorization of the stiffness system failed");
  }
  factor_ = std::move(factor);
}

FeFunction ForwardSolver::solve_load(const Eigen::VectorXd& load) const {
  if (load.size() != mesh_->node_count()) throw ValidationError("solve_load: load size mismatch");
  const double perimeter = boundary_mass_.sum();
  const double lambda = load.sum() / perimeter;
  Eigen::VectorXd rhs = load - lambda * boundary_mass_;
  rhs[pinned_node_] = 0.0;
  Eigen::VectorXd u = factor_->solve(rhs);
  u.array() -= boundary_mass_.dot(u) / perimeter;
  return FeFunction(mesh_, std::move(u));
}

Eigen::VectorXd ForwardSolver::boundary_load(const Eigen::VectorXd& boundary_values) const {
  const auto& bnd = mesh_->boundary_nodes;
  if (boundary_values.size() != static_cast<Eigen::Index>(bnd.size())) {
    throw ValidationError("boundary_load: expected one value per boundary node");
  }
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh_->node_count());
  const int nb = static_cast<int>(bnd.size());
  for (int k = 0; k < nb; ++k) {
    const int k1 = (k + 1) % nb;
    const Point a = mesh_->nodes[bnd[k]];
    const Point b = mesh_->nodes[bnd[k1]];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    load[bnd[k]] += len / 6.0 * (2.0 * boundary_values[k] + boundary_values[k1]);
    load[bnd[k1]] += len / 6.0 * (boundary_values[k] + 2.0 * boundary_values[k1]);
  }
  return load;
}

Eigen::VectorXd ForwardSolver::pattern_load(const CurrentPatterns& patterns, int q, Injection mode) const {
  if (patterns.electrodes != electrodes_.count) {
    throw ValidationError("pattern_load: patterns are for " + std::to_string(patterns.electrodes) +
                          " electrodes, solver has " + std::to_string(electrodes_.count));
  }
  if (q < 0 || q >= patterns.count) throw ValidationError("pattern_load: column out of range");
  if (mode == Injection::continuum) {
    if (!patterns.continuum) {
      throw ValidationError("pattern_load: continuum injection needs trigonometric patterns");
    }
    const int nb = static_cast<int>(mesh_->boundary_nodes.size());
    Eigen::VectorXd values(nb);
    for (int k = 0; k < nb; ++k) values[k] = trig_pattern_value(q + 1, 2.0 * M_PI * k / nb);
    values.array() -= values.mean();
    return boundary_load(values);
  }
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh_->node_count());
  const double weight = kBoundaryLength / electrodes_.count;
  for (int e = 0; e < electrodes_.count; ++e) load[electrode_nodes_[e]] += weight * patterns.g(e, q);
  return load;
}

Eigen::VectorXd ForwardSolver::measure(const FeFunction& u) const {
  Eigen::VectorXd v(electrodes_.count);
  for (int e = 0; e < electrodes_.count; ++e) v[e] = u.values[electrode_nodes_[e]];
  v.array() -= v.mean();
  return v;
}

FeFunction solve_forward(const ForwardSolver& solver, const CurrentPatterns& patterns, int q, Injection mode) {
  return solver.solve_load(solver.pattern_load(patterns, q, mode));
}

ForwardResponse forward_response(const ForwardSolver& solver, const CurrentPatterns& patterns,
                                 const std::vector<int>& columns, Injection mode) {
  ForwardResponse out;
  out.columns = columns;
  out.voltages.resize(solver.electrodes().count, static_cast<Eigen::Index>(columns.size()));
  out.fields.reserve(columns.size());
  for (size_t k = 0; k < columns.size(); ++k) {
    out.fields.push_back(solve_forward(solver, patterns, columns[k], mode));
    out.voltages.col(static_cast<Eigen::Index>(k)) = solver.measure(out.fields.back());
  }
  return out;
}

CauchyData simulate_cauchy(const ForwardSolver& solver, const CurrentPatterns& patterns, double delta,
                           std::uint64_t seed, Injection mode) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw ValidationError("simulate_cauchy: noise level must be nonnegative, got " + std::to_string(delta));
  }
  std::vector<int> all(patterns.count);
  for (int q = 0; q < patterns.count; ++q) all[q] = q;
  CauchyData data;
  data.patterns = patterns;
  data.voltages = forward_response(solver, patterns, all, mode).voltages;
  data.noise_level = delta;
  data.seed = seed;
  data.mesh_n = solver.mesh().n;
  data.injection = mode;
  if (delta > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int q = 0; q < patterns.count; ++q) {
      auto col = data.voltages.col(q);
      const double scale = delta * col.cwiseAbs().maxCoeff();
      for (int e = 0; e < col.size(); ++e) col[e] += scale * normal(rng);
      col.array() -= col.mean();
    }
  }
  return data;
}

FeFunction frechet_apply(const ForwardSolver& solver, const FeFunction& u, const FeFunction& q) {
  const TriMesh& mesh = solver.mesh();
  if (u.mesh.get() != &mesh || q.mesh.get() != &mesh) {
    throw ValidationError("frechet_apply: u and q must live on the solver mesh");
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh.node_count());
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    const double qbar = (q.values[tri[0]] + q.values[tri[1]] + q.values[tri[2]]) / 3.0;
    if (qbar == 0.0) continue;
    const auto g = hat_gradients(mesh, t);
    const Eigen::Vector2d du = g * Eigen::Vector3d(u.values[tri[0]], u.values[tri[1]], u.values[tri[2]]);
    const Eigen::Vector3d local = -(qbar * triangle_area(mesh, t)) * (g.transpose() * du);
    for (int r = 0; r < 3; ++r) rhs[tri[r]] += local[r];
  }
  return solver.solve_load(rhs);
}

Jacobian assemble_jacobian(const ForwardSolver& solver, const ForwardResponse& response) {
  const TriMesh& mesh = solver.mesh();
  const int p = solver.electrodes().count;
  const int qa = static_cast<int>(response.columns.size());
  const auto& enodes = solver.electrode_nodes();

  // Adjoint fields: unit current at electrode e, withdrawn uniformly.
  std::vector<FeFunction> adjoint;
  adjoint.reserve(p);
  for (int e = 0; e < p; ++e) {
    Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.node_count());
    for (int k = 0; k < p; ++k) load[enodes[k]] -= 1.0 / p;
    load[enodes[e]] += 1.0;
    adjoint.push_back(solver.solve_load(load));
  }

  Jacobian jac;
  jac.electrodes = p;
  jac.columns = response.columns;
  jac.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p) * qa, mesh.node_count());

  Eigen::Matrix<double, 2, Eigen::Dynamic> grad_u(2, qa);
  Eigen::Matrix<double, 2, Eigen::Dynamic> grad_z(2, p);
  Eigen::MatrixXd block(p, qa);
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto g = hat_gradients(mesh, t);
    for (int k = 0; k < qa; ++k) {
      const auto& v = response.fields[k].values;
      grad_u.col(k) = g * Eigen::Vector3d(v[tri[0]], v[tri[1]], v[tri[2]]);
    }
    for (int e = 0; e < p; ++e) {
      const auto& v = adjoint[e].values;
      grad_z.col(e) = g * Eigen::Vector3d(v[tri[0]], v[tri[1]], v[tri[2]]);
    }
    // d/dm_n of the triangle-averaged conductivity is 1/3 for each vertex.
    block.noalias() = (-triangle_area(mesh, t) / 3.0) * (grad_z.transpose() * grad_u);
    const Eigen::Map<const Eigen::VectorXd> flat(block.data(), block.size());
    for (int r = 0; r < 3; ++r) jac.values.col(tri[r]) += flat;
  }
  return jac;
}

Jacobian assemble_jacobian(const ForwardSolver& solver, const CurrentPatterns& patterns, Injection mode) {
  return assemble_jacobian(solver, forward_response(solver, patterns, patterns.active_columns(), mode));
}

}  // namespace eit
