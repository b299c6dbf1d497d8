#pragma once

// Forward model: the conductivity equation with Neumann data on the square,
// grounded by  integral_{boundary} u ds = 0, sampled at point electrodes.

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>

#include "eit/grid.hpp"

namespace eit {

/// How a current pattern enters the Neumann data.
enum class Injection {
  /// Piecewise-linear interpolant of the continuum pattern g_q(theta) over
  /// every boundary node.
  continuum,
  /// Point currents of weight |boundary| / P at the electrode nodes only.
  point,
};

/// Columns whose norm falls below this multiple of sqrt(P) are degenerate.
inline constexpr double kDegenerateColumnTolerance = 1e-10;

struct CurrentPatterns {
  int electrodes = 0;  // P
  int count = 0;       // Q
  Eigen::MatrixXd g;   // P x Q, column q holds pattern q + 1 at the electrodes
  /// Columns are traces of the trigonometric boundary functions, which makes
  /// continuum injection available.
  bool continuum = false;

  bool degenerate(int q) const;
  std::vector<int> active_columns() const;
  int rank() const;
};

/// Trigonometric pattern number q (1-based) at boundary angle theta:
/// cos((q+1) theta / 2) for odd q, sin(q theta / 2) for even q.
double trig_pattern_value(int q, double theta);

CurrentPatterns trig_patterns(int p, int q);

/// Patterns given only at the electrodes (point injection only).
CurrentPatterns custom_patterns(Eigen::MatrixXd g);

struct CauchyData {
  CurrentPatterns patterns;
  Eigen::MatrixXd voltages;  // P x Q
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  int mesh_n = 0;
  Injection injection = Injection::continuum;
};

class ForwardSolver {
 public:
  /// Assembles and factors the grounded system for sigma. Throws
  /// NumericalError when sigma is not strictly positive at every node.
  ForwardSolver(MeshPtr mesh, ElectrodeLayout electrodes, FeFunction sigma);

  const TriMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  const ElectrodeLayout& electrodes() const { return electrodes_; }
  const std::vector<int>& electrode_nodes() const { return electrode_nodes_; }
  const FeFunction& sigma() const { return sigma_; }
  const SparseMatrix& stiffness() const { return stiffness_; }

  /// Solves K u + lambda c = load, c^T u = 0 where c is the boundary mass
  /// functional. Loads that violate Kirchhoff's law are projected by lambda.
  FeFunction solve_load(const Eigen::VectorXd& load) const;

  /// Load of the piecewise-linear boundary function with the given values at
  /// mesh.boundary_nodes (same ccw order).
  Eigen::VectorXd boundary_load(const Eigen::VectorXd& boundary_values) const;

  Eigen::VectorXd pattern_load(const CurrentPatterns& patterns, int q, Injection mode) const;

  /// Electrode voltages with their mean over the electrodes removed.
  Eigen::VectorXd measure(const FeFunction& u) const;

 private:
  MeshPtr mesh_;
  ElectrodeLayout electrodes_;
  std::vector<int> electrode_nodes_;
  FeFunction sigma_;
  SparseMatrix stiffness_;
  Eigen::VectorXd boundary_mass_;
  int pinned_node_ = 0;
  std::shared_ptr<const Eigen::SimplicialLLT<SparseMatrix>> factor_;
};

FeFunction solve_forward(const ForwardSolver& solver, const CurrentPatterns& patterns, int q,
                         Injection mode = Injection::continuum);

/// Potentials and measured voltages for a set of pattern columns.
struct ForwardResponse {
  std::vector<int> columns;
  std::vector<FeFunction> fields;
  Eigen::MatrixXd voltages;  // P x columns.size(), zero-mean columns
};

ForwardResponse forward_response(const ForwardSolver& solver, const CurrentPatterns& patterns,
                                 const std::vector<int>& columns, Injection mode);

/// Forward-solves every pattern, adds relative Gaussian noise
/// f + delta * max|f_q| * xi_q and re-grounds each column.
CauchyData simulate_cauchy(const ForwardSolver& solver, const CurrentPatterns& patterns,
                           double delta, std::uint64_t seed,
                           Injection mode = Injection::continuum);

/// Directional derivative of m -> u at the solver's sigma in direction q:
/// -div(sigma grad v) = div(q grad u), zero flux, grounded.
FeFunction frechet_apply(const ForwardSolver& solver, const FeFunction& u, const FeFunction& q);

struct Jacobian {
  int electrodes = 0;
  std::vector<int> columns;  // pattern columns owning the row blocks
  /// Row (k * P + p) is electrode p under pattern columns[k]; one column per node.
  Eigen::MatrixXd values;
};

/// Adjoint assembly: P grounded point-current solves plus the given fields.
Jacobian assemble_jacobian(const ForwardSolver& solver, const ForwardResponse& response);

/// Convenience overload that performs the forward solves for every
/// non-degenerate column first.
Jacobian assemble_jacobian(const ForwardSolver& solver, const CurrentPatterns& patterns,
                           Injection mode = Injection::continuum);

}  // namespace eit
