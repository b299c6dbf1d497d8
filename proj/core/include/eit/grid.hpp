#pragma once

// Pixel grid, structured triangulation and P1 finite elements on the square
// [-1,1]^2.
//
// Orientation conventions used everywhere in the library:
//  * pixel (i, j): row i grows with y, column j grows with x, both 0-based;
//    the center is (-1 + (j + 1/2) h, -1 + (i + 1/2) h).
//  * mesh node (a, b): column a grows with x, row b grows with y, index
//    b * (N + 1) + a, coordinate (-1 + a h, -1 + b h).
//  * every pixel is split along its lower-left to upper-right diagonal.
//  * the boundary is walked counterclockwise starting at the corner (1, -1);
//    arc length s in [0, 8) is measured from that corner.

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace eit {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using ScalarField = std::function<double(Point)>;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Perimeter of the square domain.
inline constexpr double kBoundaryLength = 8.0;

class PixelGrid {
 public:
  explicit PixelGrid(int n);

  int size() const { return n_; }
  double spacing() const { return h_; }
  Point center(int i, int j) const;

 private:
  int n_;
  double h_;
};

PixelGrid build_grid(int n);

struct TriMesh {
  int n = 0;      // pixels per side
  double h = 0.;  // element side length 2/n
  std::vector<Point> nodes;
  std::vector<std::array<int, 3>> triangles;       // counterclockwise
  std::vector<std::array<int, 2>> boundary_edges;  // consecutive boundary nodes, ccw
  std::vector<int> boundary_nodes;                 // ccw from (1, -1)

  int node_count() const { return static_cast<int>(nodes.size()); }
  int node_index(int col, int row) const { return row * (n + 1) + col; }
};

using MeshPtr = std::shared_ptr<const TriMesh>;

MeshPtr build_mesh(int n);

/// Point on the boundary at arc length s (taken modulo 8).
Point boundary_point(double s);

/// Continuous piecewise-linear function given by its nodal values.
struct FeFunction {
  MeshPtr mesh;
  Eigen::VectorXd values;

  FeFunction() = default;
  FeFunction(MeshPtr m, Eigen::VectorXd v);

  /// Evaluates at any point of the closed domain by structured point location.
  double operator()(Point p) const;
};

FeFunction interpolate(const ScalarField& f, const MeshPtr& mesh);

struct ElectrodeLayout {
  int count = 0;
  std::vector<Point> positions;
  std::vector<double> angles;       // theta_p = 2 pi (p - 1) / P
  std::vector<double> arc_lengths;  // s_p = 8 (p - 1) / P
};

ElectrodeLayout electrode_positions(int p);

/// Boundary mesh nodes carrying the electrodes. Requires 4N divisible by P.
std::vector<int> electrode_nodes(const ElectrodeLayout& layout, const TriMesh& mesh);

/// Entry (i, j) = u(x_ij).
Eigen::MatrixXd fe_to_pixels(const FeFunction& u, const PixelGrid& grid);

/// Entry (i, j) = f(x_ij); the pixel matrix of a continuous field.
Eigen::MatrixXd sample_pixels(const ScalarField& f, const PixelGrid& grid);

/// Samples the piecewise-constant pixel field at the mesh nodes. A node on a
/// shared pixel edge or corner takes the pixel with the smallest (i, j).
FeFunction pixels_to_fe(const Eigen::MatrixXd& pixels, const PixelGrid& grid, const MeshPtr& mesh);

// P1 assembly on the structured mesh.

/// Constant gradients of the three hat functions of triangle t (2 x 3).
Eigen::Matrix<double, 2, 3> hat_gradients(const TriMesh& mesh, int t);
double triangle_area(const TriMesh& mesh, int t);

/// Gradient of u on triangle t.
Eigen::Vector2d gradient(const TriMesh& mesh, const Eigen::VectorXd& u, int t);

/// Stiffness matrix of -div(sigma grad .), sigma averaged per triangle.
SparseMatrix stiffness_matrix(const TriMesh& mesh, const Eigen::VectorXd& sigma);

/// Consistent L2 mass matrix.
SparseMatrix mass_matrix(const TriMesh& mesh);

/// c_i = integral of phi_i over the boundary.
Eigen::VectorXd boundary_mass_vector(const TriMesh& mesh);

}  // namespace eit
