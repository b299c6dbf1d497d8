#include "eit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eit/errors.hpp"

namespace eit {

namespace {

void require_resolution(int n) {
  if (n < 2) {
    throw ValidationError("resolution N must be at least 2, got " + std::to_string(n));
  }
}

}  // namespace

PixelGrid::PixelGrid(int n) : n_(n), h_(0.0) {
  require_resolution(n);
  h_ = 2.0 / n;
}

Point PixelGrid::center(int i, int j) const {
  return {-1.0 + (j + 0.5) * h_, -1.0 + (i + 0.5) * h_};
}

PixelGrid build_grid(int n) { return PixelGrid(n); }

MeshPtr build_mesh(int n) {
  require_resolution(n);
  auto mesh = std::make_shared<TriMesh>();
  mesh->n = n;
  mesh->h = 2.0 / n;
  const int side = n + 1;
  mesh->nodes.reserve(static_cast<size_t>(side) * side);
  for (int b = 0; b < side; ++b) {
    for (int a = 0; a < side; ++a) {
      mesh->nodes.push_back({-1.0 + a * mesh->h, -1.0 + b * mesh->h});
    }
  }
  // Exact edges of the square, free of accumulated rounding.
  for (int k = 0; k < side; ++k) {
    mesh->nodes[mesh->node_index(n, k)].x = 1.0;
    mesh->nodes[mesh->node_index(k, n)].y = 1.0;
  }

  mesh->triangles.reserve(2 * static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int bl = mesh->node_index(j, i);
      const int br = mesh->node_index(j + 1, i);
      const int tr = mesh->node_index(j + 1, i + 1);
      const int tl = mesh->node_index(j, i + 1);
      mesh->triangles.push_back({bl, br, tr});
      mesh->triangles.push_back({bl, tr, tl});
    }
  }

  auto& bnd = mesh->boundary_nodes;
  bnd.reserve(4 * static_cast<size_t>(n));
  for (int b = 0; b < n; ++b) bnd.push_back(mesh->node_index(n, b));      // right, upwards
  for (int a = n; a > 0; --a) bnd.push_back(mesh->node_index(a, n));      // top, leftwards
  for (int b = n; b > 0; --b) bnd.push_back(mesh->node_index(0, b));      // left, downwards
  for (int a = 0; a < n; ++a) bnd.push_back(mesh->node_index(a, 0));      // bottom, rightwards
  const int nb = static_cast<int>(bnd.size());
  for (int k = 0; k < nb; ++k) {
    mesh->boundary_edges.push_back({bnd[k], bnd[(k + 1) % nb]});
  }
  return mesh;
}

Point boundary_point(double s) {
  s = std::fmod(s, kBoundaryLength);
  if (s < 0) s += kBoundaryLength;
  if (s < 2.0) return {1.0, -1.0 + s};
  if (s < 4.0) return {1.0 - (s - 2.0), 1.0};
  if (s < 6.0) return {-1.0, 1.0 - (s - 4.0)};
  return {-1.0 + (s - 6.0), -1.0};
}

FeFunction::FeFunction(MeshPtr m, Eigen::VectorXd v) : mesh(std::move(m)), values(std::move(v)) {
  if (!mesh) throw ValidationError("FeFunction requires a mesh");
  if (values.size() != mesh->node_count()) {
    throw ValidationError("FeFunction: expected " + std::to_string(mesh->node_count()) +
                          " nodal values, got " + std::to_string(values.size()));
  }
}

double FeFunction::operator()(Point p) const {
  const int n = mesh->n;
  const double fx = (p.x + 1.0) / mesh->h;
  const double fy = (p.y + 1.0) / mesh->h;
  const int a = std::clamp(static_cast<int>(std::floor(fx)), 0, n - 1);
  const int b = std::clamp(static_cast<int>(std::floor(fy)), 0, n - 1);
  const double xi = fx - a;
  const double eta = fy - b;
  const double bl = values[mesh->node_index(a, b)];
  const double tr = values[mesh->node_index(a + 1, b + 1)];
  if (eta <= xi) {
    const double br = values[mesh->node_index(a + 1, b)];
    return (1.0 - xi) * bl + (xi - eta) * br + eta * tr;
  }
  const double tl = values[mesh->node_index(a, b + 1)];
  return (1.0 - eta) * bl + xi * tr + (eta - xi) * tl;
}

FeFunction interpolate(const ScalarField& f, const MeshPtr& mesh) {
  Eigen::VectorXd v(mesh->node_count());
  for (int k = 0; k < mesh->node_count(); ++k) v[k] = f(mesh->nodes[k]);
  return FeFunction(mesh, std::move(v));
}

ElectrodeLayout electrode_positions(int p) {
  if (p < 4 || p % 2 != 0) {
    throw ValidationError("electrode count P must be even and at least 4, got " + std::to_string(p));
  }
  ElectrodeLayout layout;
  layout.count = p;
  for (int k = 0; k < p; ++k) {
    const double s = kBoundaryLength * k / p;
    layout.arc_lengths.push_back(s);
    layout.angles.push_back(2.0 * M_PI * k / p);
    layout.positions.push_back(boundary_point(s));
  }
  return layout;
}

std::vector<int> electrode_nodes(const ElectrodeLayout& layout, const TriMesh& mesh) {
  const int nb = static_cast<int>(mesh.boundary_nodes.size());
  if (layout.count <= 0 || nb % layout.count != 0) {
    throw ValidationError("electrodes must sit on mesh nodes: 4N = " + std::to_string(nb) +
                          " is not divisible by P = " + std::to_string(layout.count));
  }
  const int stride = nb / layout.count;
  std::vector<int> nodes(layout.count);
  for (int k = 0; k < layout.count; ++k) nodes[k] = mesh.boundary_nodes[k * stride];
  return nodes;
}

Eigen::MatrixXd fe_to_pixels(const FeFunction& u, const PixelGrid& grid) {
  const int n = grid.size();
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = u(grid.center(i, j));
  }
  return out;
}

Eigen::MatrixXd sample_pixels(const ScalarField& f, const PixelGrid& grid) {
  const int n = grid.size();
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = f(grid.center(i, j));
  }
  return out;
}

FeFunction pixels_to_fe(const Eigen::MatrixXd& pixels, const PixelGrid& grid, const MeshPtr& mesh) {
  const int ng = grid.size();
  if (pixels.rows() != ng || pixels.cols() != ng) {
    throw ValidationError("pixels_to_fe: matrix is " + std::to_string(pixels.rows()) + "x" +
                          std::to_string(pixels.cols()) + " but the grid is " +
                          std::to_string(ng) + "x" + std::to_string(ng));
  }
  const int nm = mesh->n;
  // Smallest pixel index whose closure contains mesh coordinate k: the pixel
  // coordinate is k * ng / nm exactly, so integer arithmetic decides ties.
  auto pixel_of = [&](int k) {
    const long num = static_cast<long>(k) * ng;
    const long ceil_div = (num + nm - 1) / nm;
    return std::clamp(static_cast<int>(ceil_div) - 1, 0, ng - 1);
  };
  Eigen::VectorXd v(mesh->node_count());
  for (int b = 0; b <= nm; ++b) {
    const int i = pixel_of(b);
    for (int a = 0; a <= nm; ++a) v[mesh->node_index(a, b)] = pixels(i, pixel_of(a));
  }
  return FeFunction(mesh, std::move(v));
}

Eigen::Matrix<double, 2, 3> hat_gradients(const TriMesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const Point p0 = mesh.nodes[tri[0]];
  const Point p1 = mesh.nodes[tri[1]];
  const Point p2 = mesh.nodes[tri[2]];
  const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  Eigen::Matrix<double, 2, 3> g;
  g(0, 0) = (p1.y - p2.y) / det;
  g(1, 0) = (p2.x - p1.x) / det;
  g(0, 1) = (p2.y - p0.y) / det;
  g(1, 1) = (p0.x - p2.x) / det;
  g(0, 2) = (p0.y - p1.y) / det;
  g(1, 2) = (p1.x - p0.x) / det;
  return g;
}

double triangle_area(const TriMesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const Point p0 = mesh.nodes[tri[0]];
  const Point p1 = mesh.nodes[tri[1]];
  const Point p2 = mesh.nodes[tri[2]];
  return 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
}

Eigen::Vector2d gradient(const TriMesh& mesh, const Eigen::VectorXd& u, int t) {
  const auto& tri = mesh.triangles[t];
  return hat_gradients(mesh, t) * Eigen::Vector3d(u[tri[0]], u[tri[1]], u[tri[2]]);
}

SparseMatrix stiffness_matrix(const TriMesh& mesh, const Eigen::VectorXd& sigma) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * mesh.triangles.size());
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    const double s = (sigma[tri[0]] + sigma[tri[1]] + sigma[tri[2]]) / 3.0;
    const auto g = hat_gradients(mesh, t);
    const Eigen::Matrix3d local = (s * triangle_area(mesh, t)) * (g.transpose() * g);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) trip.emplace_back(tri[r], tri[c], local(r, c));
    }
  }
  SparseMatrix k(mesh.node_count(), mesh.node_count());
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

SparseMatrix mass_matrix(const TriMesh& mesh) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * mesh.triangles.size());
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    const double w = triangle_area(mesh, t) / 12.0;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) trip.emplace_back(tri[r], tri[c], r == c ? 2.0 * w : w);
    }
  }
  SparseMatrix m(mesh.node_count(), mesh.node_count());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Eigen::VectorXd boundary_mass_vector(const TriMesh& mesh) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(mesh.node_count());
  for (const auto& e : mesh.boundary_edges) {
    const Point a = mesh.nodes[e[0]];
    const Point b = mesh.nodes[e[1]];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    c[e[0]] += 0.5 * len;
    c[e[1]] += 0.5 * len;
  }
  return c;
}

}  // namespace eit
