#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <utility>

#include "eit/errors.hpp"
#include "eit/grid.hpp"
#include "eit/phantom.hpp"

using namespace eit;

TEST_CASE("pixel grid lattice") {
  const PixelGrid g2(2);
  CHECK(g2.spacing() == 1.0);
  CHECK(g2.center(0, 0).x == -0.5);
  CHECK(g2.center(0, 0).y == -0.5);
  CHECK(g2.center(0, 1).x == 0.5);
  CHECK(g2.center(0, 1).y == -0.5);
  CHECK(g2.center(1, 0).x == -0.5);
  CHECK(g2.center(1, 0).y == 0.5);
  CHECK(build_grid(80).spacing() == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(build_grid(320).spacing() == doctest::Approx(1.0 / 160).epsilon(1e-15));
  CHECK(std::abs(build_grid(80).spacing() * 80 - 2.0) < 1e-14);
  CHECK_THROWS_AS(build_grid(1), ValidationError);
  CHECK_THROWS_AS(build_grid(0), ValidationError);

  const PixelGrid g(7);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) {
      const Point c = g.center(i, j);
      CHECK(std::abs(c.x) < 1.0);
      CHECK(std::abs(c.y) < 1.0);
    }
  }
}

TEST_CASE("mesh counts and rejection") {
  const MeshPtr m2 = build_mesh(2);
  CHECK(m2->node_count() == 9);
  CHECK(m2->triangles.size() == 8);
  CHECK(m2->boundary_nodes.size() == 8);
  const MeshPtr m80 = build_mesh(80);
  CHECK(m80->node_count() == 6561);
  CHECK(m80->triangles.size() == 12800);
  CHECK(m80->boundary_nodes.size() == 320);
  CHECK_THROWS_AS(build_mesh(1), ValidationError);
}

TEST_CASE("mesh orientation and conformity") {
  const MeshPtr mesh = build_mesh(9);
  std::map<std::pair<int, int>, int> edge_use;
  double area = 0.0;
  for (const auto& t : mesh->triangles) {
    const Point a = mesh->nodes[t[0]], b = mesh->nodes[t[1]], c = mesh->nodes[t[2]];
    const double signed_area = 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
    CHECK(signed_area > 0.0);
    area += signed_area;
    for (int e = 0; e < 3; ++e) {
      const int u = t[e], v = t[(e + 1) % 3];
      ++edge_use[{std::min(u, v), std::max(u, v)}];
    }
  }
  CHECK(area == doctest::Approx(4.0).epsilon(1e-13));
  int boundary_edges = 0;
  for (const auto& [edge, count] : edge_use) {
    CHECK((count == 1 || count == 2));
    if (count == 1) ++boundary_edges;
  }
  CHECK(boundary_edges == 4 * 9);
  CHECK(mesh->boundary_edges.size() == 36);

  // boundary walk: starts at (1,-1), counterclockwise, all nodes on the boundary
  const Point first = mesh->nodes[mesh->boundary_nodes[0]];
  CHECK(first.x == 1.0);
  CHECK(first.y == -1.0);
  double shoelace = 0.0;
  const auto& bn = mesh->boundary_nodes;
  for (size_t k = 0; k < bn.size(); ++k) {
    const Point p = mesh->nodes[bn[k]], q = mesh->nodes[bn[(k + 1) % bn.size()]];
    CHECK((std::abs(p.x) == 1.0 || std::abs(p.y) == 1.0));
    shoelace += p.x * q.y - q.x * p.y;
  }
  CHECK(0.5 * shoelace == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("mesh refinement nests node sets") {
  const MeshPtr coarse = build_mesh(10), fine = build_mesh(20);
  for (int b = 0; b <= 10; ++b) {
    for (int a = 0; a <= 10; ++a) {
      const Point pc = coarse->nodes[coarse->node_index(a, b)];
      const Point pf = fine->nodes[fine->node_index(2 * a, 2 * b)];
      CHECK(pc.x == pf.x);
      CHECK(pc.y == pf.y);
    }
  }
}

TEST_CASE("interpolation reproduces affine fields everywhere") {
  const MeshPtr mesh = build_mesh(13);
  const auto affine = [](Point p) { return 0.3 - 1.7 * p.x + 2.2 * p.y; };
  const FeFunction u = interpolate(affine, mesh);
  CHECK((interpolate([](Point) { return 1.0; }, mesh).values.array() == 1.0).all());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int t = 0; t < 2000; ++t) {
    const Point p{d(rng), d(rng)};
    CHECK(std::abs(u(p) - affine(p)) <= 1e-12);
  }
  // corners and edges of the closed domain
  for (const Point p : {Point{1, 1}, Point{-1, -1}, Point{1, -1}, Point{-1, 1}, Point{1, 0.3}, Point{0.2, 1}}) {
    CHECK(std::abs(u(p) - affine(p)) <= 1e-12);
  }
}

TEST_CASE("interpolating a phantom gives nodal values in {0, v_k}") {
  CirclePhantom ph;
  ph.circles = {{-0.4, 0.1, 0.2, 1.5}, {0.45, -0.3, 0.18, 0.7}};
  const MeshPtr mesh = build_mesh(40);
  const FeFunction u = interpolate(ph, mesh);
  std::set<double> seen(u.values.data(), u.values.data() + u.values.size());
  CHECK(seen == std::set<double>{0.0, 0.7, 1.5});
}

TEST_CASE("fe_to_pixels of an interpolated affine field matches direct evaluation") {
  const auto affine = [](Point p) { return -0.25 + 0.8 * p.x - 0.6 * p.y; };
  for (const auto& [gn, mn] : {std::pair{80, 80}, std::pair{50, 20}, std::pair{16, 48}}) {
    const MeshPtr mesh = build_mesh(mn);
    const PixelGrid grid(gn);
    const Eigen::MatrixXd pix = fe_to_pixels(interpolate(affine, mesh), grid);
    for (int i = 0; i < gn; ++i) {
      for (int j = 0; j < gn; ++j) CHECK(std::abs(pix(i, j) - affine(grid.center(i, j))) <= 1e-12);
    }
  }
  const MeshPtr mesh = build_mesh(11);
  const Eigen::MatrixXd c = fe_to_pixels(interpolate([](Point) { return 3.5; }, mesh), PixelGrid(9));
  CHECK((c.array() == 3.5).all());
}

TEST_CASE("pixel centers on a matching mesh interpolate along the diagonal") {
  // The center lies on the diagonal edge BL-TR, so the value is their mean.
  const MeshPtr mesh = build_mesh(6);
  Eigen::VectorXd v(mesh->node_count());
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int n = 0; n < v.size(); ++n) v[n] = d(rng);
  const FeFunction u(mesh, v);
  const Eigen::MatrixXd pix = fe_to_pixels(u, PixelGrid(6));
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double expected = 0.5 * (v[mesh->node_index(j, i)] + v[mesh->node_index(j + 1, i + 1)]);
      CHECK(pix(i, j) == doctest::Approx(expected).epsilon(1e-14));
    }
  }
}

namespace {

// Brute-force oracle: among pixels whose closed square contains the point,
// take the lexicographically smallest (i, j).
double owning_pixel_value(const Eigen::MatrixXd& m, const PixelGrid& g, Point p) {
  const int n = g.size();
  const double h = g.spacing();
  const double tol = 1e-12;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x0 = -1.0 + j * h, y0 = -1.0 + i * h;
      if (p.x >= x0 - tol && p.x <= x0 + h + tol && p.y >= y0 - tol && p.y <= y0 + h + tol) return m(i, j);
    }
  }
  return NAN;
}

}  // namespace

TEST_CASE("pixels_to_fe sampling and tie-breaking") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (const auto& [gn, mn] : {std::pair{8, 8}, std::pair{8, 4}, std::pair{6, 18}, std::pair{5, 7}}) {
    const PixelGrid grid(gn);
    const MeshPtr mesh = build_mesh(mn);
    Eigen::MatrixXd m(gn, gn);
    for (int k = 0; k < m.size(); ++k) m(k) = d(rng);
    const FeFunction f = pixels_to_fe(m, grid, mesh);
    for (int n = 0; n < mesh->node_count(); ++n) {
      CHECK(f.values[n] == owning_pixel_value(m, grid, mesh->nodes[n]));
    }
  }

  const PixelGrid grid(80);
  const MeshPtr mesh = build_mesh(80);
  CHECK((pixels_to_fe(Eigen::MatrixXd::Ones(80, 80), grid, mesh).values.array() == 1.0).all());

  Eigen::MatrixXd single = Eigen::MatrixXd::Zero(80, 80);
  single(30, 41) = 1.0;
  const FeFunction f = pixels_to_fe(single, grid, mesh);
  for (int n = 0; n < mesh->node_count(); ++n) {
    if (f.values[n] == 0.0) continue;
    const Point p = mesh->nodes[n];
    CHECK(p.x >= -1.0 + 41 * 0.025 - 1e-12);
    CHECK(p.x <= -1.0 + 42 * 0.025 + 1e-12);
    CHECK(p.y >= -1.0 + 30 * 0.025 - 1e-12);
    CHECK(p.y <= -1.0 + 31 * 0.025 + 1e-12);
  }

  Eigen::MatrixXd mask = Eigen::MatrixXd::Zero(80, 80);
  mask.block(20, 30, 15, 9).setOnes();
  const FeFunction fm = pixels_to_fe(mask, grid, mesh);
  CHECK((fm.values.array() == 0.0 || fm.values.array() == 1.0).all());

  CHECK_THROWS_AS(pixels_to_fe(Eigen::MatrixXd::Ones(79, 80), grid, mesh), ValidationError);
}

TEST_CASE("electrode layout") {
  const ElectrodeLayout l4 = electrode_positions(4);
  REQUIRE(l4.count == 4);
  for (int p = 0; p < 4; ++p) CHECK(l4.arc_lengths[p] == doctest::Approx(8.0 * p / 4));
  CHECK(l4.positions[0].x == 1.0);
  CHECK(l4.positions[0].y == -1.0);
  CHECK(l4.positions[1].x == doctest::Approx(1.0));
  CHECK(l4.positions[1].y == doctest::Approx(1.0));
  CHECK(l4.positions[2].x == doctest::Approx(-1.0));
  CHECK(l4.positions[2].y == doctest::Approx(1.0));
  CHECK_THROWS_AS(electrode_positions(7), ValidationError);
  CHECK_THROWS_AS(electrode_positions(2), ValidationError);

  const ElectrodeLayout l32 = electrode_positions(32);
  for (int p = 0; p < 32; ++p) {
    CHECK(l32.angles[p] == doctest::Approx(2.0 * M_PI * p / 32));
    const Point next = boundary_point(l32.arc_lengths[p] + 8.0 / 32);
    const Point actual = l32.positions[(p + 1) % 32];
    CHECK(std::abs(next.x - actual.x) < 1e-14);
    CHECK(std::abs(next.y - actual.y) < 1e-14);
  }
  const MeshPtr mesh = build_mesh(80);
  const std::vector<int> nodes = electrode_nodes(l32, *mesh);
  for (int p = 0; p < 32; ++p) {
    CHECK(std::abs(mesh->nodes[nodes[p]].x - l32.positions[p].x) < 1e-14);
    CHECK(std::abs(mesh->nodes[nodes[p]].y - l32.positions[p].y) < 1e-14);
  }
  CHECK_NOTHROW(electrode_nodes(electrode_positions(10), *mesh));
  CHECK_THROWS_AS(electrode_nodes(electrode_positions(10), *build_mesh(7)), ValidationError);
}

TEST_CASE("assembled matrices") {
  const MeshPtr mesh = build_mesh(12);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh->node_count());
  Eigen::VectorXd x(mesh->node_count()), y(mesh->node_count());
  for (int n = 0; n < mesh->node_count(); ++n) {
    x[n] = mesh->nodes[n].x;
    y[n] = mesh->nodes[n].y;
  }
  const SparseMatrix m = mass_matrix(*mesh);
  CHECK(ones.dot(m * ones) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(x.dot(m * x) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));  // integral of x^2
  const SparseMatrix k = stiffness_matrix(*mesh, ones);
  CHECK((k * ones).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(x.dot(k * x) == doctest::Approx(4.0).epsilon(1e-13));  // integral of |grad x|^2
  CHECK(x.dot(k * y) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  CHECK((SparseMatrix(k.transpose()) - k).norm() < 1e-14);
  CHECK(boundary_mass_vector(*mesh).sum() == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("sampling a field at pixel centers") {
  const PixelGrid grid(8);
  const Eigen::MatrixXd m = sample_pixels([](Point p) { return p.x + 10.0 * p.y; }, grid);
  CHECK(m(0, 0) == doctest::Approx(-0.875 - 8.75));
  CHECK(m(7, 0) == doctest::Approx(-0.875 + 8.75));
  CHECK(m(0, 7) == doctest::Approx(0.875 - 8.75));
}
