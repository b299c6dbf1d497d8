#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "eit/errors.hpp"
#include "eit/forward.hpp"
#include "eit/io.hpp"
#include "eit/phantom.hpp"

using namespace eit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "eit_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("doubles round-trip exactly") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  for (int k = 0; k < 1000; ++k) {
    const double v = d(rng) * std::pow(10.0, k % 30 - 15);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::strtod(format_double(std::numeric_limits<double>::denorm_min()).c_str(), nullptr) == std::numeric_limits<double>::denorm_min());
  CHECK_THROWS_AS(format_double(NAN), ValidationError);
  CHECK_THROWS_AS(format_double(INFINITY), ValidationError);
}

TEST_CASE("matrix files") {
  Eigen::MatrixXd m(3, 4);
  m << 1, -2.5, 1e-300, 3.0 / 7.0, 0, 1, 2, 3, -0.0, 5, 6, 7;
  const fs::path p = scratch("m.csv");
  write_matrix(p, m, MatrixKind::pixels, {{"R", 1.4}});
  const MatrixFile back = read_matrix(p);
  CHECK(back.kind == MatrixKind::pixels);
  CHECK((back.values.array() == m.array()).all());
  CHECK(read_text(descriptor_path(p)).find("\"R\": 1.4") != std::string::npos);
  CHECK(descriptor_path(p).filename() == "m.json");

  write_text(scratch("wide.csv"), "1,2,3,4,5\n1,2,3,4\n1,2,3,4\n");
  fs::copy_file(descriptor_path(p), descriptor_path(scratch("wide.csv")), fs::copy_options::overwrite_existing);
  CHECK_THROWS_AS(read_matrix(scratch("wide.csv")), ValidationError);
  write_text(scratch("long.csv"), "1,2,3,4\n1,2,3,4\n1,2,3,4\n1,2,3,4\n");
  fs::copy_file(descriptor_path(p), descriptor_path(scratch("long.csv")), fs::copy_options::overwrite_existing);
  CHECK_THROWS_AS(read_matrix(scratch("long.csv")), ValidationError);
  write_text(scratch("nan.csv"), "1,2,3,4\n1,nan,3,4\n1,2,3,4\n");
  fs::copy_file(descriptor_path(p), descriptor_path(scratch("nan.csv")), fs::copy_options::overwrite_existing);
  CHECK_THROWS_AS(read_matrix(scratch("nan.csv")), ValidationError);

  write_text(scratch("crlf.csv"), "1, 2\r\n3,4\r\n");
  write_text(descriptor_path(scratch("crlf.csv")), R"({"shape":[2,2],"kind":"mask"})");
  CHECK(read_matrix(scratch("crlf.csv")).values(0, 1) == 2.0);

  write_text(descriptor_path(scratch("crlf.csv")), R"({"shape":"2x2","kind":"mask"})");
  CHECK_THROWS_AS(read_matrix(scratch("crlf.csv")), ValidationError);
  write_text(descriptor_path(scratch("crlf.csv")), R"({"shape":[2,2],"kind":"image"})");
  CHECK_THROWS_AS(read_matrix(scratch("crlf.csv")), ValidationError);
  CHECK_THROWS_AS(read_matrix(scratch("absent.csv")), IoError);
}

TEST_CASE("Cauchy data round-trip") {
  const MeshPtr mesh = build_mesh(16);
  const ForwardSolver solver(mesh, electrode_positions(16),
                            interpolate([](Point p) { return standard_phantom()(p) + 1.0; }, mesh));
  const CauchyData data = simulate_cauchy(solver, trig_patterns(16, 16), 1e-3, 9);
  const fs::path dir = scratch("cauchy");
  save_cauchy(data, dir);
  const CauchyData back = load_cauchy(dir);
  CHECK((back.voltages.array() == data.voltages.array()).all());
  CHECK((back.patterns.g.array() == data.patterns.g.array()).all());
  CHECK(back.patterns.continuum);
  CHECK(back.noise_level == 1e-3);
  CHECK(back.seed == 9);
  CHECK(back.mesh_n == 16);
  CHECK(back.injection == Injection::continuum);

  // a perturbed g no longer passes as trigonometric
  Eigen::MatrixXd g = data.patterns.g;
  g(3, 2) += 1e-6;
  write_matrix(dir / "g.csv", g, MatrixKind::cauchy);
  CHECK_THROWS_AS(load_cauchy(dir), ValidationError);

  CauchyData custom = data;
  custom.patterns = custom_patterns(g);
  custom.injection = Injection::point;
  save_cauchy(custom, dir);
  const CauchyData c = load_cauchy(dir);
  CHECK_FALSE(c.patterns.continuum);
  CHECK(c.injection == Injection::point);
}

TEST_CASE("phantom files") {
  const CirclePhantom ph = sample_phantom(12);
  const fs::path p = scratch("phantom.json");
  save_phantom(ph, p);
  const CirclePhantom back = load_phantom(p);
  REQUIRE(back.circles.size() == ph.circles.size());
  for (size_t k = 0; k < ph.circles.size(); ++k) {
    CHECK(back.circles[k].x == ph.circles[k].x);
    CHECK(back.circles[k].y == ph.circles[k].y);
    CHECK(back.circles[k].r == ph.circles[k].r);
    CHECK(back.circles[k].v == ph.circles[k].v);
  }
  CHECK(back.seed == 12);
  write_text(scratch("bad.json"), R"({"circles":[{"x":0,"y":0,"v":1}]})");
  CHECK_THROWS_AS(load_phantom(scratch("bad.json")), ValidationError);
  write_text(scratch("bad.json"), "{not json");
  CHECK_THROWS_AS(load_phantom(scratch("bad.json")), ValidationError);
}

TEST_CASE("greyscale images") {
  Eigen::MatrixXd m(2, 3);
  m << 0, 0.5, 1, 2, -1, 1;
  const fs::path p = scratch("img.pgm");
  write_pgm(p, m, 0.0, 1.0);
  const std::string s = read_text(p);
  const std::string header = "P5\n3 2\n255\n";
  REQUIRE(s.size() == header.size() + 6);
  CHECK(s.substr(0, header.size()) == header);
  // top row of the domain first
  CHECK(static_cast<unsigned char>(s[header.size() + 0]) == 255);
  CHECK(static_cast<unsigned char>(s[header.size() + 1]) == 0);
  CHECK(static_cast<unsigned char>(s[header.size() + 4]) == 128);
}

TEST_CASE("enum names") {
  CHECK(injection_from_string(to_string(Injection::point)) == Injection::point);
  CHECK(matrix_kind_from_string(to_string(MatrixKind::soft_mask)) == MatrixKind::soft_mask);
  CHECK_THROWS_AS(injection_from_string("electrode"), ValidationError);
}
