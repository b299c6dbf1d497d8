#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "eit/errors.hpp"
#include "eit/surrogate.hpp"

using namespace eit;

namespace {

struct Instance {
  Eigen::MatrixXd a;
  Eigen::VectorXd x_true, x_star, support, y;
};

Instance random_instance(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> d;
  std::bernoulli_distribution coin(0.4);
  Instance in;
  in.a = Eigen::MatrixXd(rows, cols);
  for (Eigen::Index k = 0; k < in.a.size(); ++k) in.a(k) = d(rng);
  in.support = Eigen::VectorXd(cols);
  in.x_true = Eigen::VectorXd(cols);
  in.x_star = Eigen::VectorXd(cols);
  for (int k = 0; k < cols; ++k) {
    in.support(k) = coin(rng) ? 1.0 : 0.0;
    // the truth vanishes off the support, the prior guess as well
    in.x_true(k) = in.support(k) * d(rng);
    in.x_star(k) = in.support(k) * d(rng);
  }
  in.y = in.a * in.x_true;
  return in;
}

}  // namespace

TEST_CASE("weighted norms") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  Eigen::VectorXd x(9), s(9);
  for (int k = 0; k < 9; ++k) {
    x(k) = d(rng);
    s(k) = k % 3 == 0 ? 1.0 : 0.0;
  }
  const WeightedNorms w{s, 0.25};
  CHECK(std::abs(w.plus_sq(x) + w.minus_sq(x) - x.squaredNorm()) <= 1e-12 * x.squaredNorm());
  CHECK(std::abs(w.weighted_sq(x) - (0.25 * w.plus_sq(x) + w.minus_sq(x))) <= 1e-12);
  CHECK(w.plus(x) * w.plus(x) == doctest::Approx(w.plus_sq(x)));
  CHECK(WeightedNorms{Eigen::VectorXd::Ones(9), 0.25}.minus_sq(x) == 0.0);
}

TEST_CASE("surrogate minimizer") {
  std::mt19937_64 rng(2);
  const Instance in = random_instance(rng, 10, 8);

  SUBCASE("full support reduces to Tikhonov") {
    const Eigen::VectorXd x = solve_linear_surrogate(in.a, in.y, Eigen::VectorXd::Zero(8), Eigen::VectorXd::Ones(8), 0.3);
    const Eigen::MatrixXd normal = in.a.transpose() * in.a + 0.3 * Eigen::MatrixXd::Identity(8, 8);
    const Eigen::VectorXd oracle = normal.colPivHouseholderQr().solve(in.a.transpose() * in.y);
    CHECK((x - oracle).norm() <= 1e-12 * oracle.norm());
  }
  SUBCASE("gradient vanishes") {
    const double alpha = 0.07;
    const Eigen::VectorXd x = solve_linear_surrogate(in.a, in.y, in.x_star, in.support, alpha);
    const Eigen::VectorXd w = alpha * in.support.array() + (1.0 - in.support.array());
    const Eigen::VectorXd grad = in.a.transpose() * (in.a * x - in.y) + w.cwiseProduct(x - in.x_star);
    CHECK(grad.norm() <= 1e-10 * (in.a.transpose() * in.y).norm());
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(solve_linear_surrogate(in.a, in.y, in.x_star, in.support, 0.0), ValidationError);
    Eigen::VectorXd soft = in.support;
    soft(0) = 0.5;
    CHECK_THROWS_AS(solve_linear_surrogate(in.a, in.y, in.x_star, soft, 0.1), ValidationError);
    CHECK_THROWS_AS(solve_linear_surrogate(in.a, in.y.head(5), in.x_star, in.support, 0.1), ValidationError);
  }
}

TEST_CASE("off-support energy bound on random instances") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  int holds = 0;
  for (int t = 0; t < 20; ++t) {
    Instance in = random_instance(rng, 10, 8);
    const double delta = 1e-2;
    Eigen::VectorXd noise(10);
    for (int k = 0; k < 10; ++k) noise(k) = d(rng);
    const Eigen::VectorXd y_delta = in.y + delta * noise / noise.norm();
    const double alpha = std::pow(10.0, -1.0 - t % 4);
    const Eigen::VectorXd x = solve_linear_surrogate(in.a, y_delta, in.x_star, in.support, alpha);
    const WeightedNorms w{in.support, alpha};
    const double bound = delta * delta + alpha * w.plus_sq(in.x_true - in.x_star);
    if (w.minus_sq(x) <= bound) ++holds;
  }
  CHECK(holds == 20);
}
