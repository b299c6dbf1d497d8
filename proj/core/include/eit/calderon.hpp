#pragma once

// Calderon's direct linearized reconstruction from electrode data.

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "eit/forward.hpp"
#include "eit/grid.hpp"

namespace eit {

using Complex = std::complex<double>;

struct Frequency {
  double k1 = 0.0;
  double k2 = 0.0;

  Frequency perp() const { return {-k2, k1}; }
  double norm() const;
};

struct CgoTraces {
  Eigen::VectorXcd phi1;  // exp(pi i k.x + pi kperp.x)
  Eigen::VectorXcd phi2;  // exp(pi i k.x - pi kperp.x)
};

CgoTraces cgo_traces(const Frequency& k, const std::vector<Point>& points);

/// SVD pseudoinverse; singular values below rel_cutoff * sigma_max count as 0.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double rel_cutoff = 1e-10);

struct CgoCoefficients {
  Eigen::VectorXcd a;  // g^+ phi1
  Eigen::VectorXcd b;  // f^+ phi2
};

/// integral over [-1,1]^2 of exp(2 pi i k.xi), closed form.
Complex domain_fourier_integral(const Frequency& k);

/// Same integral by tensor Simpson with the given (even) panel count per axis.
Complex domain_fourier_integral_simpson(const Frequency& k, int panels = 64);

/// Everything about the data that does not depend on k: pseudoinverses,
/// Gram matrix and electrode coordinates.
class ScatteringOperator {
 public:
  /// Throws ZeroMatrixError when g or f is identically zero.
  explicit ScatteringOperator(const CauchyData& data);

  CgoCoefficients coefficients(const Frequency& k) const;

  /// H^A(k) = -(8 / (2 pi^2 |k|^2 P)) a^T G b - integral exp(2 pi i k.xi).
  /// Rejects |k| <= k_min and k = 0.
  Complex evaluate(const Frequency& k, double k_min = 0.0) const;

  const Eigen::MatrixXd& gram() const { return gram_; }
  const std::vector<Point>& electrodes() const { return electrodes_; }

 private:
  int p_ = 0;
  std::vector<Point> electrodes_;
  Eigen::MatrixXd g_pinv_;
  Eigen::MatrixXd f_pinv_;
  Eigen::MatrixXd gram_;
};

CgoCoefficients cgo_coefficients(const CauchyData& data, const Frequency& k);
Complex scattering_approx(const CauchyData& data, const Frequency& k, double k_min = 0.0);

/// Tensor Simpson grid on [-R, R]^2. The integrand is dropped for |k| >= R
/// and for |k| <= k_min = exclusion_rings * (grid spacing).
struct CalderonQuadrature {
  int nodes = 29;
  double exclusion_rings = 1.0;

  double spacing(double r) const { return 2.0 * r / (nodes - 1); }
  double k_min(double r) const { return exclusion_rings * spacing(r); }
};

struct CalderonImage {
  Eigen::MatrixXd values;  // N x N, pixel orientation as PixelGrid
  double R = 1.4;
  CalderonQuadrature quad;
  double k_min = 0.0;
  /// Largest |imaginary part| of the k-sum over the pixels, kept as a
  /// diagnostic of how far the data are from reciprocal.
  double max_imag = 0.0;
};

CalderonImage calderon_image(const CauchyData& data, double r, const PixelGrid& grid,
                             const CalderonQuadrature& quad = {});

}  // namespace eit
