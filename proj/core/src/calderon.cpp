#include "eit/calderon.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/SVD>

#include "eit/errors.hpp"

namespace eit {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(2 pi t) / (pi t), limit 2 at t = 0
double sinc_factor(double t) {
  if (std::abs(t) < 1e-8) {
    const double x = 2.0 * kPi * t;
    return 2.0 * (1.0 - x * x / 6.0);
  }
  return std::sin(2.0 * kPi * t) / (kPi * t);
}

// Simpson weights 1,4,2,...,4,1 (times h/3) for an even panel count.
Eigen::VectorXd simpson_weights(int panels, double h) {
  if (panels < 2 || panels % 2) throw ValidationError("Simpson rule needs an even panel count >= 2");
  Eigen::VectorXd w(panels + 1);
  for (int a = 0; a <= panels; ++a) w(a) = (a == 0 || a == panels) ? 1.0 : (a % 2 ? 4.0 : 2.0);
  return w * (h / 3.0);
}

}  // namespace

double Frequency::norm() const { return std::hypot(k1, k2); }

CgoTraces cgo_traces(const Frequency& k, const std::vector<Point>& points) {
  const Frequency kp = k.perp();
  CgoTraces out{Eigen::VectorXcd(points.size()), Eigen::VectorXcd(points.size())};
  for (size_t p = 0; p < points.size(); ++p) {
    const double dot = k.k1 * points[p].x + k.k2 * points[p].y;
    const double dot_perp = kp.k1 * points[p].x + kp.k2 * points[p].y;
    const Complex osc = std::polar(1.0, kPi * dot);
    out.phi1(p) = osc * std::exp(kPi * dot_perp);
    out.phi2(p) = osc * std::exp(-kPi * dot_perp);
  }
  return out;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double rel_cutoff) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cut = s.size() ? rel_cutoff * s(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut && s(i) > 0.0) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Complex domain_fourier_integral(const Frequency& k) {
  return {sinc_factor(k.k1) * sinc_factor(k.k2), 0.0};
}

Complex domain_fourier_integral_simpson(const Frequency& k, int panels) {
  const double h = 2.0 / panels;
  const Eigen::VectorXd w = simpson_weights(panels, h);
  // separable: both one-dimensional factors are Simpson sums
  Complex sx = 0.0, sy = 0.0;
  for (int a = 0; a <= panels; ++a) {
    const double t = -1.0 + a * h;
    sx += w(a) * std::polar(1.0, 2.0 * kPi * k.k1 * t);
    sy += w(a) * std::polar(1.0, 2.0 * kPi * k.k2 * t);
  }
  return sx * sy;
}

ScatteringOperator::ScatteringOperator(const CauchyData& data) : p_(data.patterns.electrodes) {
  const Eigen::MatrixXd& g = data.patterns.g;
  const Eigen::MatrixXd& f = data.voltages;
  if (g.rows() != p_ || f.rows() != p_ || g.cols() != f.cols()) {
    throw ValidationError("calderon: g and f must both be P x Q");
  }
  if (g.cwiseAbs().maxCoeff() == 0.0) throw ZeroMatrixError("calderon: current matrix g is zero");
  if (f.cwiseAbs().maxCoeff() == 0.0) throw ZeroMatrixError("calderon: voltage matrix f is zero");
  electrodes_ = electrode_positions(p_).positions;
  g_pinv_ = pseudo_inverse(g);
  f_pinv_ = pseudo_inverse(f);
  gram_ = g.transpose() * g;
}

CgoCoefficients ScatteringOperator::coefficients(const Frequency& k) const {
  const CgoTraces t = cgo_traces(k, electrodes_);
  return {g_pinv_.cast<Complex>() * t.phi1, f_pinv_.cast<Complex>() * t.phi2};
}

Complex ScatteringOperator::evaluate(const Frequency& k, double k_min) const {
  const double kn = k.norm();
  if (!(kn > 0.0) || kn <= k_min) {
    throw ValidationError("scattering_approx: |k| = " + std::to_string(kn) + " inside the exclusion radius");
  }
  const CgoCoefficients c = coefficients(k);
  // bilinear, no conjugation
  const Complex agb = (c.a.transpose() * gram_.cast<Complex>() * c.b)(0, 0);
  const double scale = kBoundaryLength / (2.0 * kPi * kPi * kn * kn * p_);
  return -scale * agb - domain_fourier_integral(k);
}

CgoCoefficients cgo_coefficients(const CauchyData& data, const Frequency& k) {
  return ScatteringOperator(data).coefficients(k);
}

Complex scattering_approx(const CauchyData& data, const Frequency& k, double k_min) {
  return ScatteringOperator(data).evaluate(k, k_min);
}

CalderonImage calderon_image(const CauchyData& data, double r, const PixelGrid& grid,
                             const CalderonQuadrature& quad) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("calderon_image: R must be positive");
  if (quad.nodes < 3 || quad.nodes % 2 == 0) {
    throw ValidationError("calderon_image: quadrature needs an odd node count >= 3");
  }
  if (!(quad.exclusion_rings >= 0.0)) throw ValidationError("calderon_image: exclusion_rings must be >= 0");
  const ScatteringOperator op(data);

  const int panels = quad.nodes - 1;
  const int mid = panels / 2;
  const double hk = quad.spacing(r);
  const double k_min = quad.k_min(r);
  const Eigen::VectorXd w = simpson_weights(panels, hk);

  struct Node {
    double k1, k2;
    Complex weighted;  // w * H^A(k)
  };
  std::vector<Node> nodes;
  const double slack = 1e-12 * r;
  for (int a = 0; a <= panels; ++a) {
    for (int b = 0; b <= panels; ++b) {
      const Frequency k{(b - mid) * hk, (a - mid) * hk};
      const double kn = k.norm();
      if (kn >= r - slack || kn <= k_min + slack) continue;
      nodes.push_back({k.k1, k.k2, w(a) * w(b) * op.evaluate(k)});
    }
  }

  const int n = grid.size();
  std::vector<double> coord(n);
  for (int j = 0; j < n; ++j) coord[j] = grid.center(0, j).x;  // same lattice in x and y

  CalderonImage img;
  img.R = r;
  img.quad = quad;
  img.k_min = k_min;
  img.values.resize(n, n);
  Eigen::MatrixXcd ex(nodes.size(), n), ey(nodes.size(), n);
  for (size_t t = 0; t < nodes.size(); ++t) {
    for (int j = 0; j < n; ++j) {
      ex(t, j) = std::polar(1.0, -2.0 * kPi * nodes[t].k1 * coord[j]);
      ey(t, j) = std::polar(1.0, -2.0 * kPi * nodes[t].k2 * coord[j]);
    }
  }
  double max_imag = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (size_t t = 0; t < nodes.size(); ++t) s += nodes[t].weighted * ex(t, j) * ey(t, i);
      img.values(i, j) = s.real();
      max_imag = std::max(max_imag, std::abs(s.imag()));
    }
  }
  img.max_imag = max_imag;
  if (!img.values.allFinite()) throw NumericalError("calderon_image: non-finite values");
  return img;
}

}  // namespace eit
