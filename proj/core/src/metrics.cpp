#include "eit/metrics.hpp"

#include <string>

#include "eit/errors.hpp"

namespace eit {

namespace {

void require_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()));
  }
}

}  // namespace

double relative_error(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& recon, ErrorSpace space) {
  require_same_shape(truth, recon, "relative_error");
  const double shift = space == ErrorSpace::conductivity ? 1.0 : 0.0;
  const double denom = (truth.array() + shift).matrix().norm();
  if (denom == 0.0) throw ValidationError("relative_error: reference has zero norm");
  return (truth - recon).norm() / denom;
}

SegmentationScores segmentation_metrics(const Eigen::MatrixXd& truth_mask, const Eigen::MatrixXd& approx_mask) {
  require_same_shape(truth_mask, approx_mask, "segmentation_metrics");
  const double overlap = truth_mask.cwiseProduct(approx_mask).sum();
  const double s = truth_mask.sum();
  const double st = approx_mask.sum();
  SegmentationScores out;
  if (s + st > 0.0) out.dice = 2.0 * overlap / (s + st);
  if (s > 0.0) out.recall = overlap / s;
  if (st > 0.0) out.precision = overlap / st;
  return out;
}

MaskedErrors masked_errors(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& recon,
                           const Eigen::MatrixXd& approx_mask) {
  require_same_shape(truth, recon, "masked_errors");
  require_same_shape(truth, approx_mask, "masked_errors");
  const Eigen::MatrixXd diff = truth - recon;
  MaskedErrors out;
  out.plus = approx_mask.cwiseProduct(diff).norm();
  out.minus = (1.0 - approx_mask.array()).matrix().cwiseProduct(diff).norm();
  return out;
}

}  // namespace eit
