#pragma once

#include <optional>

#include <Eigen/Core>

namespace eit {

enum class ErrorSpace {
  conductivity,  // compares m + 1, the published definition
  contrast,      // compares m directly; debugging aid
};

/// ||sigma_true - sigma_rec||_F / ||sigma_true||_F with sigma = m + 1.
double relative_error(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& recon,
                      ErrorSpace space = ErrorSpace::conductivity);

/// Empty denominators leave the score unset instead of inventing 0 or 1.
struct SegmentationScores {
  std::optional<double> dice;
  std::optional<double> recall;
  std::optional<double> precision;
};

SegmentationScores segmentation_metrics(const Eigen::MatrixXd& truth_mask,
                                        const Eigen::MatrixXd& approx_mask);

struct MaskedErrors {
  double plus = 0.0;   // inside the approximate support
  double minus = 0.0;  // outside it
};

MaskedErrors masked_errors(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& recon,
                           const Eigen::MatrixXd& approx_mask);

struct EvalReport {
  double relative_error = 0.0;
  SegmentationScores segmentation;
  std::optional<MaskedErrors> masked;
};

}  // namespace eit
