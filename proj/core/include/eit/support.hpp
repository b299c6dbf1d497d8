#pragma once

#include <filesystem>
#include <string_view>

#include <Eigen/Core>

#include "eit/grid.hpp"

namespace eit {

struct CalderonImage;

enum class MaskProvenance { oracle, calderon_threshold, external_file };

std::string_view to_string(MaskProvenance p);
MaskProvenance mask_provenance_from_string(std::string_view s);

/// Binary support matrix on a pixel grid.
struct SupportMask {
  Eigen::MatrixXd values;  // entries exactly 0 or 1
  PixelGrid grid;
  MaskProvenance provenance;

  SupportMask(Eigen::MatrixXd v, PixelGrid g, MaskProvenance p);
  int cardinality() const;
  static SupportMask full(const PixelGrid& grid, MaskProvenance p = MaskProvenance::oracle);
};

/// Real-valued mask as produced by an external segmentation model.
struct SoftMask {
  Eigen::MatrixXd values;
  PixelGrid grid;

  SoftMask(Eigen::MatrixXd v, PixelGrid g);
};

/// M / max|M_ij|. Throws ZeroMatrixError for an all-zero matrix.
Eigen::MatrixXd normalize(const Eigen::MatrixXd& m);

enum class ThresholdMode {
  signed_values,    // select M_ij > gamma
  absolute_values,  // select |M_ij| > gamma, for signed contrasts
};

/// Entry 1 where M_ij > gamma (strict), else 0; gamma must lie in (0, 1).
SupportMask threshold(const Eigen::MatrixXd& m, double gamma,
                      MaskProvenance provenance = MaskProvenance::external_file,
                      ThresholdMode mode = ThresholdMode::signed_values);

inline constexpr double kSupportTolerance = 1e-14;

/// S_ij = 1 iff |m(x_ij)| > 1e-14.
SupportMask oracle_support(const ScalarField& m, const PixelGrid& grid);

/// threshold(normalize(C), gamma): the network-free mask.
SupportMask calderon_threshold_support(const CalderonImage& image, double gamma,
                                       ThresholdMode mode = ThresholdMode::signed_values);

/// Reads a mask CSV with its JSON descriptor; accepts kind "mask" or
/// "soft_mask" and does not clamp values.
SoftMask load_mask(const std::filesystem::path& csv);
void save_mask(const SoftMask& mask, const std::filesystem::path& csv);
void save_mask(const SupportMask& mask, const std::filesystem::path& csv);

}  // namespace eit
