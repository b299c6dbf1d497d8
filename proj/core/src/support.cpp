#include "eit/support.hpp"

#include <cmath>
#include <string>

#include "eit/calderon.hpp"
#include "eit/errors.hpp"
#include "eit/io.hpp"

namespace eit {

std::string_view to_string(MaskProvenance p) {
  switch (p) {
    case MaskProvenance::oracle: return "oracle";
    case MaskProvenance::calderon_threshold: return "calderon_threshold";
    case MaskProvenance::external_file: return "external_file";
  }
  return "oracle";
}

MaskProvenance mask_provenance_from_string(std::string_view s) {
  if (s == "oracle") return MaskProvenance::oracle;
  if (s == "calderon_threshold") return MaskProvenance::calderon_threshold;
  if (s == "external_file") return MaskProvenance::external_file;
  throw ValidationError("unknown mask provenance '" + std::string(s) + "'");
}

namespace {

void require_grid_shape(const Eigen::MatrixXd& v, const PixelGrid& g, const char* what) {
  if (v.rows() != g.size() || v.cols() != g.size()) {
    throw ValidationError(std::string(what) + ": matrix is " + std::to_string(v.rows()) + "x" +
                          std::to_string(v.cols()) + " but the grid has N=" + std::to_string(g.size()));
  }
}

}  // namespace

SupportMask::SupportMask(Eigen::MatrixXd v, PixelGrid g, MaskProvenance p)
    : values(std::move(v)), grid(g), provenance(p) {
  require_grid_shape(values, grid, "SupportMask");
  if (!(values.array() == 0.0 || values.array() == 1.0).all()) {
    throw ValidationError("SupportMask: entries must be exactly 0 or 1");
  }
}

int SupportMask::cardinality() const { return static_cast<int>(values.sum()); }

SupportMask SupportMask::full(const PixelGrid& grid, MaskProvenance p) {
  return SupportMask(Eigen::MatrixXd::Ones(grid.size(), grid.size()), grid, p);
}

SoftMask::SoftMask(Eigen::MatrixXd v, PixelGrid g) : values(std::move(v)), grid(g) {
  require_grid_shape(values, grid, "SoftMask");
  if (!values.allFinite()) throw ValidationError("SoftMask: entries must be finite");
}

Eigen::MatrixXd normalize(const Eigen::MatrixXd& m) {
  const double mx = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  if (!(mx > 0.0)) throw ZeroMatrixError("normalize: matrix has no nonzero entry");
  if (!std::isfinite(mx)) throw ValidationError("normalize: matrix has non-finite entries");
  Eigen::MatrixXd out = m / mx;
  // the divided max entry can round away from exactly +-1
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    if (std::abs(m(k)) == mx) out(k) = m(k) > 0 ? 1.0 : -1.0;
  }
  return out;
}

SupportMask threshold(const Eigen::MatrixXd& m, double gamma, MaskProvenance provenance, ThresholdMode mode) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("threshold: gamma must lie in (0, 1)");
  if (m.rows() != m.cols() || m.rows() < 2) throw ValidationError("threshold: expected a square matrix, N >= 2");
  Eigen::MatrixXd s(m.rows(), m.cols());
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    const double v = mode == ThresholdMode::absolute_values ? std::abs(m(k)) : m(k);
    s(k) = v > gamma ? 1.0 : 0.0;
  }
  return SupportMask(std::move(s), PixelGrid(static_cast<int>(m.rows())), provenance);
}

SupportMask oracle_support(const ScalarField& m, const PixelGrid& grid) {
  const int n = grid.size();
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s(i, j) = std::abs(m(grid.center(i, j))) > kSupportTolerance ? 1.0 : 0.0;
  }
  return SupportMask(std::move(s), grid, MaskProvenance::oracle);
}

SupportMask calderon_threshold_support(const CalderonImage& image, double gamma, ThresholdMode mode) {
  return threshold(normalize(image.values), gamma, MaskProvenance::calderon_threshold, mode);
}

SoftMask load_mask(const std::filesystem::path& csv) {
  MatrixFile f = read_matrix(csv);
  if (f.kind != MatrixKind::mask && f.kind != MatrixKind::soft_mask) {
    throw ValidationError(csv.string() + ": expected kind \"mask\" or \"soft_mask\", found \"" +
                          std::string(to_string(f.kind)) + "\"");
  }
  if (f.values.rows() != f.values.cols()) throw ValidationError(csv.string() + ": mask must be square");
  const int n = static_cast<int>(f.values.rows());
  return SoftMask(std::move(f.values), PixelGrid(n));
}

void save_mask(const SoftMask& mask, const std::filesystem::path& csv) {
  write_matrix(csv, mask.values, MatrixKind::soft_mask);
}

void save_mask(const SupportMask& mask, const std::filesystem::path& csv) {
  write_matrix(csv, mask.values, MatrixKind::mask);
}

}  // namespace eit
