#pragma once

// Plain-text interchange: row-major CSV matrices with a JSON descriptor
// beside them (x.csv + x.json). Row 0 of the file is pixel row i = 0, the
// bottom of the domain.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "eit/forward.hpp"
#include "eit/phantom.hpp"

namespace eit {

enum class MatrixKind { pixels, mask, soft_mask, cauchy };

std::string_view to_string(MatrixKind kind);
MatrixKind matrix_kind_from_string(std::string_view s);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Extra numeric descriptor fields, written after "shape" and "kind".
using DescriptorFields = std::vector<std::pair<std::string, double>>;

std::filesystem::path descriptor_path(const std::filesystem::path& csv);

void write_matrix(const std::filesystem::path& csv, const Eigen::MatrixXd& m, MatrixKind kind,
                  const DescriptorFields& extra = {});

struct MatrixFile {
  Eigen::MatrixXd values;
  MatrixKind kind = MatrixKind::pixels;
};

/// Parses the CSV and checks it against the descriptor's shape. Throws
/// ValidationError on malformed content and IoError on unreadable files.
MatrixFile read_matrix(const std::filesystem::path& csv);

/// Writes g.csv, f.csv (with descriptors) and cauchy.json into dir.
void save_cauchy(const CauchyData& data, const std::filesystem::path& dir);

/// Trigonometric pattern sets are regenerated and compared with g.csv.
CauchyData load_cauchy(const std::filesystem::path& dir);

void save_phantom(const CirclePhantom& phantom, const std::filesystem::path& json);
CirclePhantom load_phantom(const std::filesystem::path& json);

std::string_view to_string(Injection mode);
Injection injection_from_string(std::string_view s);

/// Binary greyscale PGM; pixel row N-1 (top of the domain) is written first.
/// Values are mapped linearly from [lo, hi] to [0, 255].
void write_pgm(const std::filesystem::path& path, const Eigen::MatrixXd& m, double lo, double hi);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace eit
