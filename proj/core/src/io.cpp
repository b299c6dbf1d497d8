#include "eit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eit/errors.hpp"

namespace eit {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::pixels: return "pixels";
    case MatrixKind::mask: return "mask";
    case MatrixKind::soft_mask: return "soft_mask";
    case MatrixKind::cauchy: return "cauchy";
  }
  return "pixels";
}

MatrixKind matrix_kind_from_string(std::string_view s) {
  if (s == "pixels") return MatrixKind::pixels;
  if (s == "mask") return MatrixKind::mask;
  if (s == "soft_mask") return MatrixKind::soft_mask;
  if (s == "cauchy") return MatrixKind::cauchy;
  throw ValidationError("unknown matrix kind '" + std::string(s) + "'");
}

std::string_view to_string(Injection mode) {
  return mode == Injection::continuum ? "continuum" : "point";
}

Injection injection_from_string(std::string_view s) {
  if (s == "continuum") return Injection::continuum;
  if (s == "point") return Injection::point;
  throw ValidationError("unknown injection mode '" + std::string(s) + "'");
}

std::string format_double(double v) {
  if (!std::isfinite(v)) throw ValidationError("refusing to serialize a non-finite value");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

double parse_cell(std::string_view cell, const fs::path& path, size_t row) {
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) cell.remove_suffix(1);
  double v = 0.0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    throw ValidationError(path.string() + ": non-numeric entry '" + std::string(cell) + "' on line " +
                          std::to_string(row + 1));
  }
  return v;
}

}  // namespace

fs::path descriptor_path(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".json");
  return p;
}

void write_matrix(const fs::path& csv, const Eigen::MatrixXd& m, MatrixKind kind, const DescriptorFields& extra) {
  std::string text;
  text.reserve(static_cast<size_t>(m.size()) * 24);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) text += ',';
      text += format_double(m(i, j));
    }
    text += '\n';
  }
  write_text(csv, text);

  json d = json::object();
  d["shape"] = {m.rows(), m.cols()};
  d["kind"] = to_string(kind);
  for (const auto& [key, value] : extra) d[key] = value;
  write_text(descriptor_path(csv), dump(d));
}

MatrixFile read_matrix(const fs::path& csv) {
  const json d = read_json(descriptor_path(csv));
  if (!d.contains("shape") || !d["shape"].is_array() || d["shape"].size() != 2 || !d.contains("kind")) {
    throw ValidationError(descriptor_path(csv).string() + ": descriptor needs \"shape\" and \"kind\"");
  }
  long rows = 0, cols = 0;
  MatrixFile out;
  try {
    rows = d["shape"][0].get<long>();
    cols = d["shape"][1].get<long>();
    out.kind = matrix_kind_from_string(d["kind"].get<std::string>());
  } catch (const json::exception& e) {
    throw ValidationError(descriptor_path(csv).string() + ": " + e.what());
  }
  if (rows <= 0 || cols <= 0) throw ValidationError(csv.string() + ": descriptor shape must be positive");

  out.values.resize(rows, cols);

  const std::string text = read_text(csv);
  std::string_view rest(text);
  long row = 0;
  while (!rest.empty()) {
    const size_t nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (row >= rows) throw ValidationError(csv.string() + ": more rows than the descriptor's " + std::to_string(rows));
    long col = 0;
    size_t start = 0;
    while (true) {
      const size_t comma = line.find(',', start);
      const std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
      if (col >= cols) {
        throw ValidationError(csv.string() + ": line " + std::to_string(row + 1) + " has more than " +
                              std::to_string(cols) + " columns");
      }
      out.values(row, col++) = parse_cell(cell, csv, static_cast<size_t>(row));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (col != cols) {
      throw ValidationError(csv.string() + ": line " + std::to_string(row + 1) + " has " + std::to_string(col) +
                            " columns, descriptor says " + std::to_string(cols));
    }
    ++row;
  }
  if (row != rows) {
    throw ValidationError(csv.string() + ": found " + std::to_string(row) + " rows, descriptor says " +
                          std::to_string(rows));
  }
  return out;
}

void save_cauchy(const CauchyData& data, const fs::path& dir) {
  fs::create_directories(dir);
  write_matrix(dir / "g.csv", data.patterns.g, MatrixKind::cauchy);
  write_matrix(dir / "f.csv", data.voltages, MatrixKind::cauchy);
  json d;
  d["P"] = data.patterns.electrodes;
  d["Q"] = data.patterns.count;
  d["delta"] = data.noise_level;
  d["seed"] = data.seed;
  d["mesh_N"] = data.mesh_n;
  d["injection"] = to_string(data.injection);
  d["patterns"] = data.patterns.continuum ? "trigonometric" : "custom";
  write_text(dir / "cauchy.json", dump(d));
}

CauchyData load_cauchy(const fs::path& dir) {
  const json d = read_json(dir / "cauchy.json");
  for (const char* key : {"P", "Q", "delta", "seed", "mesh_N"}) {
    if (!d.contains(key)) throw ValidationError((dir / "cauchy.json").string() + ": missing \"" + key + "\"");
  }
  int p = 0, q = 0;
  try {
    p = d["P"].get<int>();
    q = d["Q"].get<int>();
  } catch (const json::exception& e) {
    throw ValidationError((dir / "cauchy.json").string() + ": " + e.what());
  }
  MatrixFile g = read_matrix(dir / "g.csv");
  MatrixFile f = read_matrix(dir / "f.csv");
  if (g.values.rows() != p || g.values.cols() != q || f.values.rows() != p || f.values.cols() != q) {
    throw ValidationError(dir.string() + ": g/f shapes disagree with P=" + std::to_string(p) +
                          ", Q=" + std::to_string(q));
  }

  CauchyData data;
  const std::string kind = d.value("patterns", std::string("custom"));
  if (kind == "trigonometric") {
    data.patterns = trig_patterns(p, q);
    const double diff = (data.patterns.g - g.values).cwiseAbs().maxCoeff();
    if (diff > 1e-12) {
      throw ValidationError(dir.string() + ": g.csv does not match the trigonometric patterns (max deviation " +
                            format_double(diff) + ")");
    }
    data.patterns.g = g.values;
  } else {
    data.patterns = custom_patterns(g.values);
  }
  data.voltages = f.values;
  try {
    data.noise_level = d["delta"].get<double>();
    data.seed = d["seed"].get<std::uint64_t>();
    data.mesh_n = d["mesh_N"].get<int>();
    data.injection = injection_from_string(d.value("injection", std::string("continuum")));
  } catch (const json::exception& e) {
    throw ValidationError((dir / "cauchy.json").string() + ": " + e.what());
  }
  if (data.injection == Injection::continuum && !data.patterns.continuum) {
    throw ValidationError(dir.string() + ": continuum injection requires trigonometric patterns");
  }
  return data;
}

void save_phantom(const CirclePhantom& phantom, const fs::path& path) {
  json d;
  d["seed"] = phantom.seed;
  d["circles"] = json::array();
  for (const auto& c : phantom.circles) {
    d["circles"].push_back({{"x", c.x}, {"y", c.y}, {"r", c.r}, {"v", c.v}});
  }
  write_text(path, dump(d));
}

CirclePhantom load_phantom(const fs::path& path) {
  const json d = read_json(path);
  if (!d.contains("circles") || !d["circles"].is_array()) {
    throw ValidationError(path.string() + ": phantom needs a \"circles\" array");
  }
  CirclePhantom ph;
  ph.seed = d.value("seed", std::uint64_t{0});
  for (const auto& c : d["circles"]) {
    Circle circle;
    try {
      circle = {c.at("x").get<double>(), c.at("y").get<double>(), c.at("r").get<double>(), c.at("v").get<double>()};
    } catch (const json::exception& e) {
      throw ValidationError(path.string() + ": bad circle entry: " + e.what());
    }
    if (!(circle.r > 0.0)) throw ValidationError(path.string() + ": circle radius must be positive");
    ph.circles.push_back(circle);
  }
  return ph;
}

void write_pgm(const fs::path& path, const Eigen::MatrixXd& m, double lo, double hi) {
  std::string out = "P5\n" + std::to_string(m.cols()) + " " + std::to_string(m.rows()) + "\n255\n";
  const double span = hi > lo ? hi - lo : 1.0;
  for (Eigen::Index i = m.rows() - 1; i >= 0; --i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double t = std::clamp((m(i, j) - lo) / span, 0.0, 1.0);
      out += static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t)));
    }
  }
  write_text(path, out);
}

}  // namespace eit
