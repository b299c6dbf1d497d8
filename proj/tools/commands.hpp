#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace eit::cli {

namespace fs = std::filesystem;

struct PhantomOptions {
  std::uint64_t seed = 0;
  int count = 1;
  std::optional<double> case_target;
  int grid_n = 80;
  fs::path out;
};

struct SimulateOptions {
  fs::path phantom;
  int mesh_n = 320;
  int electrodes = 32;
  int patterns = 32;
  double delta = 1e-4;
  std::uint64_t seed = 0;
  std::string injection = "continuum";
  fs::path out;
};

struct CalderonOptions {
  fs::path data;
  double R = 1.4;
  int grid_n = 80;
  int quad_nodes = 29;
  fs::path out;
};

struct ReconstructOptions {
  fs::path data;
  std::string method = "levr";
  std::string mask;  // oracle:PATH | calderon[:GAMMA] | file:PATH
  double alpha = 1e-3;
  int iterations = 20;
  int mesh_n = 80;
  double gamma = 0.1;
  double R = 1.4;
  std::string truth;  // phantom JSON or pixel CSV
  std::string inner_product = "l2_mass";
  std::string solver = "direct";
  fs::path out;
};

struct SweepOptions {
  ReconstructOptions base;
  std::vector<double> alphas;
};

struct EvaluateOptions {
  fs::path truth;
  fs::path recon;
  std::string mask;
  std::string append;
  std::string sample;
  std::string method;
  std::string case_name;
};

// Each command validates its options, writes its artifacts and a manifest
// into opts.out, and throws eit::Error subclasses on failure.
void cmd_phantom(const PhantomOptions& opts, const nlohmann::json& params);
void cmd_simulate(const SimulateOptions& opts, const nlohmann::json& params);
void cmd_calderon(const CalderonOptions& opts, const nlohmann::json& params);
void cmd_reconstruct(const ReconstructOptions& opts, const nlohmann::json& params);
void cmd_sweep_alpha(const SweepOptions& opts, const nlohmann::json& params);
/// Prints the report as JSON on stdout; appends a CSV row when asked.
void cmd_evaluate(const EvaluateOptions& opts);

}  // namespace eit::cli
