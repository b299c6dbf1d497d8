#pragma once

#include <chrono>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace eit::cli {

/// manifest.json written once per output directory. "parameters" holds the
/// resolved value of every option so that `eit replay` can rerun the command.
class Manifest {
 public:
  Manifest(std::string command, nlohmann::json parameters);

  void add_input(const std::filesystem::path& p);
  void add_output(const std::string& name);
  nlohmann::json& details() { return details_; }

  void write(const std::filesystem::path& dir) const;

 private:
  std::string command_;
  nlohmann::json parameters_;
  nlohmann::json inputs_ = nlohmann::json::array();
  nlohmann::json outputs_ = nlohmann::json::array();
  nlohmann::json details_ = nlohmann::json::object();
  std::chrono::steady_clock::time_point start_;
};

}  // namespace eit::cli
