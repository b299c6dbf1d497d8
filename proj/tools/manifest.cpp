#include "manifest.hpp"

#include "eit/io.hpp"

namespace eit::cli {

Manifest::Manifest(std::string command, nlohmann::json parameters)
    : command_(std::move(command)), parameters_(std::move(parameters)), start_(std::chrono::steady_clock::now()) {}

void Manifest::add_input(const std::filesystem::path& p) { inputs_.push_back(p.string()); }

void Manifest::add_output(const std::string& name) { outputs_.push_back(name); }

void Manifest::write(const std::filesystem::path& dir) const {
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  nlohmann::json j;
  j["command"] = command_;
  j["version"] = EIT_VERSION;
  j["parameters"] = parameters_;
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  j["details"] = details_;
  j["timings"] = {{"wall_seconds", seconds}};
  write_text(dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace eit::cli
