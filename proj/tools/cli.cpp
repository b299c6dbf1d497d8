#include "cli.hpp"

#include <cctype>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "eit/errors.hpp"
#include "eit/io.hpp"

namespace eit::cli {

namespace {

using nlohmann::json;

/// EIT_<NAME> for --name, dashes turned into underscores.
std::string env_name(const std::string& long_name) {
  std::string s = "EIT_";
  for (const char c : long_name) s += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

/// Gives every long option of the subcommand an environment fallback.
void attach_env(CLI::App* sub) {
  for (CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames()[0] == "help") continue;
    opt->envname(env_name(opt->get_lnames()[0]));
  }
}

/// Resolved option values (command line, environment or default), the
/// output directory excluded.
json resolved_parameters(const CLI::App* sub) {
  json params = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames()[0];
    if (name == "help" || name == "out") continue;
    if (opt->count() > 0) {
      const std::vector<std::string>& values = opt->results();
      if (opt->get_expected_max() > 1) {
        params[name] = values;
      } else {
        params[name] = values.back();
      }
    } else if (!opt->get_default_str().empty()) {
      params[name] = opt->get_default_str();
    }
  }
  return params;
}

std::vector<std::string> replay_args(const fs::path& manifest_path, const fs::path& out) {
  json m;
  try {
    m = json::parse(read_text(manifest_path));
  } catch (const json::exception& e) {
    throw ValidationError(manifest_path.string() + ": " + e.what());
  }
  if (!m.contains("command") || !m.contains("parameters") || !m["parameters"].is_object()) {
    throw ValidationError(manifest_path.string() + ": not a run manifest");
  }
  std::vector<std::string> args{"eit", m["command"].get<std::string>()};
  for (const auto& [name, value] : m["parameters"].items()) {
    args.push_back("--" + name);
    if (value.is_array()) {
      for (const auto& v : value) args.push_back(v.get<std::string>());
    } else {
      args.push_back(value.get<std::string>());
    }
  }
  args.push_back("--out");
  args.push_back(out.string());
  return args;
}

void add_reconstruct_options(CLI::App* sub, ReconstructOptions& o) {
  sub->add_option("--data", o.data, "Directory written by `eit simulate`")->required();
  sub->add_option("--method", o.method, "levr or tikhonov")->capture_default_str();
  sub->add_option("--mask", o.mask, "oracle:PHANTOM_JSON, calderon[:GAMMA] or file:MASK_CSV");
  sub->add_option("--alpha", o.alpha, "Penalty weight on the mask support")->capture_default_str();
  sub->add_option("--iterations", o.iterations, "Gauss-Newton steps N_v")->capture_default_str();
  sub->add_option("--mesh-n", o.mesh_n, "Inversion mesh and pixel grid size")->capture_default_str();
  sub->add_option("--gamma", o.gamma, "Mask threshold")->capture_default_str();
  sub->add_option("--R", o.R, "Truncation radius for calderon masks")->capture_default_str();
  sub->add_option("--truth", o.truth, "Phantom JSON or pixel CSV used for E, E+ and E-");
  sub->add_option("--inner-product", o.inner_product, "l2_mass or euclidean")->capture_default_str();
  sub->add_option("--solver", o.solver, "direct or cg")->capture_default_str();
  sub->add_option("--out", o.out, "Output directory")->required();
}

int dispatch(std::vector<std::string> args) {
  CLI::App app{"2-D electrical impedance tomography toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", EIT_VERSION);

  PhantomOptions phantom;
  CLI::App* s_phantom = app.add_subcommand("phantom", "Sample Circle-Dataset phantoms");
  s_phantom->add_option("--seed", phantom.seed, "Seed of the first sample; sample k uses seed + k")->capture_default_str();
  s_phantom->add_option("--count", phantom.count)->capture_default_str();
  s_phantom->add_option("--case-target", phantom.case_target, "Rescale so the largest contrast equals this value");
  s_phantom->add_option("--grid-n", phantom.grid_n, "Pixel grid of the ground-truth CSVs")->capture_default_str();
  s_phantom->add_option("--out", phantom.out)->required();

  SimulateOptions simulate;
  CLI::App* s_simulate = app.add_subcommand("simulate", "Forward-simulate Cauchy data for a phantom");
  s_simulate->add_option("--phantom", simulate.phantom, "Phantom JSON")->required();
  s_simulate->add_option("--mesh-n", simulate.mesh_n)->capture_default_str();
  s_simulate->add_option("--electrodes", simulate.electrodes)->capture_default_str();
  s_simulate->add_option("--patterns", simulate.patterns)->capture_default_str();
  s_simulate->add_option("--delta", simulate.delta, "Relative noise level")->capture_default_str();
  s_simulate->add_option("--seed", simulate.seed, "Noise seed")->capture_default_str();
  s_simulate->add_option("--injection", simulate.injection, "continuum or point")->capture_default_str();
  s_simulate->add_option("--out", simulate.out)->required();

  CalderonOptions calderon;
  CLI::App* s_calderon = app.add_subcommand("calderon", "Calderon image from Cauchy data");
  s_calderon->add_option("--data", calderon.data)->required();
  s_calderon->add_option("--R", calderon.R, "Truncation radius")->capture_default_str();
  s_calderon->add_option("--grid-n", calderon.grid_n)->capture_default_str();
  s_calderon->add_option("--quad-nodes", calderon.quad_nodes, "Simpson nodes per axis (odd)")->capture_default_str();
  s_calderon->add_option("--out", calderon.out)->required();

  ReconstructOptions reconstruct;
  CLI::App* s_reconstruct = app.add_subcommand("reconstruct", "Run LEVR-C or Tikhonov");
  add_reconstruct_options(s_reconstruct, reconstruct);

  SweepOptions sweep;
  CLI::App* s_sweep = app.add_subcommand("sweep-alpha", "Reconstruct over a list of alpha values");
  add_reconstruct_options(s_sweep, sweep.base);
  s_sweep->remove_option(s_sweep->get_option("--alpha"));
  s_sweep->add_option("--alphas", sweep.alphas, "Penalty weights")->required()->expected(1, -1);

  EvaluateOptions evaluate;
  CLI::App* s_evaluate = app.add_subcommand("evaluate", "Score a reconstruction against the truth");
  s_evaluate->add_option("--truth", evaluate.truth, "Phantom JSON or pixel CSV")->required();
  s_evaluate->add_option("--recon", evaluate.recon, "Pixel CSV")->required();
  s_evaluate->add_option("--mask", evaluate.mask, "Approximate support CSV for Dice/Recall/Precision and E+/E-");
  s_evaluate->add_option("--append", evaluate.append, "Experiment CSV to append a row to");
  s_evaluate->add_option("--sample", evaluate.sample);
  s_evaluate->add_option("--method-name", evaluate.method);
  s_evaluate->add_option("--case", evaluate.case_name);

  fs::path replay_manifest, replay_out;
  CLI::App* s_replay = app.add_subcommand("replay", "Rerun the command recorded in a manifest");
  s_replay->add_option("--manifest", replay_manifest)->required();
  s_replay->add_option("--out", replay_out)->required();

  for (CLI::App* sub : {s_phantom, s_simulate, s_calderon, s_reconstruct, s_sweep, s_evaluate}) attach_env(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (s_phantom->parsed()) cmd_phantom(phantom, resolved_parameters(s_phantom));
  if (s_simulate->parsed()) cmd_simulate(simulate, resolved_parameters(s_simulate));
  if (s_calderon->parsed()) cmd_calderon(calderon, resolved_parameters(s_calderon));
  if (s_reconstruct->parsed()) cmd_reconstruct(reconstruct, resolved_parameters(s_reconstruct));
  if (s_sweep->parsed()) cmd_sweep_alpha(sweep, resolved_parameters(s_sweep));
  if (s_evaluate->parsed()) cmd_evaluate(evaluate);
  if (s_replay->parsed()) return dispatch(replay_args(replay_manifest, replay_out));
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  try {
    return dispatch(std::vector<std::string>(argv, argv + argc));
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace eit::cli
