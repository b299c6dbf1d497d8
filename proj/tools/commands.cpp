#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "eit/calderon.hpp"
#include "eit/errors.hpp"
#include "eit/forward.hpp"
#include "eit/io.hpp"
#include "eit/levr.hpp"
#include "eit/metrics.hpp"
#include "eit/phantom.hpp"
#include "eit/support.hpp"
#include "manifest.hpp"

namespace eit::cli {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void require_out(const fs::path& out) {
  require(!out.empty(), "--out is required");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create " + out.string() + ": " + ec.message());
}

std::string numbered(const std::string& stem, int k, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%03d", k);
  return stem + buf + ext;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Pixel matrix of the truth: a phantom JSON sampled at pixel centers, or a CSV.
Eigen::MatrixXd load_truth(const std::string& path, int n) {
  if (has_suffix(path, ".json")) return sample_pixels(load_phantom(path), PixelGrid(n));
  const Eigen::MatrixXd m = read_matrix(path).values;
  require(m.rows() == n && m.cols() == n, path + ": truth is " + std::to_string(m.rows()) + "x" +
                                              std::to_string(m.cols()) + ", expected " + std::to_string(n));
  return m;
}

Eigen::MatrixXd truth_support(const Eigen::MatrixXd& truth) {
  return (truth.array().abs() > kSupportTolerance).cast<double>().matrix();
}

void write_image(const fs::path& path, const Eigen::MatrixXd& m, Manifest& manifest, const std::string& key) {
  const double lo = m.minCoeff(), hi = m.maxCoeff();
  write_pgm(path, m, lo, hi);
  manifest.add_output(path.filename().string());
  manifest.details()[key] = {{"file", path.filename().string()}, {"scaling", "linear min-max"}, {"lo", lo}, {"hi", hi}};
}

struct MaskChoice {
  std::optional<SupportMask> mask;
  std::optional<std::string> oracle_phantom;
  std::string description;
};

MaskChoice build_mask(const ReconstructOptions& o, const CauchyData& data, const PixelGrid& grid, Manifest& manifest) {
  MaskChoice c;
  const std::string& arg = o.mask;
  if (arg.empty()) return c;
  c.description = arg;
  if (arg.rfind("oracle:", 0) == 0) {
    const std::string path = arg.substr(7);
    manifest.add_input(path);
    c.mask = oracle_support(load_phantom(path), grid);
    c.oracle_phantom = path;
  } else if (arg == "calderon" || arg.rfind("calderon:", 0) == 0) {
    double gamma = o.gamma;
    if (arg.size() > 9) {
      try {
        size_t used = 0;
        gamma = std::stod(arg.substr(9), &used);
        require(used == arg.size() - 9, "bad gamma in --mask " + arg);
      } catch (const std::logic_error&) {
        throw ValidationError("bad gamma in --mask " + arg);
      }
    }
    const CalderonImage img = calderon_image(data, o.R, grid);
    c.mask = calderon_threshold_support(img, gamma);
    manifest.details()["mask_gamma"] = gamma;
  } else if (arg.rfind("file:", 0) == 0) {
    const std::string path = arg.substr(5);
    manifest.add_input(path);
    const SoftMask soft = load_mask(path);
    require(soft.grid.size() == grid.size(), path + ": mask is " + std::to_string(soft.grid.size()) +
                                                 " pixels wide, mesh_N is " + std::to_string(grid.size()));
    c.mask = threshold(soft.values, o.gamma, MaskProvenance::external_file);
  } else {
    throw ValidationError("--mask must be oracle:PATH, calderon[:GAMMA] or file:PATH, got '" + arg + "'");
  }
  return c;
}

ReconConfig make_config(const ReconstructOptions& o) {
  ReconConfig c;
  c.alpha = o.alpha;
  c.gamma = o.gamma;
  c.iterations = o.iterations;
  c.R = o.R;
  c.mesh_n = o.mesh_n;
  if (o.inner_product == "l2_mass") {
    c.inner_product = InnerProduct::l2_mass;
  } else if (o.inner_product == "euclidean") {
    c.inner_product = InnerProduct::euclidean;
  } else {
    throw ValidationError("--inner-product must be l2_mass or euclidean");
  }
  if (o.solver == "direct") {
    c.solver = NormalSolver::direct;
  } else if (o.solver == "cg") {
    c.solver = NormalSolver::conjugate_gradient;
  } else {
    throw ValidationError("--solver must be direct or cg");
  }
  c.validate();
  return c;
}

struct Reconstruction {
  ReconResult result;
  std::optional<Eigen::MatrixXd> truth;
  std::optional<Eigen::MatrixXd> error_mask;  // region split for E+ / E-
};

Reconstruction reconstruct(const ReconstructOptions& o, const CauchyData& data, Manifest& manifest) {
  require(o.method == "levr" || o.method == "tikhonov", "--method must be levr or tikhonov");
  const ReconConfig config = make_config(o);
  const PixelGrid grid(config.mesh_n);

  MaskChoice choice = build_mask(o, data, grid, manifest);
  std::string truth_path = o.truth;
  if (truth_path.empty() && choice.oracle_phantom) truth_path = *choice.oracle_phantom;

  std::optional<Eigen::MatrixXd> truth;
  if (!truth_path.empty()) {
    if (truth_path != choice.oracle_phantom.value_or("")) manifest.add_input(truth_path);
    truth = load_truth(truth_path, config.mesh_n);
  }

  Reconstruction r{ReconResult{{}, {}, {}, SupportMask::full(grid), config, {}}, truth, std::nullopt};
  if (o.method == "levr") {
    require(choice.mask.has_value(), "method levr needs --mask");
    ReconConfig c = config;
    c.mask_source = choice.mask->provenance;
    r.result = run_levr(data, c, *choice.mask);
    r.error_mask = choice.mask->values;
  } else {
    if (choice.mask) std::cerr << "warning: --mask is ignored by method tikhonov\n";
    r.result = run_tikhonov(data, config);
    if (truth) r.error_mask = truth_support(*truth);
  }
  for (const std::string& w : r.result.warnings) std::cerr << "warning: " << w << "\n";
  return r;
}

std::string history_csv(const Reconstruction& r) {
  const PixelGrid grid(r.result.config.mesh_n);
  std::string text = r.truth ? "iteration,residual,reg_value,E,E_plus,E_minus\n" : "iteration,residual,reg_value\n";
  for (size_t i = 0; i < r.result.iterates.size(); ++i) {
    text += std::to_string(i) + "," + format_double(r.result.residual_norms[i]) + "," +
            format_double(r.result.reg_values[i]);
    if (r.truth) {
      const Eigen::MatrixXd pix = fe_to_pixels(r.result.iterates[i], grid);
      const MaskedErrors me = masked_errors(*r.truth, pix, *r.error_mask);
      text += "," + format_double(relative_error(*r.truth, pix)) + "," + format_double(me.plus) + "," +
              format_double(me.minus);
    }
    text += "\n";
  }
  return text;
}

json config_json(const ReconConfig& c) {
  return {{"alpha", c.alpha},
          {"gamma", c.gamma},
          {"iterations", c.iterations},
          {"mask_source", std::string(to_string(c.mask_source))},
          {"R", c.R},
          {"mesh_N", c.mesh_n},
          {"sigma_min", c.sigma_min},
          {"inner_product", c.inner_product == InnerProduct::l2_mass ? "l2_mass" : "euclidean"},
          {"solver", c.solver == NormalSolver::direct ? "direct" : "cg"},
          {"cg_tolerance", c.cg_tolerance}};
}

CauchyData load_data(const fs::path& dir, Manifest& manifest) {
  require(!dir.empty(), "--data is required");
  manifest.add_input(dir);
  return load_cauchy(dir);
}

}  // namespace

void cmd_phantom(const PhantomOptions& o, const json& params) {
  require(o.count >= 1, "--count must be >= 1");
  require(o.grid_n >= 2, "--grid-n must be >= 2");
  if (o.case_target) require(*o.case_target > 0.0, "--case-target must be positive");
  require_out(o.out);
  Manifest manifest("phantom", params);
  const PixelGrid grid(o.grid_n);
  for (int k = 0; k < o.count; ++k) {
    CirclePhantom ph = sample_phantom(o.seed + static_cast<std::uint64_t>(k));
    if (o.case_target) ph = rescale_max(ph, *o.case_target);
    const std::string json_name = numbered("phantom", k, ".json");
    const std::string csv_name = numbered("truth", k, ".csv");
    save_phantom(ph, o.out / json_name);
    write_matrix(o.out / csv_name, sample_pixels(ph, grid), MatrixKind::pixels);
    manifest.add_output(json_name);
    manifest.add_output(csv_name);
  }
  manifest.details()["per_sample_seed"] = "seed + index";
  manifest.write(o.out);
}

void cmd_simulate(const SimulateOptions& o, const json& params) {
  require(!o.phantom.empty(), "--phantom is required");
  require(o.mesh_n >= 2, "--mesh-n must be >= 2");
  require(o.patterns >= 1 && o.patterns <= o.electrodes, "--patterns must lie in [1, electrodes]");
  require(o.delta >= 0.0 && std::isfinite(o.delta), "--delta must be >= 0");
  const Injection mode = injection_from_string(o.injection);
  require_out(o.out);
  Manifest manifest("simulate", params);
  manifest.add_input(o.phantom);

  const CirclePhantom ph = load_phantom(o.phantom);
  const MeshPtr mesh = build_mesh(o.mesh_n);
  const ElectrodeLayout layout = electrode_positions(o.electrodes);
  electrode_nodes(layout, *mesh);  // rejects incompatible N and P up front
  const ForwardSolver solver(mesh, layout, interpolate([&](Point p) { return ph(p) + 1.0; }, mesh));
  const CauchyData data = simulate_cauchy(solver, trig_patterns(o.electrodes, o.patterns), o.delta, o.seed, mode);
  save_cauchy(data, o.out);
  save_phantom(ph, o.out / "phantom.json");
  for (const char* f : {"g.csv", "g.json", "f.csv", "f.json", "cauchy.json", "phantom.json"}) manifest.add_output(f);
  manifest.write(o.out);
}

void cmd_calderon(const CalderonOptions& o, const json& params) {
  require(o.grid_n >= 2, "--grid-n must be >= 2");
  require_out(o.out);
  Manifest manifest("calderon", params);
  const CauchyData data = load_data(o.data, manifest);
  CalderonQuadrature quad;
  quad.nodes = o.quad_nodes;
  const CalderonImage img = calderon_image(data, o.R, PixelGrid(o.grid_n), quad);
  write_matrix(o.out / "calderon.csv", img.values, MatrixKind::pixels,
               {{"R", img.R}, {"quad_nodes", quad.nodes}, {"k_min", img.k_min}});
  manifest.add_output("calderon.csv");
  manifest.add_output("calderon.json");
  write_image(o.out / "calderon.pgm", img.values, manifest, "image");
  manifest.details()["max_imag"] = img.max_imag;
  manifest.write(o.out);
}

void cmd_reconstruct(const ReconstructOptions& o, const json& params) {
  require_out(o.out);
  Manifest manifest("reconstruct", params);
  const CauchyData data = load_data(o.data, manifest);
  const Reconstruction r = reconstruct(o, data, manifest);
  const PixelGrid grid(r.result.config.mesh_n);

  for (size_t i = 0; i < r.result.iterates.size(); ++i) {
    const std::string name = numbered("iterate", static_cast<int>(i), ".csv");
    write_matrix(o.out / name, fe_to_pixels(r.result.iterates[i], grid), MatrixKind::pixels);
    manifest.add_output(name);
  }
  const Eigen::MatrixXd final_pixels = fe_to_pixels(r.result.iterates.back(), grid);
  write_matrix(o.out / "recon.csv", final_pixels, MatrixKind::pixels);
  manifest.add_output("recon.csv");
  if (o.method == "levr") {
    save_mask(r.result.mask, o.out / "mask.csv");
    manifest.add_output("mask.csv");
  }
  write_text(o.out / "history.csv", history_csv(r));
  manifest.add_output("history.csv");
  write_image(o.out / "recon.pgm", final_pixels, manifest, "image");

  manifest.details()["config"] = config_json(r.result.config);
  manifest.details()["mask_provenance"] =
      o.method == "levr" ? std::string(to_string(r.result.mask.provenance)) : std::string("none");
  manifest.details()["warnings"] = r.result.warnings;
  manifest.write(o.out);
}

void cmd_sweep_alpha(const SweepOptions& o, const json& params) {
  require(!o.alphas.empty(), "--alphas needs at least one value");
  require_out(o.base.out);
  Manifest manifest("sweep-alpha", params);
  const CauchyData data = load_data(o.base.data, manifest);

  std::string table = "alpha,residual,E,E_plus,E_minus\n";
  json runs = json::array();
  for (size_t k = 0; k < o.alphas.size(); ++k) {
    ReconstructOptions ro = o.base;
    ro.alpha = o.alphas[k];
    const Reconstruction r = reconstruct(ro, data, manifest);
    require(r.truth.has_value(), "sweep-alpha needs --truth or an oracle mask to report E");
    const std::string name = numbered("history_alpha", static_cast<int>(k), ".csv");
    write_text(o.base.out / name, history_csv(r));
    manifest.add_output(name);

    const Eigen::MatrixXd pix = fe_to_pixels(r.result.iterates.back(), PixelGrid(ro.mesh_n));
    const MaskedErrors me = masked_errors(*r.truth, pix, *r.error_mask);
    table += format_double(ro.alpha) + "," + format_double(r.result.residual_norms.back()) + "," +
             format_double(relative_error(*r.truth, pix)) + "," + format_double(me.plus) + "," +
             format_double(me.minus) + "\n";
    runs.push_back({{"alpha", ro.alpha}, {"history", name}, {"warnings", r.result.warnings}});
  }
  write_text(o.base.out / "sweep.csv", table);
  manifest.add_output("sweep.csv");
  manifest.details()["runs"] = runs;
  manifest.write(o.base.out);
}

void cmd_evaluate(const EvaluateOptions& o) {
  require(!o.truth.empty() && !o.recon.empty(), "--truth and --recon are required");
  const Eigen::MatrixXd recon = read_matrix(o.recon).values;
  require(recon.rows() == recon.cols(), o.recon.string() + ": reconstruction must be square");
  const Eigen::MatrixXd truth = load_truth(o.truth.string(), static_cast<int>(recon.rows()));

  EvalReport report;
  report.relative_error = relative_error(truth, recon);
  if (!o.mask.empty()) {
    const Eigen::MatrixXd approx = load_mask(o.mask).values;
    require((approx.array() == 0.0 || approx.array() == 1.0).all(), o.mask + ": mask must be binary");
    report.segmentation = segmentation_metrics(truth_support(truth), approx);
    report.masked = masked_errors(truth, recon, approx);
  }

  const auto opt = [](const std::optional<double>& v) -> json { return v ? json(*v) : json("undefined"); };
  json j = {{"E", report.relative_error},
            {"dice", opt(report.segmentation.dice)},
            {"recall", opt(report.segmentation.recall)},
            {"precision", opt(report.segmentation.precision)},
            {"e_plus", report.masked ? json(report.masked->plus) : json("undefined")},
            {"e_minus", report.masked ? json(report.masked->minus) : json("undefined")},
            {"truth", o.truth.string()},
            {"recon", o.recon.string()}};
  std::cout << j.dump() << "\n";

  if (!o.append.empty()) {
    const auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("undefined"); };
    const bool fresh = !fs::exists(o.append);
    std::ofstream out(o.append, std::ios::app);
    if (!out) throw IoError("cannot append to " + o.append);
    if (fresh) out << "sample,method,case,E,dice,recall,precision,e_plus,e_minus\n";
    out << o.sample << "," << o.method << "," << o.case_name << "," << format_double(report.relative_error) << ","
        << cell(report.segmentation.dice) << "," << cell(report.segmentation.recall) << ","
        << cell(report.segmentation.precision) << ","
        << (report.masked ? format_double(report.masked->plus) : "undefined") << ","
        << (report.masked ? format_double(report.masked->minus) : "undefined") << "\n";
  }
}

}  // namespace eit::cli
