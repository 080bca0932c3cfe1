// Command-line front end. Every subcommand builds the same step a config
// file would and goes through aperio::run, so exit codes agree.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "aperio/error.hpp"
#include "aperio/experiment.hpp"

namespace {

using aperio::Json;

Json box_param(const std::vector<double>& flat) {
  if (flat.empty() || flat.size() % 2 != 0) throw CLI::ValidationError("--box", "expects lo hi pairs");
  Json box = Json::array();
  for (std::size_t i = 0; i < flat.size(); i += 2) box.push_back({aperio::num(flat[i]), aperio::num(flat[i + 1])});
  return box;
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(aperio::num(x));
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aperio: densities, covolumes and frame diagnostics for point sets in R^d"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string workspace = ".";
  unsigned threads = 1;
  std::string profile = "default";
  app.add_option("--seed", seed, "Seed for randomized translates and perturbations");
  app.add_option("--workspace", workspace, "Root for relative paths");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tolerance-profile", profile, "Verdict tolerances")->check(CLI::IsMember({"default", "strict"}));

  aperio::Step step;
  Json& p = step.params;
  std::optional<std::string> config_path, report_path, csv_out;
  std::vector<std::string> csv_cols;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a model-set patch");
  std::string scheme, out;
  std::vector<double> box;
  double perturb = 0;
  gen->add_option("--scheme", scheme, "Scheme JSON")->required();
  gen->add_option("--box", box, "Box as lo hi pairs")->required()->expected(2, -1)->allow_extra_args(false);
  gen->add_option("--perturb", perturb, "Uniform jitter amplitude (seeded)");
  gen->add_option("--out", out)->required();

  // density
  auto* dens = app.add_subcommand("density", "Beurling / hull Beurling densities");
  std::string patch, method = "exact";
  std::vector<double> folner;
  std::vector<std::string> extras;
  std::optional<double> grid_step, rd_radius;
  std::optional<std::size_t> ell;
  std::optional<std::string> csv;
  dens->add_option("--patch", patch)->required();
  dens->add_option("--folner", folner, "Box half-widths n")->required()->delimiter(',');
  dens->add_option("--method", method)->check(CLI::IsMember({"exact", "grid"}));
  dens->add_option("--grid-step", grid_step);
  dens->add_option("--extras", extras, "Limit patches for hull densities");
  dens->add_option("--ell", ell, "Relative separation constant for covolume bounds");
  dens->add_option("--relatively-dense-radius", rd_radius);
  dens->add_option("--out", out)->required();
  dens->add_option("--csv", csv);

  // hull-sample
  auto* hull = app.add_subcommand("hull-sample", "Sample the translation orbit on a window");
  std::vector<double> k_box;
  std::string translates = "own";
  std::optional<std::size_t> count;
  std::optional<double> u_radius;
  hull->add_option("--patch", patch)->required();
  hull->add_option("--k-box", k_box)->required()->expected(2, -1)->allow_extra_args(false);
  hull->add_option("--translates", translates)->check(CLI::IsMember({"own", "default", "random"}));
  hull->add_option("--count", count, "Number of random translates");
  hull->add_option("--u-radius", u_radius);
  hull->add_option("--out", out)->required();

  // frame
  auto* frame = app.add_subcommand("frame", "Gram spectra, Riesz and sampling bounds over truncations");
  std::string kernel;
  std::vector<double> truncations;
  std::optional<double> margin_fraction;
  std::optional<int> taper;
  std::optional<std::size_t> max_points;
  std::optional<std::string> eigen_csv;
  frame->add_option("--kernel", kernel)->required();
  frame->add_option("--patch", patch)->required();
  frame->add_option("--truncations", truncations)->required()->delimiter(',');
  frame->add_option("--margin-fraction", margin_fraction);
  frame->add_option("--taper-order", taper);
  frame->add_option("--max-points", max_points);
  frame->add_option("--out", out)->required();
  frame->add_option("--csv", csv);
  frame->add_option("--eigen-csv", eigen_csv);

  // verdict
  auto* verd = app.add_subcommand("verdict", "Necessary density conditions");
  std::string density;
  bool rel_dense = false;
  verd->add_option("--kernel", kernel)->required();
  verd->add_option("--density", density)->required();
  verd->add_option("--ell", ell);
  verd->add_flag("--relatively-dense", rel_dense);
  verd->add_option("--out", out)->required();

  // weil-check
  auto* weil = app.add_subcommand("weil-check", "Weil formula residual for a lattice");
  std::string function = "triangle";
  double width = 1.0;
  std::size_t qn = 10000;
  weil->add_option("--scheme", scheme)->required();
  weil->add_option("--function", function)->check(CLI::IsMember({"triangle", "gaussian"}));
  weil->add_option("--width", width);
  weil->add_option("--quadrature-n", qn);
  weil->add_option("--out", out)->required();

  // amalgam
  auto* amal = app.add_subcommand("amalgam", "Wiener amalgam norm of the reproducing vector");
  double q = 0.5, trunc = 8.0, step_size = 0.01;
  amal->add_option("--kernel", kernel)->required();
  amal->add_option("--q-radius", q);
  amal->add_option("--trunc-radius", trunc);
  amal->add_option("--grid-step", step_size);
  amal->add_option("--out", out)->required();

  auto* runc = app.add_subcommand("run", "Run an experiment config");
  runc->add_option("--config", config_path)->required();

  auto* csvc = app.add_subcommand("csv", "CSV view of a report");
  csvc->add_option("--report", report_path)->required();
  csvc->add_option("--columns", csv_cols)->delimiter(',');
  csvc->add_option("--out", csv_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  aperio::Context ctx;
  ctx.workspace = workspace;
  ctx.seed = seed;
  ctx.threads = threads;
  ctx.tolerance = profile == "strict" ? aperio::ToleranceProfile::kStrict : aperio::ToleranceProfile::kDefault;

  try {
    if (runc->parsed()) {
      const std::filesystem::path cfg(*config_path);
      if (!std::filesystem::exists(cfg)) {
        std::cerr << "config error: missing config file " << cfg.string() << "\n";
        return 2;
      }
      aperio::ExperimentConfig config;
      try {
        config = aperio::parse_config(aperio::read_json_file(cfg), cfg.parent_path());
      } catch (const aperio::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
      }
      // Explicit global flags override the config.
      if (app.count("--seed")) config.context.seed = seed;
      if (app.count("--threads")) config.context.threads = threads;
      if (app.count("--tolerance-profile")) config.context.tolerance = ctx.tolerance;
      if (app.count("--workspace")) config.context.workspace = workspace;
      return aperio::run(config, std::cerr);
    }
    if (csvc->parsed()) {
      const std::filesystem::path report = ctx.workspace / *report_path;
      if (!std::filesystem::exists(report)) {
        std::cerr << "config error: missing report " << *report_path << "\n";
        return 2;
      }
      const std::string text = aperio::emit_csv(aperio::read_json_file(report), csv_cols);
      if (csv_out) {
        aperio::write_text_file(ctx.workspace / *csv_out, text);
      } else {
        std::cout << text;
      }
      return 0;
    }

    p = Json::object();
    p["out"] = out;
    if (gen->parsed()) {
      step.command = "gen";
      p["scheme"] = scheme;
      p["box"] = box_param(box);
      if (perturb > 0) p["perturb"] = aperio::num(perturb);
    } else if (dens->parsed()) {
      step.command = "density";
      p["patch"] = patch;
      p["sizes"] = numbers(folner);
      p["method"] = method;
      if (grid_step) p["grid_step"] = aperio::num(*grid_step);
      if (!extras.empty()) p["extras"] = extras;
      if (ell) p["ell"] = *ell;
      if (rd_radius) p["relatively_dense_radius"] = aperio::num(*rd_radius);
      if (csv) p["csv"] = *csv;
    } else if (hull->parsed()) {
      step.command = "hull-sample";
      p["patch"] = patch;
      p["k_box"] = box_param(k_box);
      if (translates == "random") {
        p["translates"] = {{"random", count.value_or(100)}};
      } else {
        p["translates"] = translates;
      }
      if (u_radius) p["u_radius"] = aperio::num(*u_radius);
    } else if (frame->parsed()) {
      step.command = "frame";
      p["kernel"] = kernel;
      p["patch"] = patch;
      p["truncations"] = numbers(truncations);
      if (margin_fraction) p["margin_fraction"] = aperio::num(*margin_fraction);
      if (taper) p["taper_order"] = *taper;
      if (max_points) p["max_points"] = *max_points;
      if (csv) p["csv"] = *csv;
      if (eigen_csv) p["eigen_csv"] = *eigen_csv;
    } else if (verd->parsed()) {
      step.command = "verdict";
      p["kernel"] = kernel;
      p["density"] = density;
      if (ell) p["ell"] = *ell;
      p["relatively_dense"] = rel_dense;
    } else if (weil->parsed()) {
      step.command = "weil-check";
      p["scheme"] = scheme;
      p["function"] = {{"kind", function}, {"width", aperio::num(width)}};
      p["quadrature_n"] = qn;
    } else if (amal->parsed()) {
      step.command = "amalgam";
      p["kernel"] = kernel;
      p["q_radius"] = aperio::num(q);
      p["trunc_radius"] = aperio::num(trunc);
      p["grid_step"] = aperio::num(step_size);
    }
    aperio::ExperimentConfig config{ctx, {step}};
    return aperio::run(config, std::cerr);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
