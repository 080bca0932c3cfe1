#include "aperio/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>
#include <set>

#include "aperio/error.hpp"
#include "aperio/format.hpp"

namespace aperio {

namespace fs = std::filesystem;

namespace {

const Json& require(const Json& params, const char* key) {
  if (!params.is_object() || !params.contains(key)) throw ConfigError(std::string("missing parameter '") + key + "'");
  return params.at(key);
}

// A parameter holding either a path (input file) or an inline object.
bool is_path(const Json& params, const char* key) { return params.contains(key) && params.at(key).is_string(); }

struct Loader {
  const Context& ctx;
  Json inputs = Json::object();

  fs::path resolve(const std::string& rel) const { return ctx.workspace / rel; }

  Json file(const std::string& name, const std::string& rel) {
    const fs::path p = resolve(rel);
    inputs[name] = sha256_file(p);
    return read_json_file(p);
  }
  Json object(const Json& params, const char* key) {
    const Json& v = require(params, key);
    return v.is_string() ? file(key, v.get<std::string>()) : v;
  }
  PointPatch patch(const Json& params, const char* key = "patch") {
    return patch_from_json(file(key, require(params, key).get<std::string>()));
  }
};

std::vector<double> doubles(const Json& j) { return to_vec(j); }

Json finish(Json report, const Step& step, const Context& ctx, const Loader& loader) {
  report["meta"] = {{"tool", "aperio"},
                    {"version", kToolVersion},
                    {"seed", std::to_string(ctx.seed)},
                    {"command", step.command},
                    {"params", step.params},
                    {"inputs", loader.inputs}};
  return report;
}

void write_out(const Step& step, const Context& ctx, const Json& report) {
  write_json_file(ctx.workspace / require(step.params, "out").get<std::string>(), report);
}

void write_csv(const Step& step, const Context& ctx, const char* key, const Json& report,
               const std::vector<std::string>& cols) {
  if (step.params.contains(key)) {
    write_text_file(ctx.workspace / step.params.at(key).get<std::string>(), emit_csv(report, cols));
  }
}

Box admissible(const Box& box, const Box& k_box) {
  std::vector<Interval> s;
  for (std::size_t a = 0; a < box.dim(); ++a) {
    s.push_back({box.side(a).lo - k_box.side(a).lo, box.side(a).hi - k_box.side(a).hi});
  }
  return Box(std::move(s));
}

Json cmd_gen(const Step& step, const Context& ctx) {
  Loader ld{ctx};
  const CutProjectScheme scheme = scheme_from_json(ld.object(step.params, "scheme"));
  const Box box = box_from_json(require(step.params, "box"));
  const double jitter = step.params.contains("perturb") ? to_double(step.params.at("perturb")) : 0.0;
  PointPatch patch;
  if (jitter > 0) {
    // Points are generated on the inflated box so every perturbed point that
    // can land in `box` is present.
    const PointPatch wide = generate_model_set(scheme, box.inflated(jitter));
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> u(-jitter, jitter);
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < wide.size(); ++i) {
      Vec p(wide.point(i).begin(), wide.point(i).end());
      for (double& c : p) c += u(rng);
      if (box.contains(p)) pts.push_back(std::move(p));
    }
    patch = PointPatch::merged(box, std::move(pts));
  } else {
    patch = generate_model_set(scheme, box);
  }
  Json report = to_json(patch);
  report["kind"] = "point_patch";
  report["provenance"] = {{"points", "exact"}};
  report = finish(report, step, ctx, ld);
  write_out(step, ctx, report);
  return report;
}

Json cmd_density(const Step& step, const Context& ctx) {
  Loader ld{ctx};
  const PointPatch patch = ld.patch(step.params);
  FolnerSpec spec;
  spec.sizes = doubles(require(step.params, "sizes"));
  if (step.params.contains("method")) {
    const auto m = step.params.at("method").get<std::string>();
    if (m != "exact" && m != "grid") throw Error(ErrorKind::kInvalidArgument, "method must be 'exact' or 'grid'");
    spec.method = m == "grid" ? CountMethod::kGrid : CountMethod::kExact;
  }
  if (step.params.contains("grid_step")) spec.translate_grid_step = to_double(step.params.at("grid_step"));
  std::vector<PointPatch> extras;
  if (step.params.contains("extras")) {
    std::size_t i = 0;
    for (const auto& e : step.params.at("extras")) {
      extras.push_back(patch_from_json(ld.file("extras[" + std::to_string(i++) + "]", e.get<std::string>())));
    }
  }
  DensityReport r = extras.empty() ? beurling_density(patch, spec) : hull_beurling_density(patch, spec, extras);
  bool rel_dense = false;
  if (step.params.contains("relatively_dense_radius")) {
    rel_dense = is_relatively_dense(patch, to_double(step.params.at("relatively_dense_radius")));
  }
  if (step.params.contains("ell")) {
    r.covolume_bounds = covolume_bounds_from_density(r, step.params.at("ell").get<std::size_t>(), rel_dense);
  }
  Json report = to_json(r);
  report["relatively_dense"] = rel_dense;
  if (step.params.contains("ergodic")) {
    const Json& e = step.params.at("ergodic");
    const Box s_box = box_from_json(require(e, "s_box"));
    const auto count = require(e, "translates").get<std::size_t>();
    const auto translates = uniform_translates(admissible(patch.box(), s_box), count);
    report["ergodic"] = to_json(covolume_ergodic_estimate(patch, s_box, translates));
  }
  report = finish(report, step, ctx, ld);
  write_out(step, ctx, report);
  write_csv(step, ctx, "csv", report, {"n", "inf", "sup"});
  return report;
}

Json cmd_hull_sample(const Step& step, const Context& ctx) {
  Loader ld{ctx};
  const PointPatch patch = ld.patch(step.params);
  const Box k_box = box_from_json(require(step.params, "k_box"));
  const Box adm = admissible(patch.box(), k_box);
  std::vector<Vec> translates;
  const Json mode = step.params.contains("translates") ? step.params.at("translates") : Json("own");
  if (mode == "own") {
    for (std::size_t i = 0; i < patch.size(); ++i) {
      if (adm.contains(patch.point(i))) translates.emplace_back(patch.point(i).begin(), patch.point(i).end());
    }
  } else if (mode == "default") {
    translates = default_translates(patch, k_box, to_double(require(step.params, "u_radius")));
  } else if (mode.is_object() && mode.contains("random")) {
    if (adm.empty()) throw Error(ErrorKind::kBoxTooSmall, "box too small");
    std::mt19937_64 rng(ctx.seed);
    const auto count = mode.at("random").get<std::size_t>();
    for (std::size_t i = 0; i < count; ++i) {
      Vec x;
      for (const auto& s : adm.sides()) x.push_back(std::uniform_real_distribution<double>(s.lo, s.hi)(rng));
      translates.push_back(std::move(x));
    }
  } else {
    throw Error(ErrorKind::kInvalidArgument, "translates must be 'own', 'default' or {\"random\": count}");
  }
  const auto samples = orbit_sample(patch, translates, k_box);
  Json arr = Json::array();
  for (const auto& s : samples) arr.push_back(to_json(s));
  Json report = {{"kind", "orbit_sample"},
                 {"patches", arr},
                 {"translates", translates.size()},
                 {"distinct", count_distinct(samples, 1e-9)},
                 {"note", "finite-window evidence"},
                 {"provenance", {{"patches", "exact"}, {"distinct", "exact"}}}};
  report = finish(report, step, ctx, ld);
  write_out(step, ctx, report);
  return report;
}

Json cmd_frame(const Step& step, const Context& ctx) {
  Loader ld{ctx};
  const KernelSpec kernel = kernel_from_json(ld.object(step.params, "kernel"));
  const PointPatch patch = ld.patch(step.params);
  FrameOptions opt;
  opt.gram.threads = ctx.threads;
  if (step.params.contains("margin_fraction")) opt.margin_fraction = to_double(step.params.at("margin_fraction"));
  if (step.params.contains("taper_order")) opt.taper_order = step.params.at("taper_order").get<int>();
  if (step.params.contains("max_points")) opt.gram.max_points = step.params.at("max_points").get<std::size_t>();
  const std::vector<double> truncations = doubles(require(step.params, "truncations"));
  Json report = finish(to_json(frame_report(kernel, patch, truncations, opt)), step, ctx, ld);
  write_out(step, ctx, report);
  write_csv(step, ctx, "csv", report, {});
  if (step.params.contains("eigen_csv")) {
    const PointPatch sub = patch.restricted(Box::cube(patch.box().center(), truncations.back()));
    const Json spec = spectrum_json(spectrum(build_gram(kernel, sub, opt.gram)));
    write_text_file(ctx.workspace / step.params.at("eigen_csv").get<std::string>(), emit_csv(spec, {}));
  }
  return report;
}

Json cmd_verdict(const Step& step, const Context& ctx) {
  Loader ld{ctx};
  const KernelSpec kernel = kernel_from_json(ld.object(step.params, "kernel"));
  const DensityReport density = density_from_json(ld.file("density", require(step.params, "density").get<std::string>()));
  VerdictOptions opt;
  if (ctx.tolerance == ToleranceProfile::kStrict) opt.tolerance = 0.0;
  if (step.params.contains("relatively_dense")) opt.relatively_dense = step.params.at("relatively_dense").get<bool>();
  const std::size_t ell = step.params.contains("ell") ? step.params.at("ell").get<std::size_t>() : 1;
  Json report = finish(to_json(verdict(kernel, density, ell, opt)), step, ctx, ld);
  write_out(step, ctx, report);
  return report;
}

Json cmd_weil(const Step& step, const Context& ctx) {
  Loader ld{ctx};
  const CutProjectScheme scheme = scheme_from_json(ld.object(step.params, "scheme"));
  TestFunction f;
  if (step.params.contains("function")) {
    const Json& fj = step.params.at("function");
    const auto kind = require(fj, "kind").get<std::string>();
    if (kind != "triangle" && kind != "gaussian") throw Error(ErrorKind::kInvalidArgument, "function kind must be 'triangle' or 'gaussian'");
    f.kind = kind == "gaussian" ? TestFunctionKind::kGaussian : TestFunctionKind::kTriangle;
    f.width = to_double(require(fj, "width"));
  }
  const std::size_t n = step.params.contains("quadrature_n") ? step.params.at("quadrature_n").get<std::size_t>() : 10000;
  Json report = finish(to_json(weil_check(scheme, f, n)), step, ctx, ld);
  write_out(step, ctx, report);
  return report;
}

Json cmd_amalgam(const Step& step, const Context& ctx) {
  Loader ld{ctx};
  const KernelSpec kernel = kernel_from_json(ld.object(step.params, "kernel"));
  const double q = to_double(require(step.params, "q_radius"));
  const double t = to_double(require(step.params, "trunc_radius"));
  const double h = to_double(require(step.params, "grid_step"));
  const std::string tag = "grid(step=" + format_number(h) + ")";
  Json report = {{"kind", "amalgam"},
                 {"norm", num(wiener_amalgam_norm(kernel, q, t, h))},
                 {"provenance", {{"norm", tag}}}};
  report = finish(report, step, ctx, ld);
  write_out(step, ctx, report);
  return report;
}

using Handler = Json (*)(const Step&, const Context&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"gen", cmd_gen},         {"density", cmd_density}, {"hull-sample", cmd_hull_sample}, {"frame", cmd_frame},
      {"verdict", cmd_verdict}, {"weil-check", cmd_weil}, {"amalgam", cmd_amalgam}};
  return h;
}

std::string cell(const Json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      const double d = parse_number(s);
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.12g", d);
      return buf;
    } catch (const Error&) {
      if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      return q + "\"";
    }
  }
  if (v.is_number_float()) return cell(Json(format_number(v.get<double>())));
  return v.dump();
}

using Row = std::map<std::string, Json>;

std::vector<Row> csv_rows(const Json& report, std::vector<std::string>& names) {
  const std::string kind = report.value("kind", "");
  std::vector<Row> rows;
  if (kind == "density_report") {
    names = {"n", "inf", "sup"};
    const Json& lo = report.at("lower");
    const Json& hi = report.at("upper");
    for (std::size_t i = 0; i < lo.size(); ++i) {
      rows.push_back({{"n", lo[i].at("n")}, {"inf", lo[i].at("value")}, {"sup", hi[i].at("value")}});
    }
  } else if (kind == "frame_report") {
    names = {"truncation", "points", "A", "B", "raw_A", "riesz_A", "riesz_B"};
    for (const auto& t : report.at("trend")) {
      rows.push_back({{"truncation", t.at("truncation")},
                      {"points", t.at("points")},
                      {"A", t.at("sampling").at("A")},
                      {"B", t.at("sampling").at("B")},
                      {"raw_A", t.at("sampling").at("raw_A")},
                      {"riesz_A", t.at("riesz").at("A")},
                      {"riesz_B", t.at("riesz").at("B")}});
    }
  } else if (kind == "spectrum") {
    names = {"eigenvalue"};
    for (const auto& v : report.at("eigenvalues")) rows.push_back({{"eigenvalue", v}});
  } else {
    throw Error(ErrorKind::kInvalidArgument, "no CSV view for report kind '" + kind + "'");
  }
  return rows;
}

void check_step(const Step& step) {
  if (!handlers().count(step.command)) throw ConfigError("unknown command '" + step.command + "'");
  if (!step.params.is_object()) throw ConfigError("params of '" + step.command + "' must be an object");
  require(step.params, "out");
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : handlers()) v.push_back(k);
    return v;
  }();
  return names;
}

ExperimentConfig parse_config(const Json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  try {
    if (j.contains("seed")) {
      const Json& s = j.at("seed");
      c.context.seed = s.is_string() ? std::stoull(s.get<std::string>()) : s.get<std::uint64_t>();
    }
    c.context.workspace = base_dir / (j.contains("workspace") ? j.at("workspace").get<std::string>() : ".");
    if (j.contains("threads")) c.context.threads = std::max(1u, j.at("threads").get<unsigned>());
    if (j.contains("tolerance_profile")) {
      const auto p = j.at("tolerance_profile").get<std::string>();
      if (p != "default" && p != "strict") throw ConfigError("tolerance_profile must be 'default' or 'strict'");
      c.context.tolerance = p == "strict" ? ToleranceProfile::kStrict : ToleranceProfile::kDefault;
    }
    for (const auto& s : require(j, "steps")) {
      c.steps.push_back({require(s, "command").get<std::string>(), s.contains("params") ? s.at("params") : Json::object()});
      check_step(c.steps.back());
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::logic_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

std::vector<std::string> step_inputs(const Step& step) {
  check_step(step);
  std::vector<std::string> in;
  for (const char* key : {"scheme", "patch", "kernel", "density"}) {
    if (is_path(step.params, key)) in.push_back(step.params.at(key).get<std::string>());
  }
  if (step.params.contains("extras")) {
    for (const auto& e : step.params.at("extras")) in.push_back(e.get<std::string>());
  }
  return in;
}

std::vector<std::string> step_outputs(const Step& step) {
  check_step(step);
  std::vector<std::string> out = {step.params.at("out").get<std::string>()};
  for (const char* key : {"csv", "eigen_csv"}) {
    if (step.params.contains(key)) out.push_back(step.params.at(key).get<std::string>());
  }
  return out;
}

Json execute(const Step& step, const Context& ctx) {
  check_step(step);
  return handlers().at(step.command)(step, ctx);
}

int run(const ExperimentConfig& config, std::ostream& log) {
  try {
    std::set<std::string> produced;
    for (const auto& step : config.steps) {
      for (const auto& in : step_inputs(step)) {
        if (!produced.count(in) && !fs::exists(config.context.workspace / in)) {
          throw ConfigError("step '" + step.command + "': missing input file " + in);
        }
      }
      for (const auto& out : step_outputs(step)) produced.insert(out);
    }
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  }
  for (const auto& step : config.steps) {
    try {
      execute(step, config.context);
      log << step.command << ": wrote " << step.params.at("out").get<std::string>() << "\n";
    } catch (const ConfigError& e) {
      log << step.command << ": config error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      log << step.command << ": error: " << e.what() << "\n";
      return 1;
    }
  }
  return 0;
}

std::vector<std::string> csv_columns(const Json& report) {
  std::vector<std::string> names;
  csv_rows(report, names);
  return names;
}

std::string emit_csv(const Json& report, const std::vector<std::string>& columns) {
  std::vector<std::string> names;
  const auto rows = csv_rows(report, names);
  std::vector<std::string> cols = columns.empty() ? names : columns;
  for (const auto& c : cols) {
    if (std::find(names.begin(), names.end(), c) == names.end()) {
      std::string valid;
      for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
      throw Error(ErrorKind::kUnknownColumn, "unknown column '" + c + "'; valid columns: " + valid);
    }
  }
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cell(Json(cols[i]));
  out += "\r\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cell(r.at(cols[i]));
    out += "\r\n";
  }
  return out;
}

}  // namespace aperio
