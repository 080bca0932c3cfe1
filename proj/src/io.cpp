#include "aperio/io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "aperio/error.hpp"
#include "aperio/format.hpp"

namespace aperio {

namespace {

std::string trend_tag(const std::vector<double>& sizes) {
  std::string s = "trend(truncations=";
  for (std::size_t i = 0; i < sizes.size(); ++i) s += (i ? "," : "") + format_number(sizes[i]);
  return s + ")";
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::kInvalidArgument, std::string("missing field '") + key + "'");
  return j.at(key);
}

Json bounds_json(const Bounds& b) { return {{"A", num(b.lower)}, {"B", num(b.upper)}}; }

}  // namespace

Json num(double v) { return format_number(v); }

double to_double(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_number(j.get<std::string>());
  throw Error(ErrorKind::kInvalidArgument, "expected a number, got " + j.dump());
}

Vec to_vec(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::kInvalidArgument, "expected an array, got " + j.dump());
  Vec v;
  for (const auto& x : j) v.push_back(to_double(x));
  return v;
}

Json vec_json(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Json to_json(const Box& box) {
  Json a = Json::array();
  for (const auto& s : box.sides()) a.push_back({num(s.lo), num(s.hi)});
  return a;
}

Box box_from_json(const Json& j) {
  std::vector<Interval> sides;
  if (!j.is_array()) throw Error(ErrorKind::kInvalidArgument, "box must be an array of [lo, hi] pairs");
  for (const auto& s : j) {
    const Vec v = to_vec(s);
    if (v.size() != 2) throw Error(ErrorKind::kInvalidArgument, "box side must be [lo, hi]");
    sides.push_back({v[0], v[1]});
  }
  return Box(std::move(sides));
}

Json to_json(const PointPatch& patch) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < patch.size(); ++i) pts.push_back(vec_json(patch.point(i)));
  return {{"dim", patch.dim()}, {"box", to_json(patch.box())}, {"points", pts}};
}

PointPatch patch_from_json(const Json& j) {
  Box box = box_from_json(field(j, "box"));
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != box.dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "patch dim does not match box");
  }
  std::vector<Vec> pts;
  for (const auto& p : field(j, "points")) {
    pts.push_back(to_vec(p));
    if (pts.back().size() != box.dim()) throw Error(ErrorKind::kDimensionMismatch, "point dimension mismatch");
  }
  return PointPatch(std::move(box), pts);
}

Json to_json(const CutProjectScheme& scheme) {
  Json basis = Json::array();
  for (Eigen::Index r = 0; r < scheme.basis.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < scheme.basis.cols(); ++c) row.push_back(num(scheme.basis(r, c)));
    basis.push_back(row);
  }
  Json window = Json::array();
  for (const auto& b : scheme.window.boxes()) window.push_back({{"lo", vec_json(b.lo)}, {"hi", vec_json(b.hi)}});
  return {{"d", scheme.d}, {"m", scheme.m}, {"basis", basis}, {"window", window}};
}

CutProjectScheme scheme_from_json(const Json& j) {
  if (j.contains("preset")) {
    const auto preset = j.at("preset").get<std::string>();
    if (preset == "fibonacci") return fibonacci_scheme(j.contains("half_width") ? to_double(j.at("half_width")) : 0.5);
    if (preset != "lattice") throw Error(ErrorKind::kInvalidArgument, "unknown scheme preset '" + preset + "'");
  }
  const Json& rows = field(j, "basis");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd basis(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Vec row = to_vec(rows[static_cast<std::size_t>(r)]);
    if (static_cast<Eigen::Index>(row.size()) != n) throw Error(ErrorKind::kDimensionMismatch, "basis must be square");
    for (Eigen::Index c = 0; c < n; ++c) basis(r, c) = row[static_cast<std::size_t>(c)];
  }
  if (j.contains("preset")) return lattice_scheme(basis);
  CutProjectScheme s;
  s.d = field(j, "d").get<std::size_t>();
  s.m = field(j, "m").get<std::size_t>();
  s.basis = basis;
  std::vector<WindowBox> boxes;
  if (j.contains("window")) {
    for (const auto& b : j.at("window")) boxes.push_back({to_vec(field(b, "lo")), to_vec(field(b, "hi"))});
  }
  s.window = Window(s.m, std::move(boxes));
  validate(s);
  return s;
}

Json to_json(const KernelSpec& kernel) {
  if (kernel.kind == KernelKind::kPaleyWiener) return {{"kind", "paley_wiener"}, {"band", to_json(kernel.band)}};
  return {{"kind", "gabor_gaussian"}, {"n", kernel.n}, {"convention", kernel.convention == CocycleKind::kMT ? "mt" : "tm"}};
}

KernelSpec kernel_from_json(const Json& j) {
  const auto kind = field(j, "kind").get<std::string>();
  if (kind == "paley_wiener") return paley_wiener(box_from_json(field(j, "band")));
  if (kind == "gabor_gaussian") {
    const std::string conv = j.contains("convention") ? j.at("convention").get<std::string>() : "tm";
    if (conv != "tm" && conv != "mt") throw Error(ErrorKind::kInvalidArgument, "convention must be 'tm' or 'mt'");
    return gabor_gaussian(field(j, "n").get<std::size_t>(), conv == "mt" ? CocycleKind::kMT : CocycleKind::kTM);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown kernel kind '" + kind + "'");
}

Json to_json(const CovolumeBounds& b) {
  return {{"covol_minus", {num(b.covol_minus_lo), num(b.covol_minus_hi)}},
          {"covol_plus", {num(b.covol_plus_lo), num(b.covol_plus_hi)}},
          {"covol_plus_exact", b.covol_plus_exact},
          {"unbounded", b.unbounded}};
}

Json to_json(const DensityReport& r) {
  auto samples = [](const std::vector<DensitySample>& s) {
    Json a = Json::array();
    for (const auto& x : s) a.push_back({{"n", num(x.n)}, {"value", num(x.value)}, {"from_extra", x.from_extra}});
    return a;
  };
  std::vector<double> sizes;
  for (const auto& s : r.lower) sizes.push_back(s.n);
  const std::string trend = trend_tag(sizes);
  Json j = {{"kind", "density_report"},
            {"dim", r.dim},
            {"lower", samples(r.lower)},
            {"upper", samples(r.upper)},
            {"extrapolated_lower", num(r.extrapolated_lower)},
            {"extrapolated_upper", num(r.extrapolated_upper)},
            {"lower_uncertainty", num(r.lower_uncertainty)},
            {"upper_uncertainty", num(r.upper_uncertainty)},
            {"method", r.method_tag},
            {"hull", r.hull},
            {"extra_patches", r.extra_patches},
            {"certified_region_note", r.certified_region_note},
            {"covolume_bounds", r.covolume_bounds ? to_json(*r.covolume_bounds) : Json(nullptr)}};
  j["provenance"] = {{"lower", r.method_tag},
                     {"upper", r.method_tag},
                     {"extrapolated_lower", trend},
                     {"extrapolated_upper", trend},
                     {"lower_uncertainty", trend},
                     {"upper_uncertainty", trend}};
  if (r.covolume_bounds) j["provenance"]["covolume_bounds"] = trend;
  return j;
}

DensityReport density_from_json(const Json& j) {
  if (field(j, "kind") != "density_report") throw Error(ErrorKind::kInvalidArgument, "not a density report");
  DensityReport r;
  r.dim = field(j, "dim").get<std::size_t>();
  auto samples = [](const Json& a, std::vector<DensitySample>& out) {
    for (const auto& x : a) out.push_back({to_double(field(x, "n")), to_double(field(x, "value")), field(x, "from_extra").get<bool>()});
  };
  samples(field(j, "lower"), r.lower);
  samples(field(j, "upper"), r.upper);
  r.extrapolated_lower = to_double(field(j, "extrapolated_lower"));
  r.extrapolated_upper = to_double(field(j, "extrapolated_upper"));
  r.lower_uncertainty = to_double(field(j, "lower_uncertainty"));
  r.upper_uncertainty = to_double(field(j, "upper_uncertainty"));
  r.method_tag = field(j, "method").get<std::string>();
  r.hull = field(j, "hull").get<bool>();
  r.extra_patches = field(j, "extra_patches").get<std::size_t>();
  r.certified_region_note = field(j, "certified_region_note").get<std::string>();
  if (j.contains("covolume_bounds") && !j.at("covolume_bounds").is_null()) {
    const Json& b = j.at("covolume_bounds");
    CovolumeBounds c;
    c.covol_minus_lo = to_double(field(b, "covol_minus")[0]);
    c.covol_minus_hi = to_double(field(b, "covol_minus")[1]);
    c.covol_plus_lo = to_double(field(b, "covol_plus")[0]);
    c.covol_plus_hi = to_double(field(b, "covol_plus")[1]);
    c.covol_plus_exact = field(b, "covol_plus_exact").get<bool>();
    c.unbounded = field(b, "unbounded").get<bool>();
    r.covolume_bounds = c;
  }
  if (r.lower.empty() || r.lower.size() != r.upper.size()) throw Error(ErrorKind::kInvalidArgument, "malformed density report");
  return r;
}

Json to_json(const ErgodicEstimate& e) {
  return {{"covolume", num(e.covolume)},
          {"mean_density", num(e.mean_density)},
          {"translates", e.translates},
          {"provenance", {{"covolume", e.provenance}, {"mean_density", e.provenance}}}};
}

Json to_json(const FrameReport& r) {
  Json trend = Json::array();
  std::vector<double> sizes;
  for (const auto& t : r.trend) {
    sizes.push_back(t.half_width);
    trend.push_back({{"truncation", num(t.half_width)},
                     {"points", t.points},
                     {"riesz", bounds_json(t.riesz)},
                     {"sampling",
                      {{"A", num(t.sampling.lower)},
                       {"B", num(t.sampling.upper)},
                       {"raw_A", num(t.sampling.raw_lower)},
                       {"test_functions", t.sampling.test_functions},
                       {"effective_rank", t.sampling.effective_rank}}}});
  }
  const std::string tag = trend_tag(sizes);
  return {{"kind", "frame_report"},
          {"trend", trend},
          {"riesz_bounds", bounds_json(r.riesz_bounds)},
          {"sampling_bounds", bounds_json(r.sampling_bounds)},
          {"boundary_margin", num(r.boundary_margin)},
          {"frame_trend", to_string(r.frame_trend)},
          {"riesz_trend", to_string(r.riesz_trend)},
          {"verdict", to_string(r.verdict)},
          {"provenance",
           {{"trend", "exact"},
            {"riesz_bounds", "exact"},
            {"sampling_bounds", "exact"},
            {"boundary_margin", "exact"},
            {"frame_trend", tag},
            {"riesz_trend", tag},
            {"verdict", tag}}}};
}

Json to_json(const VerdictReport& v) {
  Json ruled = Json::array();
  for (const auto& s : v.ruled_out) ruled.push_back(s);
  std::vector<double> sizes;
  for (const auto& s : v.density.lower) sizes.push_back(s.n);
  const std::string tag = trend_tag(sizes);
  return {{"kind", "verdict_report"},
          {"critical_density", num(v.critical_density)},
          {"density", to_json(v.density)},
          {"covol_bounds", to_json(v.covol_bounds)},
          {"ell", v.ell},
          {"tol_lower", num(v.tol_lower)},
          {"tol_upper", num(v.tol_upper)},
          {"necessary_sampling_ok", v.necessary_sampling_ok},
          {"necessary_interpolation_ok", v.necessary_interpolation_ok},
          {"covolume_sampling_ok", v.covolume_sampling_ok},
          {"covolume_interpolation_ok", v.covolume_interpolation_ok},
          {"ruled_out", ruled},
          {"notes", v.notes},
          {"provenance",
           {{"critical_density", "exact"},
            {"covol_bounds", tag},
            {"tol_lower", tag},
            {"tol_upper", tag},
            {"necessary_sampling_ok", tag},
            {"necessary_interpolation_ok", tag}}}};
}

Json to_json(const WeilResult& w) {
  const std::string tag = "quadrature(n=" + std::to_string(w.quadrature_n) + ")";
  return {{"kind", "weil_check"},
          {"lhs", num(w.lhs)},
          {"rhs", num(w.rhs)},
          {"residual", num(w.residual)},
          {"provenance", {{"lhs", tag}, {"rhs", tag}, {"residual", tag}}}};
}

Json spectrum_json(const Spectrum& s) {
  return {{"kind", "spectrum"},
          {"eigenvalues", vec_json(s.eigenvalues)},
          {"tolerance", num(s.tolerance)},
          {"rank", s.rank},
          {"provenance", {{"eigenvalues", "exact"}, {"tolerance", "exact"}}}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 15];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

}  // namespace aperio
