#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "aperio/density.hpp"
#include "aperio/error.hpp"
#include "aperio/experiment.hpp"
#include "aperio/format.hpp"
#include "aperio/io.hpp"
#include "support.hpp"

using namespace aperio;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("aperio_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json pipeline_config(const std::string& workspace) {
  return Json::parse(R"({
    "seed": "7",
    "workspace": ")" + workspace + R"(",
    "steps": [
      {"command": "gen", "params": {"scheme": {"preset": "fibonacci", "half_width": 0.5},
                                    "box": [["-200", "200"]], "out": "patch.json"}},
      {"command": "density", "params": {"patch": "patch.json", "sizes": [25, 50, 100], "ell": 1,
                                        "out": "density.json", "csv": "density.csv"}},
      {"command": "verdict", "params": {"kernel": {"kind": "paley_wiener", "band": [["-0.5", "0.5"]]},
                                        "density": "density.json", "out": "verdict.json"}},
      {"command": "hull-sample", "params": {"patch": "patch.json", "k_box": [["-3", "3"]],
                                            "translates": {"random": 20}, "out": "orbit.json"}}
    ]})");
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(APERIO_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Format, NumbersRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(parse_number(format_number(v)), v);
  }
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_TRUE(std::isnan(parse_number("nan")));
  EXPECT_THROW(parse_number("1.5x"), Error);
}

TEST(Io, PatchRoundTrip) {
  std::mt19937_64 rng(8);
  const auto p = testing_support::random_patch(rng, Box::centered_cube(2, 3), 40);
  const Json j = to_json(p);
  EXPECT_EQ(patch_from_json(Json::parse(j.dump())), p);
}

TEST(Io, DensityReportRoundTrip) {
  const auto r = beurling_density(testing_support::lattice_1d(0.5, 50), {{5, 10, 20}});
  const Json j = to_json(r);
  EXPECT_EQ(to_json(density_from_json(Json::parse(j.dump()))), j);
}

TEST(Csv, DensityColumnsAndFormat) {
  const Json j = to_json(beurling_density(testing_support::lattice_1d(0.5, 50), {{5, 10}}));
  EXPECT_EQ(csv_columns(j), (std::vector<std::string>{"n", "inf", "sup"}));
  const std::string csv = emit_csv(j, {"n", "sup"});
  EXPECT_EQ(csv.substr(0, 7), "n,sup\r\n");
  EXPECT_NE(csv.find("5,2.1\r\n"), std::string::npos);
  EXPECT_EQ(csv.back(), '\n');
}

TEST(Csv, UnknownColumnListsValidOnes) {
  const Json j = to_json(beurling_density(testing_support::lattice_1d(1, 30), {{5}}));
  try {
    emit_csv(j, {"n", "bogus"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnknownColumn);
    EXPECT_NE(std::string(e.what()).find("n, inf, sup"), std::string::npos);
  }
}

TEST(Csv, SpectrumAndFrameViews) {
  const Json spec = spectrum_json(spectrum(build_gram(paley_wiener_symmetric(1, 1), testing_support::lattice_1d(1, 3))));
  const std::string s = emit_csv(spec, {});
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 8);
  const Json fr = to_json(frame_report(paley_wiener_symmetric(1, 1), testing_support::lattice_1d(0.5, 40), {10, 20, 40}));
  EXPECT_EQ(csv_columns(fr).size(), 7u);
  EXPECT_EQ(emit_csv(fr, {"truncation"}), "truncation\r\n10\r\n20\r\n40\r\n");
}

TEST(Run, PipelineWritesReportsWithMeta) {
  const fs::path dir = fresh_dir("pipeline");
  std::ostringstream log;
  ASSERT_EQ(run(parse_config(pipeline_config(dir.string()), "/"), log), 0) << log.str();
  for (const char* f : {"patch.json", "density.json", "density.csv", "verdict.json", "orbit.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const Json d = read_json_file(dir / "density.json");
  EXPECT_EQ(d.at("meta").at("tool"), "aperio");
  EXPECT_EQ(d.at("meta").at("seed"), "7");
  EXPECT_EQ(d.at("meta").at("inputs").at("patch"), sha256_file(dir / "patch.json"));
  const Json v = read_json_file(dir / "verdict.json");
  EXPECT_EQ(v.at("ruled_out"), Json::array({"sampling"}));
  fs::remove_all(dir);
}

TEST(Run, SameSeedIsByteIdentical) {
  const fs::path a = fresh_dir("a"), b = fresh_dir("b");
  std::ostringstream log;
  Json ca = pipeline_config(a.string()), cb = pipeline_config(b.string());
  ASSERT_EQ(run(parse_config(ca, "/"), log), 0);
  ASSERT_EQ(run(parse_config(cb, "/"), log), 0);
  for (const char* f : {"patch.json", "density.json", "density.csv", "verdict.json", "orbit.json"}) {
    std::string sa = slurp(a / f), sb = slurp(b / f);
    // The workspace path appears nowhere in reports.
    EXPECT_EQ(sa, sb) << f;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, MissingInputIsConfigErrorAndWritesNothing) {
  const fs::path dir = fresh_dir("missing");
  Json c = pipeline_config(dir.string());
  c["steps"].erase(0);
  std::ostringstream log;
  EXPECT_EQ(run(parse_config(c, "/"), log), 2);
  EXPECT_TRUE(fs::is_empty(dir));
  EXPECT_NE(log.str().find("patch.json"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Run, UnknownCommandAndBadProfileRejected) {
  EXPECT_THROW(parse_config(Json::parse(R"({"steps":[{"command":"nope","params":{"out":"x"}}]})"), "/"), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"tolerance_profile":"loose","steps":[]})"), "/"), ConfigError);
}

TEST(Run, OperationErrorExitsOne) {
  const fs::path dir = fresh_dir("operr");
  Json c = pipeline_config(dir.string());
  c["steps"][1]["params"]["sizes"] = Json::array({25, 1000});
  std::ostringstream log;
  EXPECT_EQ(run(parse_config(c, "/"), log), 1);
  EXPECT_NE(log.str().find("max feasible n"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Binary, ExitCodes) {
  const fs::path dir = fresh_dir("bin");
  const std::string ws = "--workspace " + dir.string();
  EXPECT_EQ(run_binary(ws + " density --patch absent.json --folner 5 --out d.json"), 2);
  EXPECT_EQ(run_binary("--no-such-flag"), 2);
  std::ofstream(dir / "scheme.json") << R"({"preset": "fibonacci", "half_width": 0.5})";
  EXPECT_EQ(run_binary(ws + " gen --scheme scheme.json --box -50 50 --out p.json"), 0);
  EXPECT_EQ(run_binary(ws + " density --patch p.json --folner 5,10 --out d.json --csv d.csv"), 0);
  EXPECT_EQ(run_binary(ws + " density --patch p.json --folner 500 --out e.json"), 1);
  EXPECT_EQ(run_binary(ws + " csv --report d.json --columns n,zzz"), 1);
  EXPECT_EQ(run_binary(ws + " csv --report d.json --columns n,inf --out view.csv"), 0);
  EXPECT_EQ(slurp(dir / "view.csv").substr(0, 7), "n,inf\r\n");
  std::ofstream(dir / "cfg.json") << pipeline_config(".").dump();
  EXPECT_EQ(run_binary(ws + " run --config " + (dir / "cfg.json").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "verdict.json"));
  fs::remove_all(dir);
}
