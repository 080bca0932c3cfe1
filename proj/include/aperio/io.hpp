#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "aperio/cutproject.hpp"
#include "aperio/density.hpp"
#include "aperio/framekit.hpp"
#include "aperio/hull.hpp"
#include "aperio/pointset.hpp"
#include "aperio/rkhs.hpp"

namespace aperio {

using Json = nlohmann::json;

/// Reals are written as shortest round-trip decimal strings; readers accept
/// JSON numbers or such strings.
Json num(double v);
double to_double(const Json& j);
Vec to_vec(const Json& j);
Json vec_json(std::span<const double> v);

Json to_json(const Box& box);
Box box_from_json(const Json& j);

Json to_json(const PointPatch& patch);
PointPatch patch_from_json(const Json& j);

Json to_json(const CutProjectScheme& scheme);
/// Accepts the full form or the presets {"preset":"fibonacci","half_width":h}
/// and {"preset":"lattice","basis":[[...]]}.
CutProjectScheme scheme_from_json(const Json& j);

Json to_json(const KernelSpec& kernel);
KernelSpec kernel_from_json(const Json& j);

Json to_json(const DensityReport& report);
DensityReport density_from_json(const Json& j);

Json to_json(const CovolumeBounds& b);
Json to_json(const ErgodicEstimate& e);
Json to_json(const FrameReport& report);
Json to_json(const VerdictReport& report);
Json to_json(const WeilResult& result);
Json spectrum_json(const Spectrum& spec);

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline; keys are sorted, so equal values
/// give byte-identical files.
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& j);

/// Lowercase hex SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace aperio
