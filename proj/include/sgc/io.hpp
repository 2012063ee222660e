#pragma once

#include "sgc/bundle.hpp"
#include "sgc/calibration.hpp"
#include "sgc/metrics.hpp"
#include "sgc/perturb.hpp"
#include "sgc/synth.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sgc {

inline constexpr int kBundleFormatVersion = 1;

/// Writes manifest.json plus little-endian binary rasters into dir (created if needed).
void write_bundle(const GeometryBundle& bundle, const std::filesystem::path& dir);

/// Reads and validates a bundle directory; throws Error(schema | io) naming the file and field.
GeometryBundle read_bundle(const std::filesystem::path& dir);

nlohmann::json to_json(const CalibrationParams& params);
CalibrationParams calibration_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PairMetrics& pm);
nlohmann::json to_json(const EcdValue& e);
nlohmann::json to_json(const SgcReport& report);

nlohmann::json to_json(const PerturbSpec& spec);
PerturbSpec perturb_spec_from_json(const nlohmann::json& j, const PerturbParams& defaults = {});

SceneSpec scene_spec_from_json(const nlohmann::json& j);

nlohmann::json error_json(const std::exception& e, const std::string& context = {});

/// Run-level settings; JSON keys and CLI flags share these names.
struct RunConfig {
    ScoringConfig scoring;
    PerturbParams perturb_defaults;
    std::string profile;  // optional weight profile override for scoring / calibration
    std::string output;   // output path; empty = stdout

    void validate() const { scoring.validate(); }
};

/// Applies keys present in j onto cfg; unknown keys are rejected.
void apply_config_json(RunConfig& cfg, const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sgc
