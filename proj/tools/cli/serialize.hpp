#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lgset/analytic.hpp"
#include "lgset/oracle.hpp"
#include "lgset/set_sim.hpp"

namespace lgset::cli {

std::string_view tool_version();

/// 15 significant digits, "%.15g".
std::string format_number(double value);

/// Writes to a sibling temporary and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string jsmd_csv(const JsmdMatrix& m, const BeamGeometry& geometry);
nlohmann::json jsmd_json(const JsmdMatrix& m, const BeamGeometry& geometry);

/// Long table: gamma,l,weight, one row per (gamma, l), gamma-major.
std::string spectrum_csv(const std::vector<SpectrumCurve>& curves);
/// One row per gamma, one column per l.
std::string spectrum_wide_csv(const std::vector<SpectrumCurve>& curves);
nlohmann::json spectrum_json(const std::vector<SpectrumCurve>& curves);

std::string validation_csv(const ValidationReport& r);
nlohmann::json validation_json(const ValidationReport& r);

/// "l" for p = 0, otherwise "l/p".
std::string mode_label(const LGIndex& m);

/// Normalized estimate; rows seed modes, columns projection modes.
std::string simulate_csv(const EstimatedJsmd& e, const SetExperimentConfig& config);
/// Full per-cell record plus the closed-form reference for each cell,
/// normalized to its maximum over the same grid.
nlohmann::json simulate_json(const EstimatedJsmd& e, const SetExperimentConfig& config);

/// Parses a numeric CSV grid back (comment lines and the header skipped,
/// first column dropped).
std::vector<std::vector<double>> parse_csv_grid(std::string_view text);

}  // namespace lgset::cli
