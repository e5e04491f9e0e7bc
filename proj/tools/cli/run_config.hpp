#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lgset/analytic.hpp"
#include "lgset/lg_modes.hpp"
#include "lgset/set_sim.hpp"

namespace lgset::cli {

/// Bad configuration; `field()` is the dotted path of the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class OutputFormat { Csv, Json, Both };

OutputFormat parse_output_format(const std::string& text);

struct GammaSweep {
    double from = 0.5;
    double to = 4.0;
    int steps = 36;

    std::vector<double> grid() const;
};

struct RunConfig {
    BeamGeometry geometry;
    bool geometry_from_gammas = false;

    // jsmd
    LRange l_range;
    int p_s = 0;
    int p_i = 0;
    Normalization normalization = Normalization::GlobalMax;

    // spectrum
    std::vector<int> spectrum_l{0, 1, 2, 3, 4, 5, 6};
    std::vector<double> spectrum_gammas;  // empty: use the geometry's gamma_signal
    std::optional<GammaSweep> spectrum_sweep;

    QuadratureConfig quadrature;

    // validate
    int validate_l_max = 6;
    int validate_p_max = 2;
    std::vector<double> validate_gammas{0.5, 1.0, 2.03, 3.05};
    double validate_tolerance = 1e-6;

    SetExperimentConfig experiment;

    double thin_crystal_threshold = kThinCrystalThreshold;

    std::filesystem::path out_dir = ".";
    OutputFormat format = OutputFormat::Both;
    unsigned threads = 1;
};

/// Length string "<number> <unit>", unit one of m, mm, um, nm. Returns metres.
double parse_length(const std::string& text, const std::string& field);

/// Builds a RunConfig from a parsed document. Every key is checked; unknown
/// keys, missing units and bad values throw ConfigError.
RunConfig parse_run_config(const nlohmann::json& doc);

RunConfig load_run_config(const std::filesystem::path& path);

/// Defaults: 2 mm pump waist diameter, 1.35 mm signal/idler waist
/// diameters, 405/780/842 nm, 2 mm crystal.
RunConfig default_run_config();

}  // namespace lgset::cli
