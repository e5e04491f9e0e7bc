#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

namespace lgset::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    require_object(j, path);
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (!ok.count(key)) throw ConfigError(join(path, key), "unknown key");
}

double as_double(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
    return v;
}

double as_positive(const json& j, const std::string& path) {
    const double v = as_double(j, path);
    if (!(v > 0.0)) throw ConfigError(path, "must be positive");
    return v;
}

long long as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<long long>();
}

int as_small_int(const json& j, const std::string& path, long long lo, long long hi) {
    const long long v = as_int(j, path);
    if (v < lo || v > hi) {
        std::ostringstream msg;
        msg << "must lie in [" << lo << ", " << hi << "]";
        throw ConfigError(path, msg.str());
    }
    return static_cast<int>(v);
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
    return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

/// {"radius": "<len>"} or {"diameter": "<len>"}; returns the radius.
double parse_waist(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected {\"radius\": \"<length>\"} or {\"diameter\": \"<length>\"}");
    check_keys(j, path, {"radius", "diameter"});
    const bool has_r = j.contains("radius");
    const bool has_d = j.contains("diameter");
    if (has_r == has_d) throw ConfigError(path, "give exactly one of radius or diameter");
    if (has_r) return parse_length(as_string(j["radius"], join(path, "radius")), join(path, "radius"));
    return 0.5 * parse_length(as_string(j["diameter"], join(path, "diameter")), join(path, "diameter"));
}

double parse_length_key(const json& j, const std::string& path) { return parse_length(as_string(j, path), path); }

LRange parse_l_range(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected [lo, hi]");
    LRange r{as_small_int(j[0], path + "[0]", -200, 200), as_small_int(j[1], path + "[1]", -200, 200)};
    if (r.empty()) {
        std::ostringstream msg;
        msg << "empty range [" << r.lo << ", " << r.hi << "]";
        throw ConfigError(path, msg.str());
    }
    return r;
}

std::vector<double> parse_gamma_list(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nonempty array of positive numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(as_positive(j[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

std::vector<LGIndex> parse_modes(const json& j, const std::string& path) {
    std::vector<LGIndex> modes;
    if (j.is_object()) {
        check_keys(j, path, {"l_range", "p"});
        if (!j.contains("l_range")) throw ConfigError(join(path, "l_range"), "required");
        const auto r = parse_l_range(j["l_range"], join(path, "l_range"));
        const int p = j.contains("p") ? as_small_int(j["p"], join(path, "p"), 0, 100) : 0;
        for (int l = r.lo; l <= r.hi; ++l) modes.emplace_back(l, p);
    } else if (j.is_array() && !j.empty()) {
        for (std::size_t k = 0; k < j.size(); ++k) {
            const std::string at = path + "[" + std::to_string(k) + "]";
            if (!j[k].is_array() || j[k].size() != 2) throw ConfigError(at, "expected [l, p]");
            modes.emplace_back(as_small_int(j[k][0], at + "[0]", -200, 200), as_small_int(j[k][1], at + "[1]", 0, 100));
        }
    } else {
        throw ConfigError(path, "expected {\"l_range\": [lo, hi], \"p\": n} or a nonempty list of [l, p]");
    }
    return modes;
}

void parse_geometry(const json& j, RunConfig& cfg) {
    const std::string path = "geometry";
    check_keys(j, path,
               {"pump_waist", "signal_waist", "idler_waist", "gamma_signal", "gamma_idler", "pump_wavelength",
                "signal_wavelength", "idler_wavelength", "crystal_length"});
    auto& g = cfg.geometry;
    if (j.contains("pump_waist")) g.pump_waist = parse_waist(j["pump_waist"], join(path, "pump_waist"));

    const bool by_waist = j.contains("signal_waist") || j.contains("idler_waist");
    const bool by_gamma = j.contains("gamma_signal") || j.contains("gamma_idler");
    if (by_waist && by_gamma)
        throw ConfigError(path, "give signal/idler waists or gamma_signal/gamma_idler, not both");
    if (by_gamma) {
        if (!j.contains("gamma_signal") || !j.contains("gamma_idler"))
            throw ConfigError(path, "gamma_signal and gamma_idler must be given together");
        const double gs = as_positive(j["gamma_signal"], join(path, "gamma_signal"));
        const double gi = as_positive(j["gamma_idler"], join(path, "gamma_idler"));
        g.signal_waist = g.pump_waist / gs;
        g.idler_waist = g.pump_waist / gi;
        cfg.geometry_from_gammas = true;
    } else {
        if (j.contains("signal_waist")) g.signal_waist = parse_waist(j["signal_waist"], join(path, "signal_waist"));
        if (j.contains("idler_waist")) g.idler_waist = parse_waist(j["idler_waist"], join(path, "idler_waist"));
    }
    if (j.contains("pump_wavelength")) g.pump_wavelength = parse_length_key(j["pump_wavelength"], join(path, "pump_wavelength"));
    if (j.contains("signal_wavelength"))
        g.signal_wavelength = parse_length_key(j["signal_wavelength"], join(path, "signal_wavelength"));
    if (j.contains("idler_wavelength"))
        g.idler_wavelength = parse_length_key(j["idler_wavelength"], join(path, "idler_wavelength"));
    if (j.contains("crystal_length")) g.crystal_length = parse_length_key(j["crystal_length"], join(path, "crystal_length"));
}

void parse_jsmd(const json& j, RunConfig& cfg) {
    check_keys(j, "jsmd", {"l_range", "p_s", "p_i", "normalization"});
    if (j.contains("l_range")) cfg.l_range = parse_l_range(j["l_range"], "jsmd.l_range");
    if (j.contains("p_s")) cfg.p_s = as_small_int(j["p_s"], "jsmd.p_s", 0, 100);
    if (j.contains("p_i")) cfg.p_i = as_small_int(j["p_i"], "jsmd.p_i", 0, 100);
    if (j.contains("normalization")) {
        try {
            cfg.normalization = parse_normalization(as_string(j["normalization"], "jsmd.normalization"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("jsmd.normalization", e.what());
        }
    }
}

void parse_spectrum(const json& j, RunConfig& cfg) {
    check_keys(j, "spectrum", {"l", "gammas", "sweep"});
    if (j.contains("l")) {
        const auto& a = j["l"];
        if (!a.is_array() || a.empty()) throw ConfigError("spectrum.l", "expected a nonempty array of integers");
        cfg.spectrum_l.clear();
        for (std::size_t k = 0; k < a.size(); ++k)
            cfg.spectrum_l.push_back(as_small_int(a[k], "spectrum.l[" + std::to_string(k) + "]", -200, 200));
    }
    if (j.contains("gammas")) cfg.spectrum_gammas = parse_gamma_list(j["gammas"], "spectrum.gammas");
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        check_keys(s, "spectrum.sweep", {"from", "to", "steps"});
        GammaSweep sweep;
        if (s.contains("from")) sweep.from = as_positive(s["from"], "spectrum.sweep.from");
        if (s.contains("to")) sweep.to = as_positive(s["to"], "spectrum.sweep.to");
        if (s.contains("steps")) sweep.steps = as_small_int(s["steps"], "spectrum.sweep.steps", 2, 1000000);
        if (!(sweep.to > sweep.from)) throw ConfigError("spectrum.sweep", "requires to > from");
        cfg.spectrum_sweep = sweep;
    }
}

void parse_quadrature(const json& j, RunConfig& cfg) {
    check_keys(j, "quadrature", {"radial_nodes", "truncation_radius_factor", "azimuthal_nodes", "target_rel_tol"});
    auto& q = cfg.quadrature;
    if (j.contains("radial_nodes")) q.radial_nodes = as_small_int(j["radial_nodes"], "quadrature.radial_nodes", 8, 1 << 20);
    if (j.contains("truncation_radius_factor")) {
        q.truncation_radius_factor = as_double(j["truncation_radius_factor"], "quadrature.truncation_radius_factor");
        if (q.truncation_radius_factor < 4.0) throw ConfigError("quadrature.truncation_radius_factor", "must be >= 4");
    }
    if (j.contains("azimuthal_nodes"))
        q.azimuthal_nodes = as_small_int(j["azimuthal_nodes"], "quadrature.azimuthal_nodes", 1, 1 << 20);
    if (j.contains("target_rel_tol")) {
        q.target_rel_tol = as_double(j["target_rel_tol"], "quadrature.target_rel_tol");
        if (!(q.target_rel_tol > 0.0 && q.target_rel_tol < 1.0))
            throw ConfigError("quadrature.target_rel_tol", "must lie in (0, 1)");
    }
}

void parse_validation(const json& j, RunConfig& cfg) {
    check_keys(j, "validation", {"l_max", "p_max", "gammas", "tolerance"});
    if (j.contains("l_max")) cfg.validate_l_max = as_small_int(j["l_max"], "validation.l_max", 0, 100);
    if (j.contains("p_max")) cfg.validate_p_max = as_small_int(j["p_max"], "validation.p_max", 0, 30);
    if (j.contains("gammas")) cfg.validate_gammas = parse_gamma_list(j["gammas"], "validation.gammas");
    if (j.contains("tolerance")) cfg.validate_tolerance = as_positive(j["tolerance"], "validation.tolerance");
}

void parse_experiment(const json& j, RunConfig& cfg) {
    const std::string path = "experiment";
    check_keys(j, path,
               {"seed_modes", "projection_modes", "fiber_waist", "aperture", "window_seconds", "n_windows",
                "n_dark_trials", "peak_rate_hz", "dark_rate_hz", "rng_seed", "calibrated", "allow_extended"});
    auto& e = cfg.experiment;
    if (j.contains("seed_modes")) e.seed_modes = parse_modes(j["seed_modes"], join(path, "seed_modes"));
    if (j.contains("projection_modes")) e.projection_modes = parse_modes(j["projection_modes"], join(path, "projection_modes"));
    if (j.contains("fiber_waist")) e.fiber_waist = parse_waist(j["fiber_waist"], join(path, "fiber_waist"));
    if (j.contains("aperture")) e.aperture_radius = parse_waist(j["aperture"], join(path, "aperture"));
    if (j.contains("window_seconds")) e.window_seconds = as_positive(j["window_seconds"], join(path, "window_seconds"));
    if (j.contains("n_windows")) e.n_windows = as_small_int(j["n_windows"], join(path, "n_windows"), 1, 1 << 24);
    if (j.contains("n_dark_trials"))
        e.n_dark_trials = as_small_int(j["n_dark_trials"], join(path, "n_dark_trials"), 1, 1 << 24);
    if (j.contains("peak_rate_hz")) e.peak_rate_hz = as_positive(j["peak_rate_hz"], join(path, "peak_rate_hz"));
    if (j.contains("dark_rate_hz")) {
        e.dark_rate_hz = as_double(j["dark_rate_hz"], join(path, "dark_rate_hz"));
        if (e.dark_rate_hz < 0.0) throw ConfigError(join(path, "dark_rate_hz"), "must be non-negative");
    }
    if (j.contains("rng_seed")) {
        const auto& s = j["rng_seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            throw ConfigError(join(path, "rng_seed"), "expected a non-negative integer");
        e.rng_seed = s.get<std::uint64_t>();
    }
    if (j.contains("calibrated")) e.calibrated = as_bool(j["calibrated"], join(path, "calibrated"));
    if (j.contains("allow_extended")) e.allow_extended = as_bool(j["allow_extended"], join(path, "allow_extended"));
}

void parse_output(const json& j, RunConfig& cfg) {
    check_keys(j, "output", {"dir", "format"});
    if (j.contains("dir")) cfg.out_dir = as_string(j["dir"], "output.dir");
    if (j.contains("format")) {
        try {
            cfg.format = parse_output_format(as_string(j["format"], "output.format"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("output.format", e.what());
        }
    }
}

}  // namespace

OutputFormat parse_output_format(const std::string& text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    if (text == "both") return OutputFormat::Both;
    throw std::invalid_argument("unknown format '" + text + "' (expected csv, json or both)");
}

std::vector<double> GammaSweep::grid() const {
    std::vector<double> g(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) g[k] = from + (to - from) * k / (steps - 1);
    return g;
}

double parse_length(const std::string& text, const std::string& field) {
    std::istringstream in(text);
    double value = 0.0;
    std::string unit;
    if (!(in >> value)) throw ConfigError(field, "expected \"<number> <unit>\", got \"" + text + "\"");
    in >> unit;
    std::string rest;
    if (in >> rest) throw ConfigError(field, "trailing text in length \"" + text + "\"");
    double scale = 0.0;
    if (unit == "m") scale = 1.0;
    else if (unit == "mm") scale = 1e-3;
    else if (unit == "um" || unit == "\xC2\xB5m") scale = 1e-6;
    else if (unit == "nm") scale = 1e-9;
    else if (unit.empty()) throw ConfigError(field, "length \"" + text + "\" has no unit (use m, mm, um or nm)");
    else throw ConfigError(field, "unknown length unit \"" + unit + "\" (use m, mm, um or nm)");
    if (!std::isfinite(value) || !(value > 0.0)) throw ConfigError(field, "length must be positive");
    return value * scale;
}

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.geometry.pump_waist = 1.0e-3;
    cfg.geometry.signal_waist = 0.675e-3;
    cfg.geometry.idler_waist = 0.675e-3;
    cfg.experiment = SetExperimentConfig::with_defaults(cfg.geometry);
    cfg.experiment.rng_seed = 0;
    return cfg;
}

RunConfig parse_run_config(const json& doc) {
    RunConfig cfg = default_run_config();
    check_keys(doc, "",
               {"geometry", "jsmd", "spectrum", "quadrature", "validation", "experiment", "thin_crystal", "output",
                "threads"});
    if (doc.contains("geometry")) parse_geometry(doc["geometry"], cfg);
    if (doc.contains("jsmd")) parse_jsmd(doc["jsmd"], cfg);
    if (doc.contains("spectrum")) parse_spectrum(doc["spectrum"], cfg);
    if (doc.contains("quadrature")) parse_quadrature(doc["quadrature"], cfg);
    if (doc.contains("validation")) parse_validation(doc["validation"], cfg);
    if (doc.contains("experiment")) parse_experiment(doc["experiment"], cfg);
    if (doc.contains("thin_crystal")) {
        check_keys(doc["thin_crystal"], "thin_crystal", {"threshold"});
        if (doc["thin_crystal"].contains("threshold"))
            cfg.thin_crystal_threshold = as_positive(doc["thin_crystal"]["threshold"], "thin_crystal.threshold");
    }
    if (doc.contains("output")) parse_output(doc["output"], cfg);
    if (doc.contains("threads")) cfg.threads = static_cast<unsigned>(as_small_int(doc["threads"], "threads", 1, 1024));

    try {
        cfg.geometry.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("geometry", e.what());
    }
    cfg.experiment.geometry = cfg.geometry;
    cfg.experiment.quadrature = cfg.quadrature;
    cfg.experiment.threads = cfg.threads;
    if (cfg.experiment.seed_modes.empty() || cfg.experiment.projection_modes.empty()) {
        const auto defaults = SetExperimentConfig::with_defaults(cfg.geometry);
        if (cfg.experiment.seed_modes.empty()) cfg.experiment.seed_modes = defaults.seed_modes;
        if (cfg.experiment.projection_modes.empty()) cfg.experiment.projection_modes = defaults.projection_modes;
    }
    if (!cfg.experiment.allow_extended)
        for (const auto& m : cfg.experiment.seed_modes)
            if (m.p() > 0) throw ConfigError("experiment.seed_modes", "p > 0 seeds need experiment.allow_extended = true");
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    return parse_run_config(doc);
}

}  // namespace lgset::cli
