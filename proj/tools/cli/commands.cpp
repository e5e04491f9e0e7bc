#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <ostream>

#include "lgset/errors.hpp"
#include "serialize.hpp"

namespace lgset::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool want_csv(const RunConfig& c) { return c.format != OutputFormat::Json; }
bool want_json(const RunConfig& c) { return c.format != OutputFormat::Csv; }

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class OutputSet {
public:
    OutputSet(const RunConfig& config, std::string command) : config_(config), command_(std::move(command)) {}

    void text(const std::string& name, const std::string& content) {
        write_file_atomic(config_.out_dir / name, content);
        written_.push_back(name);
    }
    void document(const std::string& name, const json& doc) { text(name, doc.dump(2) + "\n"); }

    void finish(const CommandOptions& options, std::ostream& out, json extra = json::object()) {
        if (options.write_metadata) {
            extra["command"] = command_;
            extra["tool"] = {{"name", "lgset"}, {"version", tool_version()}};
            extra["timestamp_utc"] = utc_timestamp();
            extra["files"] = written_;
            write_file_atomic(config_.out_dir / (command_ + ".meta.json"), extra.dump(2) + "\n");
        }
        for (const auto& f : written_) out << "wrote " << (config_.out_dir / f).string() << "\n";
    }

private:
    const RunConfig& config_;
    std::string command_;
    std::vector<std::string> written_;
};

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"jsmd", "spectrum", "validate", "simulate", "thin-crystal"};
    return names;
}

int cmd_jsmd(const RunConfig& config, const CommandOptions& options, std::ostream& out) {
    if (config.l_range.empty()) throw ConfigError("jsmd.l_range", "empty range");
    const auto m = jsmd_matrix(config.l_range, config.p_s, config.p_i, config.geometry, config.normalization);
    for (double v : m.values)
        if (!std::isfinite(v)) throw std::runtime_error("non-finite JSMD entry");
    OutputSet files(config, "jsmd");
    if (want_csv(config)) files.text("jsmd.csv", jsmd_csv(m, config.geometry));
    if (want_json(config)) files.document("jsmd.json", jsmd_json(m, config.geometry));
    files.finish(options, out);
    return kExitOk;
}

int cmd_spectrum(const RunConfig& config, const CommandOptions& options, std::ostream& out) {
    std::vector<double> gammas;
    if (config.spectrum_sweep) gammas = config.spectrum_sweep->grid();
    else if (!config.spectrum_gammas.empty()) gammas = config.spectrum_gammas;
    else gammas = {config.geometry.gamma_signal()};
    const auto curves = spectrum_vs_gamma(config.spectrum_l, gammas);
    OutputSet files(config, "spectrum");
    if (want_csv(config)) {
        files.text("spectrum.csv", spectrum_csv(curves));
        if (config.spectrum_sweep) files.text("spectrum_wide.csv", spectrum_wide_csv(curves));
    }
    if (want_json(config)) files.document("spectrum.json", spectrum_json(curves));
    files.finish(options, out);
    return kExitOk;
}

int cmd_validate(const RunConfig& config, const CommandOptions& options, std::ostream& out) {
    const auto report = validate_against_analytic(config.validate_l_max, config.validate_p_max, config.validate_gammas,
                                                  config.validate_tolerance, config.quadrature, config.threads);
    OutputSet files(config, "validate");
    if (want_csv(config)) files.text("validation.csv", validation_csv(report));
    if (want_json(config)) files.document("validation.json", validation_json(report));
    files.finish(options, out);
    out << "max deviation " << format_number(report.max_deviation) << " (tolerance "
        << format_number(report.tolerance) << "), off-antidiagonal nonzero " << report.off_antidiagonal_nonzero << "/"
        << report.off_antidiagonal_checked << ": " << (report.pass ? "PASS" : "FAIL") << "\n";
    return report.pass ? kExitOk : kExitValidation;
}

int cmd_simulate(const RunConfig& config, const CommandOptions& options, std::ostream& out) {
    const auto estimate = estimate_jsmd(config.experiment);
    OutputSet files(config, "simulate");
    if (want_csv(config)) files.text("simulate.csv", simulate_csv(estimate, config.experiment));
    if (want_json(config)) files.document("simulate.json", simulate_json(estimate, config.experiment));
    files.finish(options, out, {{"rng_seed", config.experiment.rng_seed}});
    out << "rng_seed " << config.experiment.rng_seed << "\n";
    return kExitOk;
}

int cmd_thin_crystal(const RunConfig& config, const CommandOptions&, std::ostream& out) {
    const auto& g = config.geometry;
    const double figure = thin_crystal_figure(g);
    const bool valid = figure > config.thin_crystal_threshold;
    BeamGeometry as_diameter = g;
    as_diameter.pump_waist = 0.5 * g.pump_waist;
    out << "w_p/sqrt(lambda_p L) = " << format_number(std::round(figure * 1e4) / 1e4) << " (w_p = "
        << format_number(g.pump_waist * 1e3) << " mm radius, lambda_p = " << format_number(g.pump_wavelength * 1e9)
        << " nm, L = " << format_number(g.crystal_length * 1e3) << " mm), threshold "
        << format_number(config.thin_crystal_threshold) << ": " << (valid ? "valid" : "invalid") << "\n";
    out << "note: if the stated " << format_number(g.pump_waist * 1e3) << " mm were a diameter the figure would be "
        << format_number(std::round(thin_crystal_figure(as_diameter) * 100) / 100)
        << "; the value 94.8 sometimes quoted for a 2 mm / 405 nm / 2 mm setup matches neither reading"
           " (70.27 as radius, 35.14 as diameter)\n";
    return kExitOk;
}

int run_command(const std::string& name, const RunConfig& config, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
    try {
        if (name == "jsmd") return cmd_jsmd(config, options, out);
        if (name == "spectrum") return cmd_spectrum(config, options, out);
        if (name == "validate") return cmd_validate(config, options, out);
        if (name == "simulate") return cmd_simulate(config, options, out);
        if (name == "thin-crystal") return cmd_thin_crystal(config, options, out);
        err << "error: unknown command '" << name << "'\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const QuadratureNotConverged& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace lgset::cli
