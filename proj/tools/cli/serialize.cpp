#include "serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#ifndef LGSET_VERSION
#define LGSET_VERSION "unknown"
#endif

namespace lgset::cli {

using nlohmann::json;

namespace {

json geometry_json(const BeamGeometry& g) {
    return {{"pump_waist_radius_m", g.pump_waist},
            {"signal_waist_radius_m", g.signal_waist},
            {"idler_waist_radius_m", g.idler_waist},
            {"pump_wavelength_m", g.pump_wavelength},
            {"signal_wavelength_m", g.signal_wavelength},
            {"idler_wavelength_m", g.idler_wavelength},
            {"crystal_length_m", g.crystal_length},
            {"gamma_signal", g.gamma_signal()},
            {"gamma_idler", g.gamma_idler()}};
}

json mode_json(const LGIndex& m) { return json::array({m.l(), m.p()}); }

json tool_json() { return {{"name", "lgset"}, {"version", tool_version()}}; }

}  // namespace

std::string_view tool_version() { return LGSET_VERSION; }

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", value);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw fs::filesystem_error("cannot open for writing", tmp, std::make_error_code(std::errc::io_error));
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw fs::filesystem_error("write failed", tmp, std::make_error_code(std::errc::io_error));
    }
    fs::rename(tmp, path);
}

std::string jsmd_csv(const JsmdMatrix& m, const BeamGeometry& geometry) {
    std::ostringstream out;
    out << "# jsmd |C|^2, rows l_s, columns l_i\n";
    out << "# gamma_signal=" << format_number(geometry.gamma_signal())
        << " gamma_idler=" << format_number(geometry.gamma_idler()) << "\n";
    out << "# p_s=" << m.p_s << " p_i=" << m.p_i << "\n";
    out << "# normalization=" << to_string(m.normalization) << "\n";
    out << "# lgset " << tool_version() << "\n";
    out << "l_s\\l_i";
    for (int li = m.l_range.lo; li <= m.l_range.hi; ++li) out << ',' << li;
    out << '\n';
    for (int ls = m.l_range.lo; ls <= m.l_range.hi; ++ls) {
        out << ls;
        for (int li = m.l_range.lo; li <= m.l_range.hi; ++li) out << ',' << format_number(m.at(ls, li));
        out << '\n';
    }
    return out.str();
}

json jsmd_json(const JsmdMatrix& m, const BeamGeometry& geometry) {
    json rows = json::array();
    for (int ls = m.l_range.lo; ls <= m.l_range.hi; ++ls) {
        json row = json::array();
        for (int li = m.l_range.lo; li <= m.l_range.hi; ++li) row.push_back(m.at(ls, li));
        rows.push_back(std::move(row));
    }
    return {{"tool", tool_json()},
            {"kind", "jsmd"},
            {"geometry", geometry_json(geometry)},
            {"normalization", to_string(m.normalization)},
            {"l_range", {m.l_range.lo, m.l_range.hi}},
            {"p_s", m.p_s},
            {"p_i", m.p_i},
            {"rows", "l_s"},
            {"columns", "l_i"},
            {"values", std::move(rows)}};
}

std::string spectrum_csv(const std::vector<SpectrumCurve>& curves) {
    std::ostringstream out;
    out << "# spectrum, gamma_s = gamma_i = gamma, p_s = p_i = 0\n";
    out << "# normalization=relative to l=0\n";
    out << "# lgset " << tool_version() << "\n";
    out << "gamma,l,weight\n";
    const std::size_t n = curves.empty() ? 0 : curves.front().samples.size();
    for (std::size_t k = 0; k < n; ++k)
        for (const auto& c : curves)
            out << format_number(c.samples[k].gamma) << ',' << c.l << ',' << format_number(c.samples[k].weight) << '\n';
    return out.str();
}

std::string spectrum_wide_csv(const std::vector<SpectrumCurve>& curves) {
    std::ostringstream out;
    out << "# spectrum sweep, one column per l, weights relative to l=0\n";
    out << "# lgset " << tool_version() << "\n";
    out << "gamma";
    for (const auto& c : curves) out << ",l=" << c.l;
    out << '\n';
    const std::size_t n = curves.empty() ? 0 : curves.front().samples.size();
    for (std::size_t k = 0; k < n; ++k) {
        out << format_number(curves.front().samples[k].gamma);
        for (const auto& c : curves) out << ',' << format_number(c.samples[k].weight);
        out << '\n';
    }
    return out.str();
}

json spectrum_json(const std::vector<SpectrumCurve>& curves) {
    json out = json::array();
    for (const auto& c : curves) {
        json gammas = json::array();
        json weights = json::array();
        for (const auto& s : c.samples) {
            gammas.push_back(s.gamma);
            weights.push_back(s.weight);
        }
        out.push_back({{"l", c.l}, {"gamma", std::move(gammas)}, {"weight", std::move(weights)}});
    }
    return {{"tool", tool_json()}, {"kind", "spectrum"}, {"normalization", "relative to l=0"}, {"curves", std::move(out)}};
}

std::string validation_csv(const ValidationReport& r) {
    std::ostringstream out;
    out << "# validation: closed form vs quadrature, normalized |C|^2 per gamma\n";
    out << "# l_max=" << r.l_max << " p_max=" << r.p_max << " tolerance=" << format_number(r.tolerance) << "\n";
    out << "# max_deviation=" << format_number(r.max_deviation) << " pass=" << (r.pass ? "true" : "false") << "\n";
    out << "# off_antidiagonal_checked=" << r.off_antidiagonal_checked
        << " off_antidiagonal_nonzero=" << r.off_antidiagonal_nonzero << "\n";
    out << "# lgset " << tool_version() << "\n";
    out << "l,p_s,p_i,gamma,analytic,numeric,deviation,error\n";
    for (const auto& c : r.cells) {
        out << c.l << ',' << c.p_s << ',' << c.p_i << ',' << format_number(c.gamma) << ',' << format_number(c.analytic)
            << ',' << format_number(c.numeric) << ',' << format_number(c.deviation) << ',';
        if (!c.error.empty()) {
            std::string e = c.error;
            std::replace(e.begin(), e.end(), '"', '\'');
            out << '"' << e << '"';
        }
        out << '\n';
    }
    return out.str();
}

json validation_json(const ValidationReport& r) {
    json cells = json::array();
    for (const auto& c : r.cells) {
        json cell = {{"l", c.l},           {"p_s", c.p_s},         {"p_i", c.p_i},
                     {"gamma", c.gamma},   {"analytic", c.analytic}, {"numeric", c.numeric},
                     {"deviation", c.deviation}};
        if (!c.error.empty()) cell["error"] = c.error;
        cells.push_back(std::move(cell));
    }
    return {{"tool", tool_json()},
            {"kind", "validation"},
            {"l_max", r.l_max},
            {"p_max", r.p_max},
            {"gammas", r.gammas},
            {"tolerance", r.tolerance},
            {"max_deviation", r.max_deviation},
            {"off_antidiagonal_checked", r.off_antidiagonal_checked},
            {"off_antidiagonal_nonzero", r.off_antidiagonal_nonzero},
            {"pass", r.pass},
            {"cells", std::move(cells)}};
}

std::string mode_label(const LGIndex& m) {
    return m.p() == 0 ? std::to_string(m.l()) : std::to_string(m.l()) + "/" + std::to_string(m.p());
}

std::string simulate_csv(const EstimatedJsmd& e, const SetExperimentConfig& config) {
    std::ostringstream out;
    out << "# simulated SET estimate, rows seed (signal) modes, columns projection (idler) modes\n";
    out << "# gamma_signal=" << format_number(config.geometry.gamma_signal())
        << " gamma_idler=" << format_number(config.geometry.gamma_idler()) << "\n";
    out << "# normalization=global-max rng_seed=" << config.rng_seed
        << " calibrated=" << (e.calibrated ? "true" : "false") << "\n";
    out << "# lgset " << tool_version() << "\n";
    out << "seed\\projection";
    for (const auto& m : e.projection_modes) out << ',' << mode_label(m);
    out << '\n';
    for (std::size_t r = 0; r < e.rows(); ++r) {
        out << mode_label(e.seed_modes[r]);
        for (std::size_t c = 0; c < e.cols(); ++c) out << ',' << format_number(e.normalized[e.index(r, c)]);
        out << '\n';
    }
    return out.str();
}

json simulate_json(const EstimatedJsmd& e, const SetExperimentConfig& config) {
    std::vector<double> reference(e.rows() * e.cols(), 0.0);
    for (std::size_t r = 0; r < e.rows(); ++r)
        for (std::size_t c = 0; c < e.cols(); ++c) {
            const double a = amplitude(e.seed_modes[r], e.projection_modes[c], config.geometry).value;
            reference[e.index(r, c)] = a * a;
        }
    normalize(reference, Normalization::GlobalMax);

    json cells = json::array();
    for (std::size_t r = 0; r < e.rows(); ++r)
        for (std::size_t c = 0; c < e.cols(); ++c) {
            const std::size_t k = e.index(r, c);
            const auto& rec = e.records[k];
            cells.push_back({{"seed", mode_json(e.seed_modes[r])},
                             {"projection", mode_json(e.projection_modes[c])},
                             {"coupling_efficiency", e.coupling_efficiency[k]},
                             {"coupled_power", e.coupled_power[k]},
                             {"mean_rate_hz", e.mean_rate_hz[k]},
                             {"window_counts", rec.window_counts},
                             {"dark_counts", rec.dark_counts},
                             {"background_subtracted_mean", rec.background_subtracted_mean},
                             {"clamped_estimate", rec.clamped_estimate},
                             {"standard_error", rec.standard_error},
                             {"normalized", e.normalized[k]},
                             {"normalized_standard_error", e.normalized_standard_error[k]},
                             {"analytic_reference", reference[k]}});
        }
    json seeds = json::array();
    json projections = json::array();
    for (const auto& m : e.seed_modes) seeds.push_back(mode_json(m));
    for (const auto& m : e.projection_modes) projections.push_back(mode_json(m));
    json experiment = {{"window_seconds", config.window_seconds},
                       {"n_windows", config.n_windows},
                       {"n_dark_trials", config.n_dark_trials},
                       {"peak_rate_hz", config.peak_rate_hz},
                       {"dark_rate_hz", config.dark_rate_hz},
                       {"fiber_waist_radius_m", config.effective_fiber_waist()},
                       {"aperture_radius_m", config.aperture_radius ? json(*config.aperture_radius) : json(nullptr)},
                       {"calibrated", e.calibrated},
                       {"extended", e.extended}};
    return {{"tool", tool_json()},
            {"kind", "simulate"},
            {"rng_seed", config.rng_seed},
            {"geometry", geometry_json(config.geometry)},
            {"experiment", std::move(experiment)},
            {"normalization", "global-max"},
            {"seed_modes", std::move(seeds)},
            {"projection_modes", std::move(projections)},
            {"cells", std::move(cells)}};
}

std::vector<std::vector<double>> parse_csv_grid(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');  // row label
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace lgset::cli
