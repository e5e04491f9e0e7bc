#include "lgset/set_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "lgset/oracle.hpp"
#include "lgset/parallel.hpp"
#include "lgset/rng.hpp"

namespace lgset {

SetExperimentConfig SetExperimentConfig::with_defaults(const BeamGeometry& geometry) {
    SetExperimentConfig c;
    c.geometry = geometry;
    for (int l = -6; l <= 6; ++l) {
        c.seed_modes.emplace_back(l, 0);
        c.projection_modes.emplace_back(l, 0);
    }
    return c;
}

void SetExperimentConfig::validate() const {
    geometry.validate();
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument("SetExperimentConfig: " + field + " " + why);
    };
    if (seed_modes.empty()) fail("seed_modes", "must be nonempty");
    if (projection_modes.empty()) fail("projection_modes", "must be nonempty");
    if (!allow_extended)
        for (const auto& m : seed_modes)
            if (m.p() > 0) fail("seed_modes", "contains p > 0 but allow_extended is off");
    if (fiber_waist && !(*fiber_waist > 0.0 && std::isfinite(*fiber_waist))) fail("fiber_waist", "must be positive");
    if (aperture_radius && !(*aperture_radius > 0.0)) fail("aperture_radius", "must be positive");
    if (!(window_seconds > 0.0) || !std::isfinite(window_seconds)) fail("window_seconds", "must be positive");
    if (n_windows < 1) fail("n_windows", "must be >= 1");
    if (n_dark_trials < 1) fail("n_dark_trials", "must be >= 1");
    if (!(peak_rate_hz > 0.0) || !std::isfinite(peak_rate_hz)) fail("peak_rate_hz", "must be positive");
    if (!(dark_rate_hz >= 0.0) || !std::isfinite(dark_rate_hz)) fail("dark_rate_hz", "must be non-negative");
    quadrature.validate();
}

ScalarField stimulated_idler_field(const BeamGeometry& geometry, const LGIndex& seed, bool allow_extended) {
    geometry.validate();
    if (seed.p() > 0 && !allow_extended)
        throw std::invalid_argument("stimulated_idler_field: seed modes with p > 0 need allow_extended");
    return ScalarField::product(gaussian_pump(geometry.pump_waist), lg_field(seed, geometry.signal_waist).conj());
}

double HologramRadialMask::operator()(double rho) const {
    const auto crossed = std::upper_bound(steps.begin(), steps.end(), rho) - steps.begin();
    return crossed % 2 == 0 ? 1.0 : -1.0;
}

HologramRadialMask hologram_radial_mask(const LGIndex& projection, double waist) {
    HologramRadialMask mask;
    const int p = projection.p();
    if (p == 0) return mask;
    const double alpha = projection.abs_l();
    // All p zeros of L_p^alpha lie below 4p + 2 alpha + 2.
    const double x_max = 4.0 * p + 2.0 * alpha + 2.0;
    const int samples = 4000;
    auto f = [&](double x) { return assoc_laguerre(p, alpha, x); };
    double x0 = 0.0;
    double f0 = f(x0);
    for (int k = 1; k <= samples && static_cast<int>(mask.steps.size()) < p; ++k) {
        const double x1 = x_max * k / samples;
        const double f1 = f(x1);
        if ((f0 < 0.0) != (f1 < 0.0)) {
            double lo = x0;
            double hi = x1;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((f(mid) < 0.0) == (f0 < 0.0)) lo = mid;
                else hi = mid;
            }
            mask.steps.push_back(waist * std::sqrt(0.5 * (0.5 * (lo + hi))));
        }
        x0 = x1;
        f0 = f1;
    }
    return mask;
}

double project_and_couple(const ScalarField& idler, const LGIndex& projection, double fiber_waist,
                          std::optional<double> aperture_radius, const QuadratureConfig& quad,
                          std::optional<double> hologram_waist) {
    if (!(fiber_waist > 0.0)) throw std::invalid_argument("project_and_couple: fiber_waist must be positive");
    const auto mask = hologram_radial_mask(projection, hologram_waist.value_or(idler.waist_hint()));
    auto flattened = projection.p() > 0 ? idler.with_phase_mask(projection.l(), mask, mask.steps)
                                        : idler.with_phase_mask(projection.l());
    if (aperture_radius) flattened = flattened.with_aperture(*aperture_radius);
    const double incident = field_power(idler, quad);
    if (incident <= 0.0) return 0.0;
    const double coupled = std::norm(mode_overlap(gaussian_field(fiber_waist), flattened, quad));
    return std::clamp(coupled / incident, 0.0, 1.0);
}

namespace {

std::int64_t draw_poisson(double mean, std::uint64_t key) {
    if (mean <= 0.0) return 0;
    CounterRng rng(key);
    std::poisson_distribution<std::int64_t> dist(mean);
    return dist(rng);
}

double sample_variance(const std::vector<std::int64_t>& xs, double mean) {
    if (xs.size() < 2) return mean;  // Poisson: variance equals mean
    double acc = 0.0;
    for (auto x : xs) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(xs.size() - 1);
}

double mean_of(const std::vector<std::int64_t>& xs) {
    return static_cast<double>(std::accumulate(xs.begin(), xs.end(), std::int64_t{0})) /
           static_cast<double>(xs.size());
}

}  // namespace

CountRecord simulate_counts(double mean_rate_hz, const SetExperimentConfig& config,
                            std::span<const std::int64_t> cell_tag) {
    if (!(mean_rate_hz >= 0.0)) throw std::invalid_argument("simulate_counts: mean rate must be non-negative");
    const std::uint64_t cell_key = stream_key(config.rng_seed, cell_tag);
    const double signal_mean = (mean_rate_hz + config.dark_rate_hz) * config.window_seconds;
    const double dark_mean = config.dark_rate_hz * config.window_seconds;

    CountRecord r;
    r.window_counts.reserve(config.n_windows);
    for (int w = 0; w < config.n_windows; ++w) r.window_counts.push_back(draw_poisson(signal_mean, stream_key(cell_key, {0, w})));
    r.dark_counts.reserve(config.n_dark_trials);
    for (int d = 0; d < config.n_dark_trials; ++d) r.dark_counts.push_back(draw_poisson(dark_mean, stream_key(cell_key, {1, d})));

    const double m_win = mean_of(r.window_counts);
    const double m_dark = mean_of(r.dark_counts);
    r.background_subtracted_mean = m_win - m_dark;
    r.clamped_estimate = std::max(0.0, r.background_subtracted_mean);
    r.standard_error = std::sqrt(sample_variance(r.window_counts, m_win) / r.window_counts.size() +
                                 sample_variance(r.dark_counts, m_dark) / r.dark_counts.size());
    return r;
}

EstimatedJsmd estimate_jsmd(const SetExperimentConfig& config) {
    config.validate();
    const auto& geom = config.geometry;
    const double fiber_waist = config.effective_fiber_waist();
    const std::size_t rows = config.seed_modes.size();
    const std::size_t cols = config.projection_modes.size();
    const std::size_t n = rows * cols;

    EstimatedJsmd est;
    est.seed_modes = config.seed_modes;
    est.projection_modes = config.projection_modes;
    est.calibrated = config.calibrated;
    est.extended = std::any_of(config.seed_modes.begin(), config.seed_modes.end(),
                               [](const LGIndex& m) { return m.p() > 0; });
    est.coupled_power.assign(n, 0.0);
    est.coupling_efficiency.assign(n, 0.0);
    est.mean_rate_hz.assign(n, 0.0);
    est.records.resize(n);
    est.normalized.assign(n, 0.0);
    est.normalized_standard_error.assign(n, 0.0);

    parallel_for(n, config.threads, [&](std::size_t idx) {
        const auto& seed = config.seed_modes[idx / cols];
        const auto& proj = config.projection_modes[idx % cols];
        const auto idler = stimulated_idler_field(geom, seed, config.allow_extended);
        const double incident = field_power(idler, config.quadrature);
        const double eff = project_and_couple(idler, proj, fiber_waist, config.aperture_radius, config.quadrature,
                                              geom.idler_waist);
        est.coupling_efficiency[idx] = eff;
        double power = eff * incident;
        if (config.calibrated) {
            const double eff_open = config.aperture_radius
                                        ? project_and_couple(idler, proj, fiber_waist, std::nullopt,
                                                             config.quadrature, geom.idler_waist)
                                        : eff;
            const double ideal = std::norm(mode_overlap(lg_field(proj, geom.idler_waist), idler, config.quadrature));
            power = eff_open > 0.0 ? ideal * (eff / eff_open) : 0.0;
        }
        est.coupled_power[idx] = power;
    });

    const double max_power = *std::max_element(est.coupled_power.begin(), est.coupled_power.end());
    for (std::size_t i = 0; i < n; ++i)
        est.mean_rate_hz[i] = max_power > 0.0 ? config.peak_rate_hz * est.coupled_power[i] / max_power : 0.0;

    parallel_for(n, config.threads, [&](std::size_t idx) {
        const auto& seed = config.seed_modes[idx / cols];
        const auto& proj = config.projection_modes[idx % cols];
        const std::int64_t tag[] = {seed.l(), seed.p(), proj.l(), proj.p()};
        est.records[idx] = simulate_counts(est.mean_rate_hz[idx], config, tag);
    });

    double max_est = 0.0;
    for (const auto& r : est.records) max_est = std::max(max_est, r.clamped_estimate);
    if (max_est > 0.0)
        for (std::size_t i = 0; i < n; ++i) {
            est.normalized[i] = est.records[i].clamped_estimate / max_est;
            est.normalized_standard_error[i] = est.records[i].standard_error / max_est;
        }
    return est;
}

}  // namespace lgset
