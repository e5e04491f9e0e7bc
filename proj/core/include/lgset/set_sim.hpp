#pragma once

// Simulated stimulated-emission-tomography chain: a seeded signal mode
// stimulates an idler, a phase-only hologram flattens the idler for one
// projection mode, the flattened beam couples into a single-mode fiber
// (optionally through a field-of-view aperture), and a photon counter
// records Poisson counts that are dark-subtracted and normalized.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lgset/lg_modes.hpp"

namespace lgset {

struct SetExperimentConfig {
    BeamGeometry geometry;
    std::vector<LGIndex> seed_modes;        // rows of the estimate
    std::vector<LGIndex> projection_modes;  // columns of the estimate
    std::optional<double> fiber_waist;      // fiber mode radius at the hologram plane; defaults to idler waist
    std::optional<double> aperture_radius;
    double window_seconds = 5.0;
    int n_windows = 10;
    int n_dark_trials = 20;
    double peak_rate_hz = 1.0e4;
    double dark_rate_hz = 0.0;
    std::uint64_t rng_seed = 0;
    /// Divide out the phase-flattening/fiber mismatch so that, without an
    /// aperture, rates follow the ideal LG projection.
    bool calibrated = false;
    /// Accept seed modes with p > 0.
    bool allow_extended = false;
    QuadratureConfig quadrature;
    unsigned threads = 1;

    /// seed and projection modes l in [-6, 6], p = 0.
    static SetExperimentConfig with_defaults(const BeamGeometry& geometry);

    double effective_fiber_waist() const { return fiber_waist.value_or(geometry.idler_waist); }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct CountRecord {
    std::vector<std::int64_t> window_counts;
    std::vector<std::int64_t> dark_counts;
    double background_subtracted_mean = 0.0;
    double clamped_estimate = 0.0;
    double standard_error = 0.0;  // of background_subtracted_mean, from sample variances
};

struct EstimatedJsmd {
    std::vector<LGIndex> seed_modes;
    std::vector<LGIndex> projection_modes;
    /// Per cell, row-major (seed, projection).
    std::vector<double> coupled_power;  // optical power into the fiber, arbitrary units
    std::vector<double> coupling_efficiency;  // project_and_couple fraction
    std::vector<double> mean_rate_hz;
    std::vector<CountRecord> records;
    std::vector<double> normalized;  // clamped estimates / max
    std::vector<double> normalized_standard_error;
    bool extended = false;  // some seed mode has p > 0
    bool calibrated = false;

    std::size_t rows() const { return seed_modes.size(); }
    std::size_t cols() const { return projection_modes.size(); }
    std::size_t index(std::size_t row, std::size_t col) const { return row * cols() + col; }
};

/// E_p(rho) conj(u_s(rho, phi)): the thin-crystal difference-frequency
/// envelope, azimuthal order -l_s. Seeds with p > 0 require allow_extended.
ScalarField stimulated_idler_field(const BeamGeometry& geometry, const LGIndex& seed, bool allow_extended = false);

/// Real +/-1 radial factor of the phase-only hologram that flattens
/// LG_p^l of the given waist (pi steps at the Laguerre zeros), and its
/// step radii.
struct HologramRadialMask {
    std::vector<double> steps;
    double operator()(double rho) const;
};
HologramRadialMask hologram_radial_mask(const LGIndex& projection, double waist);

/// Fraction of the idler power coupled into the fundamental fiber mode
/// after the flattening hologram for `projection` and the optional aperture.
/// Radial hologram steps (p > 0 only) are placed for `hologram_waist`,
/// defaulting to the idler's waist hint.
double project_and_couple(const ScalarField& idler, const LGIndex& projection, double fiber_waist,
                          std::optional<double> aperture_radius, const QuadratureConfig& quad = {},
                          std::optional<double> hologram_waist = std::nullopt);

/// Poisson window and dark-trial counts for one cell. The stream depends on
/// (rng_seed, cell_tag, window) only.
CountRecord simulate_counts(double mean_rate_hz, const SetExperimentConfig& config,
                            std::span<const std::int64_t> cell_tag);

EstimatedJsmd estimate_jsmd(const SetExperimentConfig& config);

}  // namespace lgset
