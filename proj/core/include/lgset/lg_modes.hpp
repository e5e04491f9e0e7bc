#pragma once

// Laguerre-Gaussian mode mathematics at the waist plane.
//
// Lengths are SI metres and always denote waist radii (1/e^2 field
// radius). Fields carry no Gouy or curvature phase.

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace lgset {

using cplx = std::complex<double>;

/// Mode label LG_p^l. l is the OAM number (any sign), p the radial index.
class LGIndex {
public:
    constexpr LGIndex() = default;
    LGIndex(int l, int p);

    constexpr int l() const noexcept { return l_; }
    constexpr int p() const noexcept { return p_; }
    constexpr int abs_l() const noexcept { return l_ < 0 ? -l_ : l_; }

    friend constexpr bool operator==(const LGIndex&, const LGIndex&) = default;

private:
    int l_ = 0;
    int p_ = 0;
};

/// Pump, signal and idler beam parameters at the crystal plane.
struct BeamGeometry {
    double pump_waist = 1.0e-3;
    double signal_waist = 1.0e-3;
    double idler_waist = 1.0e-3;
    double pump_wavelength = 405e-9;
    double signal_wavelength = 780e-9;
    double idler_wavelength = 842e-9;
    double crystal_length = 2.0e-3;

    /// w_p / w_s
    double gamma_signal() const { return pump_waist / signal_waist; }
    /// w_p / w_i
    double gamma_idler() const { return pump_waist / idler_waist; }

    /// Throws std::invalid_argument naming the first non-positive or
    /// non-finite length.
    void validate() const;

    /// Geometry with the given normalized inverse waists and pump waist.
    static BeamGeometry from_gammas(double gamma_signal, double gamma_idler,
                                    double pump_waist = 1.0e-3);
};

struct QuadratureConfig {
    int radial_nodes = 128;
    double truncation_radius_factor = 6.0;
    int azimuthal_nodes = 64;
    double target_rel_tol = 1e-9;

    void validate() const;
};

/// Complex transverse field in polar coordinates.
///
/// A field either declares an azimuthal order m, in which case it is
/// R(rho) exp(i m phi) and only the radial factor is stored, or it is a
/// general profile f(rho, phi). Declared-order fields let overlaps resolve
/// the phi integral analytically.
///
/// `breakpoints` lists radii where the radial profile may be non-smooth
/// (hard apertures, hologram phase steps); quadrature splits there.
/// Beyond `support` the field is identically zero.
class ScalarField {
public:
    using Radial = std::function<cplx(double)>;
    using Profile = std::function<cplx(double, double)>;

    static ScalarField with_order(int order, Radial radial, double waist_hint);
    static ScalarField general(Profile profile, double waist_hint);

    cplx operator()(double rho, double phi) const;

    /// Radial factor; only meaningful when an order is declared.
    cplx radial(double rho) const;

    std::optional<int> azimuthal_order() const { return order_; }
    double waist_hint() const { return waist_hint_; }
    std::optional<double> support() const { return support_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    /// Pointwise complex conjugate; the declared order flips sign.
    ScalarField conj() const;

    /// Pointwise product a(rho,phi) * b(rho,phi).
    static ScalarField product(const ScalarField& a, const ScalarField& b);

    /// Multiplies by exp(-i l phi) and by a real radial mask `radial_mask`
    /// (e.g. +/-1 hologram steps). Declared orders shift by -l.
    ScalarField with_phase_mask(int l, std::function<double(double)> radial_mask = {},
                                std::vector<double> mask_breakpoints = {}) const;

    /// Zero outside rho <= radius.
    ScalarField with_aperture(double radius) const;

private:
    std::optional<int> order_;
    Radial radial_;
    Profile profile_;
    double waist_hint_ = 1.0;
    std::optional<double> support_;
    std::vector<double> breakpoints_;
};

/// Generalized Laguerre polynomial L_p^alpha(x), three-term recurrence.
double assoc_laguerre(int p, double alpha, double x);

/// Unit-normalized waist-plane LG_p^l profile with azimuthal factor
/// exp(i l phi).
ScalarField lg_field(const LGIndex& index, double waist);

/// Fundamental Gaussian LG_0^0.
ScalarField gaussian_field(double waist);

/// <a|b> = integral of conj(a) b over the plane.
///
/// When both fields declare azimuthal orders the phi integral is 2 pi on a
/// match and exactly zero otherwise. The radial integral is Gauss-Legendre
/// on [0, R], R = truncation_radius_factor * max(waist hints), clipped to
/// the fields' supports. Convergence: the result at radial_nodes and at
/// 2*radial_nodes may differ by at most target_rel_tol * ||a|| ||b||,
/// otherwise QuadratureNotConverged is thrown.
cplx mode_overlap(const ScalarField& a, const ScalarField& b, const QuadratureConfig& quad = {});

/// <f|f>
double field_power(const ScalarField& f, const QuadratureConfig& quad = {});

}  // namespace lgset
