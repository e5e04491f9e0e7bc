#pragma once

// Brute-force thin-crystal amplitude: the waist-plane overlap of a
// Gaussian pump with the conjugated signal and idler modes. Independent of
// the closed form in analytic.hpp and used to check it.

#include <string>
#include <vector>

#include "lgset/lg_modes.hpp"

namespace lgset {

struct OverlapKernel {
    double pump_waist = 1.0e-3;
    LGIndex signal_mode;
    double signal_waist = 1.0e-3;
    LGIndex idler_mode;
    double idler_waist = 1.0e-3;
};

/// Pump envelope exp(-rho^2 / w_p^2), unit amplitude on axis, order 0.
ScalarField gaussian_pump(double pump_waist);

/// integral E_p conj(u_s) conj(u_i) rho drho dphi. Exactly zero unless
/// l_s + l_i = 0.
cplx overlap_amplitude_numeric(const OverlapKernel& kernel, const QuadratureConfig& quad = {});

struct ValidationCell {
    int l = 0;  // l_s; l_i = -l
    int p_s = 0;
    int p_i = 0;
    double gamma = 0.0;
    double analytic = 0.0;  // normalized |C|^2
    double numeric = 0.0;   // normalized |C|^2
    double deviation = 0.0;
    std::string error;  // nonempty when the quadrature failed for this cell
};

struct ValidationReport {
    int l_max = 0;
    int p_max = 0;
    std::vector<double> gammas;
    double tolerance = 0.0;
    std::vector<ValidationCell> cells;  // lexicographic (l, p_s, p_i, gamma)
    long off_antidiagonal_checked = 0;
    long off_antidiagonal_nonzero = 0;  // numeric or analytic cells with l_s + l_i != 0 that were not exactly 0
    double max_deviation = 0.0;
    bool pass = false;
};

/// Deviation of normalized |C|^2: relative to the analytic value, or
/// absolute when the analytic value is below `absolute_floor`.
double cell_deviation(double analytic, double numeric, double absolute_floor = 1e-12);

/// Sweeps l in [-l_max, l_max], p_s, p_i in [0, p_max] and each gamma
/// (gamma_s = gamma_i). Both engines are normalized to their maximum over
/// the (l, p_s, p_i) slice at each gamma. Quadrature failures are recorded
/// per cell and fail the report. Also checks the selection rule on every
/// off-antidiagonal (l_s, l_i) pair of the grid.
ValidationReport validate_against_analytic(int l_max, int p_max, const std::vector<double>& gammas, double tolerance,
                                           const QuadratureConfig& quad = {}, unsigned threads = 1);

}  // namespace lgset
