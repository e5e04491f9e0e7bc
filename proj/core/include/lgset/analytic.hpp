#pragma once

// Closed-form joint spatial mode distribution of thin-crystal SPDC with a
// Gaussian pump. All distributions are relative; every matrix and curve
// carries its normalization.

#include <span>
#include <string_view>
#include <vector>

#include "lgset/lg_modes.hpp"

namespace lgset {

struct ModeAmplitude {
    LGIndex index_s;
    LGIndex index_i;
    double value = 0.0;  // signed; arbitrary overall scale
};

enum class Normalization { GlobalMax, UnitSum };

std::string_view to_string(Normalization n);
/// Accepts "global-max" and "unit-sum"; throws std::invalid_argument otherwise.
Normalization parse_normalization(std::string_view text);

/// Inclusive range of OAM numbers used for both l_s and l_i.
struct LRange {
    int lo = -6;
    int hi = 6;

    bool empty() const { return hi < lo; }
    int size() const { return empty() ? 0 : hi - lo + 1; }
};

/// |C|^2 over (l_s, l_i) at fixed (p_s, p_i). Rows are l_s, columns l_i.
struct JsmdMatrix {
    LRange l_range;
    int p_s = 0;
    int p_i = 0;
    Normalization normalization = Normalization::GlobalMax;
    std::vector<double> values;

    double at(int l_s, int l_i) const;
    /// Cells with l_s + l_i = 0, ordered by increasing l_s.
    std::vector<double> antidiagonal() const;
};

struct SpectrumSample {
    double gamma = 0.0;
    double weight = 0.0;
};

struct SpectrumCurve {
    int l = 0;
    std::vector<SpectrumSample> samples;
};

/// Terminating Gauss hypergeometric series 2F1(a, b; c; x) for a, b <= 0.
/// Throws PoleInC if c + k hits zero for some k before termination.
double hyp2f1_terminating(int a, int b, double c, double x);

/// (p_s+p_i+|l|)! / sqrt(p_s! p_i! (p_s+|l|)! (p_i+|l|)!), via log-gamma.
double coeff_A(int p_s, int p_i, int l);

/// Thin-crystal Gaussian-pump amplitude C_{p_s,p_i}^{l_s,l_i}; zero unless
/// l_s + l_i = 0.
ModeAmplitude amplitude(const LGIndex& index_s, const LGIndex& index_i, const BeamGeometry& geometry);

/// (1 - (g_s^2 + g_i^2)^2) / (1 - (g_s^2 - g_i^2)^2), the 2F1 argument of the
/// closed form. Infinite when g_s^2 - g_i^2 = +/-1.
double hyp2f1_argument(double gamma_s, double gamma_i);

/// Same amplitude from normalized inverse waists directly.
double amplitude_value(int l, int p_s, int p_i, double gamma_s, double gamma_i);

/// (2 gamma^2 / (1 + 2 gamma^2))^(2|l|): p_s = p_i = 0 weight relative to l = 0.
double probability_p0(int l, double gamma);

JsmdMatrix jsmd_matrix(LRange l_range, int p_s, int p_i, const BeamGeometry& geometry,
                       Normalization normalization = Normalization::GlobalMax);

std::vector<SpectrumCurve> spectrum_vs_gamma(std::span<const int> l_list, std::span<const double> gamma_grid);

/// w_p / sqrt(lambda_p L).
double thin_crystal_figure(const BeamGeometry& geometry);

inline constexpr double kThinCrystalThreshold = 10.0;

/// Rescales `values` in place; all-zero input is left untouched.
void normalize(std::span<double> values, Normalization normalization);

/// (sum w)^2 / sum w^2 over the antidiagonal: effective number of modes.
double participation_ratio(std::span<const double> weights);

}  // namespace lgset
