#include "lgset/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lgset/errors.hpp"

namespace lgset {

std::string_view to_string(Normalization n) {
    switch (n) {
        case Normalization::GlobalMax: return "global-max";
        case Normalization::UnitSum: return "unit-sum";
    }
    return "unknown";
}

Normalization parse_normalization(std::string_view text) {
    if (text == "global-max") return Normalization::GlobalMax;
    if (text == "unit-sum") return Normalization::UnitSum;
    throw std::invalid_argument("unknown normalization '" + std::string(text) +
                                "' (expected global-max or unit-sum)");
}

double JsmdMatrix::at(int l_s, int l_i) const {
    if (l_s < l_range.lo || l_s > l_range.hi || l_i < l_range.lo || l_i > l_range.hi)
        throw std::out_of_range("JsmdMatrix::at: index outside l_range");
    const int n = l_range.size();
    return values[static_cast<std::size_t>((l_s - l_range.lo) * n + (l_i - l_range.lo))];
}

std::vector<double> JsmdMatrix::antidiagonal() const {
    std::vector<double> out;
    for (int l = l_range.lo; l <= l_range.hi; ++l)
        if (-l >= l_range.lo && -l <= l_range.hi) out.push_back(at(l, -l));
    return out;
}

double hyp2f1_terminating(int a, int b, double c, double x) {
    if (a > 0 || b > 0) throw std::invalid_argument("hyp2f1_terminating: a and b must be <= 0");
    const int terms = std::min(-a, -b);
    double sum = 1.0;
    double term = 1.0;
    for (int k = 0; k < terms; ++k) {
        const double ck = c + k;
        if (ck == 0.0) throw PoleInC("hyp2f1_terminating: c + " + std::to_string(k) + " = 0 before termination");
        term *= (a + k) * (b + k) / (ck * (k + 1.0)) * x;
        sum += term;
    }
    return sum;
}

double coeff_A(int p_s, int p_i, int l) {
    if (p_s < 0 || p_i < 0) throw std::invalid_argument("coeff_A: radial indices must be >= 0");
    const double al = std::abs(l);
    const double log_num = std::lgamma(p_s + p_i + al + 1.0);
    const double log_den = 0.5 * (std::lgamma(p_s + 1.0) + std::lgamma(p_i + 1.0) + std::lgamma(p_s + al + 1.0) +
                                  std::lgamma(p_i + al + 1.0));
    return std::exp(log_num - log_den);
}

double hyp2f1_argument(double gamma_s, double gamma_i) {
    const double s = gamma_s * gamma_s + gamma_i * gamma_i;
    const double d = gamma_s * gamma_s - gamma_i * gamma_i;
    return (1.0 - s * s) / (1.0 - d * d);
}

// The closed form is
//   A (-2 g_s g_i)^|l| u^p_s v^p_i / D^(p_s+p_i+|l|) * 2F1(-p_i, -p_s; -p_s-p_i-|l|; N / (u v))
// with u = 1 - g_s^2 + g_i^2, v = 1 + g_s^2 - g_i^2, D = 1 + g_s^2 + g_i^2 and
// N = 1 - (g_s^2 + g_i^2)^2, since 1 - (g_s^2 - g_i^2)^2 = u v. The series term
// k carries u^(p_s-k) v^(p_i-k) N^k with k <= min(p_s, p_i), so it is summed as
// a polynomial and u v = 0 is not singular.
double amplitude_value(int l, int p_s, int p_i, double gamma_s, double gamma_i) {
    if (p_s < 0 || p_i < 0) throw std::invalid_argument("amplitude: radial indices must be >= 0");
    if (!(gamma_s > 0.0) || !(gamma_i > 0.0)) throw std::invalid_argument("amplitude: gammas must be positive");
    const int al = std::abs(l);
    const double gs2 = gamma_s * gamma_s;
    const double gi2 = gamma_i * gamma_i;
    const double d = 1.0 + gs2 + gi2;
    const double u = (1.0 - gs2 + gi2) / d;
    const double v = (1.0 + gs2 - gi2) / d;
    const double n = (1.0 - (gs2 + gi2) * (gs2 + gi2)) / (d * d);

    const int a = -p_i;
    const int b = -p_s;
    const double c = -(p_s + p_i + al);
    const int terms = std::min(p_s, p_i);
    double coef = 1.0;
    double series = std::pow(u, p_s) * std::pow(v, p_i);
    for (int k = 0; k < terms; ++k) {
        const double ck = c + k;
        if (ck == 0.0) throw PoleInC("amplitude: 2F1 lower parameter hit zero");
        coef *= (a + k) * (b + k) / (ck * (k + 1.0));
        series += coef * std::pow(n, k + 1) * std::pow(u, p_s - k - 1) * std::pow(v, p_i - k - 1);
    }
    return coeff_A(p_s, p_i, l) * std::pow(-2.0 * gamma_s * gamma_i / d, al) * series;
}

ModeAmplitude amplitude(const LGIndex& index_s, const LGIndex& index_i, const BeamGeometry& geometry) {
    geometry.validate();
    ModeAmplitude out{index_s, index_i, 0.0};
    if (index_s.l() + index_i.l() != 0) return out;
    out.value = amplitude_value(index_s.l(), index_s.p(), index_i.p(), geometry.gamma_signal(), geometry.gamma_idler());
    return out;
}

double probability_p0(int l, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("probability_p0: gamma must be positive");
    const double g2 = gamma * gamma;
    return std::pow(2.0 * g2 / (1.0 + 2.0 * g2), 2 * std::abs(l));
}

void normalize(std::span<double> values, Normalization normalization) {
    double scale = 0.0;
    if (normalization == Normalization::GlobalMax) {
        for (double v : values) scale = std::max(scale, v);
    } else {
        scale = std::accumulate(values.begin(), values.end(), 0.0);
    }
    if (scale <= 0.0) return;
    for (double& v : values) v /= scale;
}

JsmdMatrix jsmd_matrix(LRange l_range, int p_s, int p_i, const BeamGeometry& geometry, Normalization normalization) {
    if (l_range.empty()) throw std::invalid_argument("jsmd_matrix: l_range is empty");
    if (p_s < 0 || p_i < 0) throw std::invalid_argument("jsmd_matrix: radial indices must be >= 0");
    geometry.validate();
    JsmdMatrix m;
    m.l_range = l_range;
    m.p_s = p_s;
    m.p_i = p_i;
    m.normalization = normalization;
    const int n = l_range.size();
    m.values.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int l_s = l_range.lo; l_s <= l_range.hi; ++l_s) {
        const int l_i = -l_s;
        if (l_i < l_range.lo || l_i > l_range.hi) continue;
        const double c = amplitude(LGIndex{l_s, p_s}, LGIndex{l_i, p_i}, geometry).value;
        m.values[static_cast<std::size_t>((l_s - l_range.lo) * n + (l_i - l_range.lo))] = c * c;
    }
    normalize(m.values, normalization);
    return m;
}

std::vector<SpectrumCurve> spectrum_vs_gamma(std::span<const int> l_list, std::span<const double> gamma_grid) {
    if (l_list.empty() || gamma_grid.empty())
        throw std::invalid_argument("spectrum_vs_gamma: l_list and gamma_grid must be nonempty");
    std::vector<SpectrumCurve> curves;
    curves.reserve(l_list.size());
    for (int l : l_list) {
        SpectrumCurve curve{l, {}};
        curve.samples.reserve(gamma_grid.size());
        for (double g : gamma_grid) curve.samples.push_back({g, probability_p0(l, g)});
        curves.push_back(std::move(curve));
    }
    return curves;
}

double thin_crystal_figure(const BeamGeometry& geometry) {
    geometry.validate();
    return geometry.pump_waist / std::sqrt(geometry.pump_wavelength * geometry.crystal_length);
}

double participation_ratio(std::span<const double> weights) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double w : weights) {
        sum += w;
        sum_sq += w * w;
    }
    return sum_sq > 0.0 ? sum * sum / sum_sq : 0.0;
}

}  // namespace lgset
