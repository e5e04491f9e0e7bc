#include "lgset/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lgset/analytic.hpp"
#include "lgset/parallel.hpp"

namespace lgset {

ScalarField gaussian_pump(double pump_waist) {
    if (!(pump_waist > 0.0)) throw std::invalid_argument("gaussian_pump: waist must be positive");
    return ScalarField::with_order(
        0, [pump_waist](double rho) -> cplx { return std::exp(-(rho * rho) / (pump_waist * pump_waist)); },
        pump_waist);
}

cplx overlap_amplitude_numeric(const OverlapKernel& kernel, const QuadratureConfig& quad) {
    const auto pump = gaussian_pump(kernel.pump_waist);
    const auto signal = lg_field(kernel.signal_mode, kernel.signal_waist);
    const auto idler = lg_field(kernel.idler_mode, kernel.idler_waist);
    // <u_i | E_p conj(u_s)> = integral conj(u_i) E_p conj(u_s)
    return mode_overlap(idler, ScalarField::product(pump, signal.conj()), quad);
}

double cell_deviation(double analytic, double numeric, double absolute_floor) {
    const double diff = std::abs(numeric - analytic);
    return analytic >= absolute_floor ? diff / analytic : diff;
}

ValidationReport validate_against_analytic(int l_max, int p_max, const std::vector<double>& gammas, double tolerance,
                                           const QuadratureConfig& quad, unsigned threads) {
    if (l_max < 0) throw std::invalid_argument("validate_against_analytic: l_max must be >= 0");
    if (p_max < 0) throw std::invalid_argument("validate_against_analytic: p_max must be >= 0");
    if (gammas.empty()) throw std::invalid_argument("validate_against_analytic: gamma list is empty");
    for (double g : gammas)
        if (!(g > 0.0) || !std::isfinite(g))
            throw std::invalid_argument("validate_against_analytic: gammas must be positive");
    quad.validate();

    ValidationReport report;
    report.l_max = l_max;
    report.p_max = p_max;
    report.gammas = gammas;
    report.tolerance = tolerance;

    const int n_l = 2 * l_max + 1;
    const int n_p = p_max + 1;
    const int n_g = static_cast<int>(gammas.size());
    const std::size_t n_cells = static_cast<std::size_t>(n_l) * n_p * n_p * n_g;
    report.cells.resize(n_cells);

    auto cell_index = [&](int l, int ps, int pi, int g) {
        return ((static_cast<std::size_t>(l + l_max) * n_p + ps) * n_p + pi) * n_g + g;
    };

    parallel_for(n_cells, threads, [&](std::size_t idx) {
        const int g = static_cast<int>(idx % n_g);
        const int pi = static_cast<int>((idx / n_g) % n_p);
        const int ps = static_cast<int>((idx / n_g / n_p) % n_p);
        const int l = static_cast<int>(idx / n_g / n_p / n_p) - l_max;
        auto& cell = report.cells[idx];
        cell.l = l;
        cell.p_s = ps;
        cell.p_i = pi;
        cell.gamma = gammas[g];
        const auto geom = BeamGeometry::from_gammas(gammas[g], gammas[g]);
        const double a = amplitude(LGIndex{l, ps}, LGIndex{-l, pi}, geom).value;
        cell.analytic = a * a;
        try {
            const OverlapKernel kernel{geom.pump_waist, LGIndex{l, ps}, geom.signal_waist, LGIndex{-l, pi},
                                       geom.idler_waist};
            cell.numeric = std::norm(overlap_amplitude_numeric(kernel, quad));
        } catch (const std::exception& e) {
            cell.error = e.what();
            cell.numeric = std::numeric_limits<double>::quiet_NaN();
        }
    });

    // Per-gamma max normalization of both engines.
    for (int g = 0; g < n_g; ++g) {
        double max_a = 0.0;
        double max_n = 0.0;
        for (int l = -l_max; l <= l_max; ++l)
            for (int ps = 0; ps < n_p; ++ps)
                for (int pi = 0; pi < n_p; ++pi) {
                    const auto& c = report.cells[cell_index(l, ps, pi, g)];
                    max_a = std::max(max_a, c.analytic);
                    if (c.error.empty()) max_n = std::max(max_n, c.numeric);
                }
        for (int l = -l_max; l <= l_max; ++l)
            for (int ps = 0; ps < n_p; ++ps)
                for (int pi = 0; pi < n_p; ++pi) {
                    auto& c = report.cells[cell_index(l, ps, pi, g)];
                    if (max_a > 0.0) c.analytic /= max_a;
                    if (!c.error.empty()) {
                        c.deviation = std::numeric_limits<double>::infinity();
                        continue;
                    }
                    if (max_n > 0.0) c.numeric /= max_n;
                    c.deviation = cell_deviation(c.analytic, c.numeric);
                }
    }

    // Selection rule on every off-antidiagonal pair.
    for (double gamma : gammas) {
        const auto geom = BeamGeometry::from_gammas(gamma, gamma);
        for (int ls = -l_max; ls <= l_max; ++ls)
            for (int li = -l_max; li <= l_max; ++li) {
                if (ls + li == 0) continue;
                for (int ps = 0; ps < n_p; ++ps)
                    for (int pi = 0; pi < n_p; ++pi) {
                        ++report.off_antidiagonal_checked;
                        const OverlapKernel kernel{geom.pump_waist, LGIndex{ls, ps}, geom.signal_waist,
                                                   LGIndex{li, pi}, geom.idler_waist};
                        const cplx num = overlap_amplitude_numeric(kernel, quad);
                        const double ana = amplitude(LGIndex{ls, ps}, LGIndex{li, pi}, geom).value;
                        if (num != cplx{0.0, 0.0} || ana != 0.0) ++report.off_antidiagonal_nonzero;
                    }
            }
    }

    report.max_deviation = 0.0;
    for (const auto& c : report.cells) report.max_deviation = std::max(report.max_deviation, c.deviation);
    report.pass = report.off_antidiagonal_nonzero == 0 && report.max_deviation < tolerance;
    return report;
}

}  // namespace lgset
