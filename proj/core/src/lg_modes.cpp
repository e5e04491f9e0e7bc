#include "lgset/lg_modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lgset/errors.hpp"
#include "lgset/quadrature.hpp"

namespace lgset {

LGIndex::LGIndex(int l, int p) : l_(l), p_(p) {
    if (p < 0) throw std::invalid_argument("LGIndex: radial index p must be >= 0");
}

void BeamGeometry::validate() const {
    const std::pair<const char*, double> lengths[] = {
        {"pump_waist", pump_waist},
        {"signal_waist", signal_waist},
        {"idler_waist", idler_waist},
        {"pump_wavelength", pump_wavelength},
        {"signal_wavelength", signal_wavelength},
        {"idler_wavelength", idler_wavelength},
        {"crystal_length", crystal_length},
    };
    for (const auto& [name, value] : lengths) {
        if (!std::isfinite(value) || value <= 0.0)
            throw std::invalid_argument(std::string("BeamGeometry: ") + name +
                                        " must be positive and finite");
    }
    if (!std::isfinite(gamma_signal()) || !std::isfinite(gamma_idler()) || gamma_signal() <= 0.0 ||
        gamma_idler() <= 0.0)
        throw std::invalid_argument("BeamGeometry: waist ratios must be positive and finite");
}

BeamGeometry BeamGeometry::from_gammas(double gamma_signal, double gamma_idler, double pump_waist) {
    if (!(gamma_signal > 0.0) || !(gamma_idler > 0.0))
        throw std::invalid_argument("BeamGeometry::from_gammas: gammas must be positive");
    BeamGeometry g;
    g.pump_waist = pump_waist;
    g.signal_waist = pump_waist / gamma_signal;
    g.idler_waist = pump_waist / gamma_idler;
    g.validate();
    return g;
}

void QuadratureConfig::validate() const {
    if (radial_nodes < 8) throw std::invalid_argument("QuadratureConfig: radial_nodes must be >= 8");
    if (!(truncation_radius_factor >= 4.0))
        throw std::invalid_argument("QuadratureConfig: truncation_radius_factor must be >= 4");
    if (azimuthal_nodes < 1) throw std::invalid_argument("QuadratureConfig: azimuthal_nodes must be >= 1");
    if (!(target_rel_tol > 0.0 && target_rel_tol < 1.0))
        throw std::invalid_argument("QuadratureConfig: target_rel_tol must lie in (0, 1)");
}

// --- ScalarField ------------------------------------------------------------

ScalarField ScalarField::with_order(int order, Radial radial, double waist_hint) {
    ScalarField f;
    f.order_ = order;
    f.radial_ = std::move(radial);
    f.waist_hint_ = waist_hint;
    return f;
}

ScalarField ScalarField::general(Profile profile, double waist_hint) {
    ScalarField f;
    f.profile_ = std::move(profile);
    f.waist_hint_ = waist_hint;
    return f;
}

cplx ScalarField::operator()(double rho, double phi) const {
    if (support_ && rho > *support_) return {0.0, 0.0};
    if (order_) return radial_(rho) * std::polar(1.0, *order_ * phi);
    return profile_(rho, phi);
}

cplx ScalarField::radial(double rho) const {
    if (!order_) throw std::logic_error("ScalarField::radial: field has no declared azimuthal order");
    if (support_ && rho > *support_) return {0.0, 0.0};
    return radial_(rho);
}

ScalarField ScalarField::conj() const {
    ScalarField f = *this;
    if (order_) {
        f.order_ = -*order_;
        f.radial_ = [r = radial_](double rho) { return std::conj(r(rho)); };
    } else {
        f.profile_ = [p = profile_](double rho, double phi) { return std::conj(p(rho, phi)); };
    }
    return f;
}

ScalarField ScalarField::product(const ScalarField& a, const ScalarField& b) {
    ScalarField f;
    f.waist_hint_ = std::min(a.waist_hint_, b.waist_hint_);
    if (a.support_ || b.support_)
        f.support_ = std::min(a.support_.value_or(INFINITY), b.support_.value_or(INFINITY));
    f.breakpoints_ = a.breakpoints_;
    f.breakpoints_.insert(f.breakpoints_.end(), b.breakpoints_.begin(), b.breakpoints_.end());
    std::sort(f.breakpoints_.begin(), f.breakpoints_.end());
    if (a.order_ && b.order_) {
        f.order_ = *a.order_ + *b.order_;
        f.radial_ = [ra = a.radial_, rb = b.radial_](double rho) { return ra(rho) * rb(rho); };
    } else {
        f.profile_ = [a, b](double rho, double phi) { return a(rho, phi) * b(rho, phi); };
    }
    return f;
}

ScalarField ScalarField::with_phase_mask(int l, std::function<double(double)> radial_mask,
                                         std::vector<double> mask_breakpoints) const {
    ScalarField f = *this;
    if (!radial_mask) radial_mask = [](double) { return 1.0; };
    if (order_) {
        f.order_ = *order_ - l;
        f.radial_ = [r = radial_, m = radial_mask](double rho) { return r(rho) * m(rho); };
    } else {
        f.profile_ = [p = profile_, m = radial_mask, l](double rho, double phi) {
            return p(rho, phi) * m(rho) * std::polar(1.0, -l * phi);
        };
    }
    f.breakpoints_.insert(f.breakpoints_.end(), mask_breakpoints.begin(), mask_breakpoints.end());
    std::sort(f.breakpoints_.begin(), f.breakpoints_.end());
    return f;
}

ScalarField ScalarField::with_aperture(double radius) const {
    if (!(radius > 0.0)) throw std::invalid_argument("ScalarField::with_aperture: radius must be positive");
    ScalarField f = *this;
    f.support_ = std::min(support_.value_or(INFINITY), radius);
    return f;
}

// --- special functions --------------------------------------------------------

double assoc_laguerre(int p, double alpha, double x) {
    if (p < 0) throw std::invalid_argument("assoc_laguerre: p must be >= 0");
    if (p == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 + alpha - x;
    for (int k = 1; k < p; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

ScalarField lg_field(const LGIndex& index, double waist) {
    if (!(waist > 0.0) || !std::isfinite(waist))
        throw std::invalid_argument("lg_field: waist must be positive and finite");
    const int p = index.p();
    const int al = index.abs_l();
    const double norm = std::sqrt(2.0 / std::numbers::pi) / waist *
                        std::exp(0.5 * (std::lgamma(p + 1.0) - std::lgamma(p + al + 1.0)));
    auto radial = [p, al, waist, norm](double rho) -> cplx {
        const double s = rho / waist;
        const double x = 2.0 * s * s;
        return norm * std::pow(std::numbers::sqrt2 * s, al) * assoc_laguerre(p, al, x) * std::exp(-s * s);
    };
    return ScalarField::with_order(index.l(), radial, waist);
}

ScalarField gaussian_field(double waist) { return lg_field(LGIndex{0, 0}, waist); }

// --- overlaps -----------------------------------------------------------------

namespace {

struct OverlapSums {
    cplx ab{0.0, 0.0};
    double aa = 0.0;
    double bb = 0.0;
};

std::vector<double> radial_intervals(const ScalarField& a, const ScalarField& b, const QuadratureConfig& q) {
    double outer = q.truncation_radius_factor * std::max(a.waist_hint(), b.waist_hint());
    if (a.support()) outer = std::min(outer, *a.support());
    if (b.support()) outer = std::min(outer, *b.support());
    std::vector<double> edges{0.0};
    for (const auto* f : {&a, &b})
        for (double bp : f->breakpoints())
            if (bp > 0.0 && bp < outer) edges.push_back(bp);
    edges.push_back(outer);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

OverlapSums integrate(const ScalarField& a, const ScalarField& b, const std::vector<double>& edges,
                      int radial_nodes, int azimuthal_nodes) {
    const auto rule = gauss_legendre(radial_nodes);
    const bool separable = a.azimuthal_order() && b.azimuthal_order();
    OverlapSums s;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double lo = edges[k];
        const double hi = edges[k + 1];
        if (!(hi > lo)) continue;
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        for (int n = 0; n < radial_nodes; ++n) {
            const double rho = mid + half * rule->nodes[n];
            const double w = half * rule->weights[n] * rho;
            if (separable) {
                const cplx ra = a.radial(rho);
                const cplx rb = b.radial(rho);
                s.ab += w * std::conj(ra) * rb;
                s.aa += w * std::norm(ra);
                s.bb += w * std::norm(rb);
            } else {
                const double dphi = 2.0 * std::numbers::pi / azimuthal_nodes;
                cplx ab{0.0, 0.0};
                double aa = 0.0;
                double bb = 0.0;
                for (int m = 0; m < azimuthal_nodes; ++m) {
                    const double phi = m * dphi;
                    const cplx va = a(rho, phi);
                    const cplx vb = b(rho, phi);
                    ab += std::conj(va) * vb;
                    aa += std::norm(va);
                    bb += std::norm(vb);
                }
                s.ab += w * dphi * ab;
                s.aa += w * dphi * aa;
                s.bb += w * dphi * bb;
            }
        }
    }
    if (separable) {
        const double two_pi = 2.0 * std::numbers::pi;
        s.ab *= two_pi;
        s.aa *= two_pi;
        s.bb *= two_pi;
    }
    return s;
}

}  // namespace

cplx mode_overlap(const ScalarField& a, const ScalarField& b, const QuadratureConfig& quad) {
    quad.validate();
    if (a.azimuthal_order() && b.azimuthal_order() && *a.azimuthal_order() != *b.azimuthal_order())
        return {0.0, 0.0};

    const auto edges = radial_intervals(a, b, quad);
    const auto coarse = integrate(a, b, edges, quad.radial_nodes, quad.azimuthal_nodes);
    const auto fine = integrate(a, b, edges, 2 * quad.radial_nodes, 2 * quad.azimuthal_nodes);

    const double scale = std::sqrt(fine.aa * fine.bb);
    if (scale == 0.0) return {0.0, 0.0};
    const double diff = std::abs(fine.ab - coarse.ab);
    if (!(diff <= quad.target_rel_tol * scale)) {
        std::ostringstream msg;
        msg << "mode_overlap: refinement changed the overlap by " << diff / scale
            << " (relative to field norms), tolerance " << quad.target_rel_tol;
        throw QuadratureNotConverged(msg.str(), std::abs(coarse.ab), std::abs(fine.ab));
    }
    return fine.ab;
}

double field_power(const ScalarField& f, const QuadratureConfig& quad) {
    return mode_overlap(f, f, quad).real();
}

}  // namespace lgset
