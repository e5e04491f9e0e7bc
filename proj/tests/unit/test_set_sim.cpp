#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lgset/analytic.hpp"
#include "lgset/set_sim.hpp"

using namespace lgset;

namespace {

double total_variation(std::vector<double> p, std::vector<double> q) {
    normalize(p, Normalization::UnitSum);
    normalize(q, Normalization::UnitSum);
    double tv = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) tv += std::abs(p[k] - q[k]);
    return 0.5 * tv;
}

SetExperimentConfig base_config(double gamma) {
    auto c = SetExperimentConfig::with_defaults(BeamGeometry::from_gammas(gamma, gamma));
    c.rng_seed = 7;
    return c;
}

}  // namespace

TEST_CASE("stimulated idler field") {
    const auto g = BeamGeometry::from_gammas(3.05, 3.05);
    CHECK(stimulated_idler_field(g, LGIndex{3, 0}).azimuthal_order() == -3);
    CHECK(stimulated_idler_field(g, LGIndex{-2, 0}).azimuthal_order() == 2);
    CHECK_THROWS(stimulated_idler_field(g, LGIndex{1, 1}));
    CHECK_NOTHROW(stimulated_idler_field(g, LGIndex{1, 1}, true));

    SUBCASE("flat pump limit reproduces the conjugated seed") {
        BeamGeometry wide = g;
        wide.pump_waist = 1e6 * wide.signal_waist;
        const auto idler = stimulated_idler_field(wide, LGIndex{2, 0});
        const auto seed = lg_field(LGIndex{2, 0}, wide.signal_waist);
        for (double r : {0.1, 0.5, 1.0, 2.0}) {
            const double rho = r * wide.signal_waist;
            CHECK(std::abs(idler.radial(rho) - std::conj(seed.radial(rho))) < 1e-9 * std::abs(seed.radial(rho)));
        }
    }

    SUBCASE("projection onto LG_0^{-l}(w_i) gives the p=0 weights") {
        std::vector<double> proj;
        for (int l = 0; l <= 6; ++l)
            proj.push_back(std::norm(mode_overlap(lg_field(LGIndex{-l, 0}, g.idler_waist),
                                                  stimulated_idler_field(g, LGIndex{l, 0}))));
        for (int l = 0; l <= 6; ++l) CHECK(proj[l] / proj[0] == doctest::Approx(probability_p0(l, 3.05)).epsilon(1e-10));
    }
}

TEST_CASE("project_and_couple") {
    const auto g = BeamGeometry::from_gammas(2.03, 2.03);
    const auto idler = stimulated_idler_field(g, LGIndex{1, 0});  // order -1
    const double wf = g.idler_waist;

    CHECK(project_and_couple(idler, LGIndex{1, 0}, wf, std::nullopt) == 0.0);

    SUBCASE("matched flattening equals the closed-form radial overlap") {
        const double wp = g.pump_waist;
        const double ws = g.signal_waist;
        const double n1 = std::sqrt(2.0 / std::numbers::pi) / ws;
        const double b = 1.0 / (wp * wp) + 1.0 / (ws * ws);
        const double c = b + 1.0 / (wf * wf);
        const double pi = std::numbers::pi;
        const double overlap = 2.0 * pi * std::sqrt(2.0 / pi) / wf * n1 * std::numbers::sqrt2 / ws *
                               std::sqrt(pi) / (4.0 * std::pow(c, 1.5));
        const double power = 2.0 * pi * n1 * n1 * 2.0 / (ws * ws) / (2.0 * (2.0 * b) * (2.0 * b));
        const double got = project_and_couple(idler, LGIndex{-1, 0}, wf, std::nullopt);
        CHECK(got > 0.0);
        CHECK(got == doctest::Approx(overlap * overlap / power).epsilon(1e-10));
    }

    SUBCASE("huge aperture equals no aperture") {
        const double open = project_and_couple(idler, LGIndex{-1, 0}, wf, std::nullopt);
        const double wide = project_and_couple(idler, LGIndex{-1, 0}, wf, 1.0);
        CHECK(std::abs(open - wide) < 1e-10);
    }

    SUBCASE("coupling is bounded and monotone in the aperture") {
        for (int ls = -4; ls <= 4; ++ls) {
            const auto f = stimulated_idler_field(g, LGIndex{ls, 0});
            double prev = 0.0;
            for (double r = 0.1; r <= 4.0; r += 0.15) {
                const double eta = project_and_couple(f, LGIndex{-ls, 0}, wf, r * g.idler_waist);
                CHECK(eta >= prev);
                CHECK(eta >= 0.0);
                CHECK(eta <= 1.0);
                prev = eta;
            }
        }
    }

    SUBCASE("only a matched Gaussian couples completely") {
        const double w = 0.4e-3;
        CHECK(project_and_couple(gaussian_field(w), LGIndex{0, 0}, w, std::nullopt) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(project_and_couple(gaussian_field(w), LGIndex{0, 0}, 1.2 * w, std::nullopt) < 0.99);
        CHECK(project_and_couple(stimulated_idler_field(g, LGIndex{2, 0}), LGIndex{-2, 0}, wf, std::nullopt) < 0.99);
    }

    CHECK_THROWS(project_and_couple(idler, LGIndex{-1, 0}, 0.0, std::nullopt));
}

TEST_CASE("hologram radial mask steps at Laguerre zeros") {
    const double w = 1.0e-3;
    CHECK(hologram_radial_mask(LGIndex{3, 0}, w).steps.empty());
    const auto m1 = hologram_radial_mask(LGIndex{2, 1}, w);  // L_1^2 zero at x = 3
    REQUIRE(m1.steps.size() == 1);
    CHECK(m1.steps[0] == doctest::Approx(w * std::sqrt(1.5)).epsilon(1e-12));
    CHECK(m1(0.5 * w) == 1.0);
    CHECK(m1(1.5 * w) == -1.0);
    const auto m2 = hologram_radial_mask(LGIndex{0, 2}, w);  // L_2^0 zeros at 2 -+ sqrt 2
    REQUIRE(m2.steps.size() == 2);
    CHECK(m2.steps[0] == doctest::Approx(w * std::sqrt((2.0 - std::sqrt(2.0)) / 2.0)).epsilon(1e-12));
    CHECK(m2.steps[1] == doctest::Approx(w * std::sqrt((2.0 + std::sqrt(2.0)) / 2.0)).epsilon(1e-12));

    // Flattening LG_1^2 onto itself: the masked mode is |u| exp(0), real and positive.
    const auto mode = lg_field(LGIndex{2, 1}, w);
    const double eta = project_and_couple(mode, LGIndex{2, 1}, w, std::nullopt, {}, w);
    CHECK(eta > 0.0);
    CHECK(eta < 1.0);
}

TEST_CASE("simulate_counts") {
    auto c = base_config(2.0);
    const std::int64_t tag[] = {1, 0, -1, 0};

    SUBCASE("zero rates give zero counts") {
        c.dark_rate_hz = 0.0;
        const auto r = simulate_counts(0.0, c, tag);
        CHECK(r.window_counts.size() == 10);
        CHECK(r.dark_counts.size() == 20);
        for (auto k : r.window_counts) CHECK(k == 0);
        for (auto k : r.dark_counts) CHECK(k == 0);
        CHECK(r.clamped_estimate == 0.0);
    }

    SUBCASE("deterministic per (seed, tag) and sensitive to both") {
        c.dark_rate_hz = 30.0;
        const auto a = simulate_counts(80.0, c, tag);
        const auto b = simulate_counts(80.0, c, tag);
        CHECK(a.window_counts == b.window_counts);
        CHECK(a.dark_counts == b.dark_counts);
        const std::int64_t other[] = {1, 0, -2, 0};
        CHECK(simulate_counts(80.0, c, other).window_counts != a.window_counts);
        c.rng_seed += 1;
        CHECK(simulate_counts(80.0, c, tag).window_counts != a.window_counts);
    }

    SUBCASE("estimator is unbiased away from the clamp") {
        c.dark_rate_hz = 20.0;
        c.window_seconds = 5.0;
        const int runs = 10000;
        double sum = 0.0;
        double sum_sq = 0.0;
        double window_sum = 0.0;
        for (int s = 0; s < runs; ++s) {
            c.rng_seed = 1000 + s;
            const auto r = simulate_counts(100.0, c, tag);
            CHECK(r.clamped_estimate == std::max(0.0, r.background_subtracted_mean));
            sum += r.clamped_estimate;
            sum_sq += r.clamped_estimate * r.clamped_estimate;
            for (auto k : r.window_counts) window_sum += k;
        }
        const double mean = sum / runs;
        const double se = std::sqrt((sum_sq / runs - mean * mean) / (runs - 1));
        CHECK(std::abs(mean - 500.0) < 3.0 * se);
        CHECK(window_sum / (runs * 10.0) == doctest::Approx(600.0).epsilon(2e-3));
    }

    CHECK_THROWS(simulate_counts(-1.0, c, tag));
}

TEST_CASE("estimate_jsmd") {
    SUBCASE("noise-free calibrated estimate matches the analytic antidiagonal") {
        auto c = base_config(3.05);
        c.calibrated = true;
        c.peak_rate_hz = 1e10;
        const auto est = estimate_jsmd(c);
        const auto m = jsmd_matrix(LRange{}, 0, 0, c.geometry);
        REQUIRE(est.normalized.size() == m.values.size());
        CHECK(total_variation(est.normalized, m.values) < 0.005);
        CHECK(est.normalized[est.index(6, 6)] == 1.0);
        for (std::size_t k = 0; k < est.mean_rate_hz.size(); ++k)
            if (m.values[k] == 0.0) CHECK(est.mean_rate_hz[k] == 0.0);
    }

    SUBCASE("uncalibrated estimate carries the fiber-coupling roll-off") {
        auto c = base_config(2.03);
        c.peak_rate_hz = 1e10;
        const auto est = estimate_jsmd(c);
        // Flattened high-|l| rings couple worse into the Gaussian fiber mode.
        const double l6 = est.normalized[est.index(12, 0)];
        CHECK(l6 < probability_p0(6, 2.03));
        CHECK(est.coupling_efficiency[est.index(12, 0)] < est.coupling_efficiency[est.index(6, 6)]);
    }

    SUBCASE("off-antidiagonal cells are zero-mean noise") {
        auto c = base_config(2.03);
        c.peak_rate_hz = 1000.0;
        c.dark_rate_hz = 100.0;
        double sum = 0.0;
        double sum_sq = 0.0;
        long n = 0;
        for (int s = 0; s < 20; ++s) {
            c.rng_seed = 50 + s;
            const auto est = estimate_jsmd(c);
            for (std::size_t r = 0; r < est.rows(); ++r)
                for (std::size_t k = 0; k < est.cols(); ++k) {
                    if (est.seed_modes[r].l() + est.projection_modes[k].l() == 0) continue;
                    const double v = est.records[est.index(r, k)].background_subtracted_mean;
                    CHECK(est.mean_rate_hz[est.index(r, k)] == 0.0);
                    sum += v;
                    sum_sq += v * v;
                    ++n;
                }
        }
        const double mean = sum / n;
        const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1));
        CHECK(std::abs(mean) < 4.0 * se);
    }

    SUBCASE("small aperture suppresses the high-|l| tail") {
        auto c = base_config(2.03);
        c.calibrated = true;
        c.peak_rate_hz = 1e10;
        const auto& g = c.geometry;
        const double w_eff = 1.0 / std::sqrt(1.0 / (g.pump_waist * g.pump_waist) + 1.0 / (g.signal_waist * g.signal_waist));
        c.aperture_radius = 1.2 * w_eff;  // |l| = 6 ring sits at sqrt(3) w_eff
        const auto est = estimate_jsmd(c);
        CHECK(est.normalized[est.index(6, 6)] == 1.0);
        double prev_ratio = 1.0;
        for (int l = 1; l <= 6; ++l) {
            const double ratio = est.normalized[est.index(6 + l, 6 - l)] / probability_p0(l, 2.03);
            CHECK(ratio < prev_ratio);
            prev_ratio = ratio;
        }
        CHECK(prev_ratio < 0.5);
    }

    SUBCASE("deterministic and independent of thread count") {
        auto c = base_config(1.5);
        c.dark_rate_hz = 50.0;
        c.peak_rate_hz = 3000.0;
        const auto a = estimate_jsmd(c);
        c.threads = 4;
        const auto b = estimate_jsmd(c);
        CHECK(a.normalized == b.normalized);
        for (std::size_t k = 0; k < a.records.size(); ++k) {
            CHECK(a.records[k].window_counts == b.records[k].window_counts);
            CHECK(a.records[k].dark_counts == b.records[k].dark_counts);
        }
    }

    SUBCASE("extended seeds are flagged") {
        auto c = base_config(2.0);
        c.seed_modes = {LGIndex{0, 0}, LGIndex{1, 1}};
        CHECK_THROWS_WITH(estimate_jsmd(c), doctest::Contains("seed_modes"));
        c.allow_extended = true;
        const auto est = estimate_jsmd(c);
        CHECK(est.extended);
        CHECK(est.rows() == 2);
    }

    SUBCASE("config validation names the field") {
        auto c = base_config(2.0);
        c.n_windows = 0;
        CHECK_THROWS_WITH(estimate_jsmd(c), doctest::Contains("n_windows"));
        c = base_config(2.0);
        c.dark_rate_hz = -1.0;
        CHECK_THROWS_WITH(estimate_jsmd(c), doctest::Contains("dark_rate_hz"));
        c = base_config(2.0);
        c.fiber_waist = 0.0;
        CHECK_THROWS_WITH(estimate_jsmd(c), doctest::Contains("fiber_waist"));
    }
}
