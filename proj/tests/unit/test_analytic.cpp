#include <doctest.h>

#include <cmath>
#include <vector>

#include "lgset/analytic.hpp"
#include "lgset/errors.hpp"
#include "reference_oracles.hpp"

using namespace lgset;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("hyp2f1_terminating") {
    CHECK(hyp2f1_terminating(0, -3, -5.0, 0.7) == 1.0);
    CHECK(hyp2f1_terminating(-1, -1, 2.0, 0.5) == doctest::Approx(1.25).epsilon(1e-15));
    const double ref = testing::hyp2f1_naive(-2, -1, -4.0, -3.0);
    CHECK(rel(hyp2f1_terminating(-2, -1, -4.0, -3.0), ref) < 1e-14);
    CHECK(ref == doctest::Approx(2.5));

    SUBCASE("matches naive series on a grid") {
        for (int a = 0; a >= -6; --a)
            for (int b = 0; b >= -6; --b)
                for (double c : {-13.5, -9.0, 0.5, 3.25})
                    for (double x : {-3.0, -0.4, 0.3, 1.7}) {
                        if (c == -9.0 && std::min(-a, -b) > 9) continue;
                        const double ref2 = testing::hyp2f1_naive(a, b, c, x);
                        const double got = hyp2f1_terminating(a, b, c, x);
                        CHECK(std::abs(got - ref2) <= 1e-13 * std::max(1.0, std::abs(ref2)));
                    }
    }

    SUBCASE("pole in c before termination") {
        CHECK_THROWS_AS(hyp2f1_terminating(-3, -3, -1.0, 0.5), PoleInC);
        // The pole sits after the last term: fine.
        CHECK_NOTHROW(hyp2f1_terminating(-1, -4, -1.0, 0.5));
        CHECK_THROWS_AS(hyp2f1_terminating(1, -2, 1.0, 0.5), std::invalid_argument);
    }
}

TEST_CASE("coeff_A") {
    for (int l : {-9, -1, 0, 3, 17}) CHECK(coeff_A(0, 0, l) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(coeff_A(1, 0, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK(coeff_A(1, 1, 0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(coeff_A(2, 3, -4) == coeff_A(3, 2, 4));

    SUBCASE("no overflow at indices of 30") {
        using testing::factorial_big;
        for (auto [ps, pi, l] : {std::tuple{30, 30, 30}, {30, 0, 30}, {12, 25, 7}}) {
            const auto exact = factorial_big(ps + pi + l) /
                               boost::multiprecision::sqrt(factorial_big(ps) * factorial_big(pi) *
                                                           factorial_big(ps + l) * factorial_big(pi + l));
            const double got = coeff_A(ps, pi, l);
            CHECK(std::isfinite(got));
            CHECK(rel(got, static_cast<double>(exact)) < 1e-12);
        }
    }
}

TEST_CASE("amplitude selection rule and p=0 values") {
    const auto g = BeamGeometry::from_gammas(1.0, 1.0);
    CHECK(amplitude(LGIndex{1, 0}, LGIndex{1, 0}, g).value == 0.0);
    CHECK(amplitude(LGIndex{3, 1}, LGIndex{-2, 0}, g).value == 0.0);
    const double c1 = amplitude(LGIndex{1, 0}, LGIndex{-1, 0}, g).value;
    const double c0 = amplitude(LGIndex{0, 0}, LGIndex{0, 0}, g).value;
    CHECK(c1 * c1 / (c0 * c0) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
    CHECK(c1 < 0.0);  // (-2 g_s g_i)^|l| keeps its sign
}

TEST_CASE("amplitude equals the literal closed form away from its singular set") {
    // amplitude() sums the hypergeometric factor as a polynomial; the
    // literal expression divides by 1 - (gs^2 - gi^2)^2 first.
    for (auto [gs, gi] : {std::pair{1.3, 0.8}, {0.5, 0.5}, {2.03, 2.03}, {0.7, 1.9}, {3.05, 0.4}})
        for (int l = -5; l <= 5; ++l)
            for (int ps = 0; ps <= 3; ++ps)
                for (int pi = 0; pi <= 3; ++pi) {
                    const double ref = testing::amplitude_literal(l, ps, pi, gs, gi);
                    const double got = amplitude_value(l, ps, pi, gs, gi);
                    INFO("gs=" << gs << " gi=" << gi << " l=" << l << " ps=" << ps << " pi=" << pi);
                    CHECK(std::abs(got - ref) <= 1e-11 * std::max(std::abs(ref), 1e-300) + 1e-300);
                }
}

TEST_CASE("amplitude stays finite where the literal argument is singular") {
    // gs^2 - gi^2 = 1 makes 1 - (gs^2 - gi^2)^2 vanish.
    const double gi = 0.75;
    const double gs = 1.25;
    REQUIRE(std::isinf(hyp2f1_argument(gs, gi)));
    for (int ps = 0; ps <= 3; ++ps)
        for (int pi = 0; pi <= 3; ++pi) CHECK(std::isfinite(amplitude_value(2, ps, pi, gs, gi)));
    // Continuity across the singular point.
    const double left = amplitude_value(2, 2, 2, gs - 1e-7, gi);
    const double right = amplitude_value(2, 2, 2, gs + 1e-7, gi);
    const double at = amplitude_value(2, 2, 2, gs, gi);
    CHECK(std::abs(at - 0.5 * (left + right)) < 1e-9 * std::max(1.0, std::abs(at)));
}

TEST_CASE("amplitude reduces to probability_p0") {
    for (double gamma : {0.3, 1.0, 2.03, 3.05, 5.0}) {
        const double c0 = amplitude_value(0, 0, 0, gamma, gamma);
        for (int l = -10; l <= 10; ++l) {
            const double c = amplitude_value(l, 0, 0, gamma, gamma);
            CHECK(rel(c * c / (c0 * c0), probability_p0(l, gamma)) < 1e-12);
        }
    }
}

TEST_CASE("amplitude symmetries") {
    for (auto [gs, gi] : {std::pair{1.3, 0.8}, {0.5, 2.2}, {2.03, 2.03}})
        for (int l = 0; l <= 6; ++l)
            for (int ps = 0; ps <= 3; ++ps)
                for (int pi = 0; pi <= 3; ++pi) {
                    const double a = amplitude_value(l, ps, pi, gs, gi);
                    CHECK(amplitude_value(-l, ps, pi, gs, gi) == a);
                    const double swapped = amplitude_value(l, pi, ps, gi, gs);
                    CHECK(std::abs(swapped - a) <= 1e-13 * std::abs(a) + 1e-300);
                }
}

TEST_CASE("hypergeometric argument for equal gammas is 1 - 4 gamma^4") {
    for (double g : {0.3, 0.5, 1.0, 2.03, 3.05}) {
        const double x = hyp2f1_argument(g, g);
        const double expect = 1.0 - 4.0 * g * g * g * g;
        CHECK(std::abs(x - expect) <= 1e-14 * std::max(1.0, std::abs(expect)));
    }
    CHECK(std::isinf(hyp2f1_argument(1.25, 0.75)));
}

TEST_CASE("probability_p0") {
    CHECK(probability_p0(0, 0.37) == 1.0);
    CHECK(probability_p0(2, 1.0) == doctest::Approx(16.0 / 81.0).epsilon(1e-15));
    CHECK(probability_p0(1, 2.03) == doctest::Approx(0.79530005296782653).epsilon(1e-14));
    CHECK(std::abs(probability_p0(1, 2.03) - 0.79531) < 1e-5);
    CHECK_THROWS(probability_p0(1, 0.0));

    SUBCASE("monotone in gamma and in |l|") {
        for (int l = 1; l <= 8; ++l) {
            double prev = 0.0;
            for (double g = 0.05; g < 20.0; g *= 1.1) {
                const double w = probability_p0(l, g);
                CHECK(w > prev);
                CHECK(w < 1.0);
                prev = w;
            }
        }
        for (double g : {0.1, 1.0, 3.05}) {
            double prev = 2.0;
            for (int l = 0; l <= 12; ++l) {
                CHECK(probability_p0(l, g) < prev);
                CHECK(probability_p0(-l, g) == probability_p0(l, g));
                prev = probability_p0(l, g);
            }
        }
    }
}

TEST_CASE("jsmd_matrix") {
    const auto g = BeamGeometry::from_gammas(3.05, 3.05);
    const auto m = jsmd_matrix(LRange{}, 0, 0, g);
    CHECK(m.l_range.size() == 13);
    CHECK(m.values.size() == 169);
    CHECK(m.at(0, 0) == 1.0);
    CHECK(m.at(3, 2) == 0.0);
    for (int l = -6; l <= 6; ++l) {
        CHECK(rel(m.at(l, -l), probability_p0(std::abs(l), 3.05)) < 1e-12);
        for (int li = -6; li <= 6; ++li)
            if (l + li != 0) CHECK(m.at(l, li) == 0.0);
    }
    const auto anti = m.antidiagonal();
    CHECK(anti.size() == 13);
    CHECK(anti[6] == 1.0);

    const auto unit = jsmd_matrix(LRange{-4, 4}, 1, 2, BeamGeometry::from_gammas(1.3, 0.8), Normalization::UnitSum);
    double sum = 0.0;
    for (double v : unit.values) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_WITH(jsmd_matrix(LRange{2, 1}, 0, 0, g), doctest::Contains("l_range"));
    CHECK_THROWS(jsmd_matrix(LRange{}, -1, 0, g));
    CHECK_THROWS(m.at(7, 0));

    // Asymmetric ranges: only cells whose partner is in range are filled.
    const auto lop = jsmd_matrix(LRange{-1, 3}, 0, 0, g);
    CHECK(lop.at(1, -1) > 0.0);
    CHECK(lop.at(3, -1) == 0.0);
    CHECK(lop.antidiagonal().size() == 3);
}

TEST_CASE("normalization names round trip") {
    for (auto n : {Normalization::GlobalMax, Normalization::UnitSum}) CHECK(parse_normalization(to_string(n)) == n);
    CHECK_THROWS(parse_normalization("peak"));
}

TEST_CASE("spectrum_vs_gamma") {
    const std::vector<int> ls{0, 1, 2, 3};
    std::vector<double> grid;
    for (double g = 0.5; g <= 4.0 + 1e-12; g += 0.1) grid.push_back(g);
    const auto curves = spectrum_vs_gamma(ls, grid);
    REQUIRE(curves.size() == 4);
    for (const auto& s : curves[0].samples) CHECK(s.weight == 1.0);
    for (std::size_t c = 1; c < curves.size(); ++c)
        for (std::size_t k = 1; k < grid.size(); ++k)
            CHECK(curves[c].samples[k].weight > curves[c].samples[k - 1].weight);

    const std::vector<double> large{1e3, 1e5};
    const auto far = spectrum_vs_gamma(std::vector<int>{1, 6}, large);
    CHECK(far[1].samples[1].weight > 0.9999);
    CHECK(far[0].samples[1].weight > far[0].samples[0].weight);

    const std::vector<double> g305{3.05};
    const std::vector<int> l06{0, 1, 2, 3, 4, 5, 6};
    const auto bars = spectrum_vs_gamma(l06, g305);
    const double expected[] = {1.0, 0.9005869623092287, 0.8110568766813643, 0.7304272488304806,
                               0.6578132572121297, 0.5924180430794113, 0.5335239658340648};
    for (int l = 0; l <= 6; ++l) CHECK(bars[l].samples[0].weight == doctest::Approx(expected[l]).epsilon(1e-13));

    CHECK_THROWS(spectrum_vs_gamma(std::vector<int>{}, grid));
}

TEST_CASE("thin_crystal_figure") {
    BeamGeometry g;
    g.pump_waist = 2e-3;
    g.pump_wavelength = 405e-9;
    g.crystal_length = 2e-3;
    CHECK(thin_crystal_figure(g) == doctest::Approx(70.27283689263065).epsilon(1e-12));
    g.crystal_length *= 4.0;
    CHECK(thin_crystal_figure(g) == doctest::Approx(70.27283689263065 / 2.0).epsilon(1e-12));
    g.pump_waist = 0.1e-3;
    g.crystal_length = 0.2;
    CHECK(thin_crystal_figure(g) == doctest::Approx(0.35136418446315326).epsilon(1e-12));
    CHECK(thin_crystal_figure(g) < kThinCrystalThreshold);
}

TEST_CASE("participation_ratio") {
    const std::vector<double> flat(5, 0.3);
    CHECK(participation_ratio(flat) == doctest::Approx(5.0));
    const std::vector<double> single{0.0, 1.0, 0.0};
    CHECK(participation_ratio(single) == doctest::Approx(1.0));
    CHECK(participation_ratio(std::vector<double>{}) == 0.0);
}
