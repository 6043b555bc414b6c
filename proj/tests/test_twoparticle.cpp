#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "relwave/stats.hpp"
#include "relwave/twoparticle.hpp"

using namespace relwave;

namespace {

DecayGeometry right_angle_geometry(double d1 = 2.0, double d2 = 2.0, double half1 = 0.15,
                                   double half2 = 0.25) {
    DecayGeometry g;
    g.source = {0.0, 0.0, 0.0};
    g.detectors[0] = {"detector_1", {1.0, 0.0, 0.0}, d1, half1};
    g.detectors[1] = {"detector_2", {0.0, 1.0, 0.0}, d2, half2};
    return g;
}

}  // namespace

TEST_CASE("s-wave state construction") {
    const SWaveState s = SWaveState::gaussian(1.0, 0.05, 1.0);
    CHECK(s.size() >= 2);
    CHECK(s.k.front() >= 0.0);
    CHECK(s.energy(0) == Catch::Approx(std::sqrt(s.k[0] * s.k[0] + 1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(SWaveState::gaussian(-1.0, 0.05, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SWaveState::gaussian(1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("s-wave amplitude at the origin") {
    const SWaveState s = SWaveState::gaussian(1.0, 0.1, 1.0, 256);
    // j0(0) = 1: the amplitude collapses to the plain radial quadrature
    cdouble expected{0.0, 0.0};
    for (std::size_t i = 0; i < s.size(); ++i) expected += s.g[i] * s.k[i] * s.k[i] * s.weights[i];
    CHECK(std::abs(swave_amplitude(s, 0.0, 0.0) - expected) < 1e-12);
    CHECK_THROWS_AS(swave_amplitude(s, -0.1, 0.0), std::invalid_argument);
}

TEST_CASE("s-wave amplitude matches a brute-force loop") {
    const SWaveState s = SWaveState::gaussian(0.8, 0.15, 0.5, 200);
    for (double r : {0.0, 1.7, 12.4}) {
        for (double t : {0.0, 3.0}) {
            cdouble direct{0.0, 0.0};
            for (std::size_t i = 0; i < s.size(); ++i) {
                const double kk = s.k[i];
                const double j0 = kk * r < 1e-8 ? 1.0 : std::sin(kk * r) / (kk * r);
                const double e = std::sqrt(kk * kk + 0.25);
                direct += s.g[i] * kk * kk * j0 * s.weights[i] *
                          cdouble{std::cos(2.0 * e * t), std::sin(2.0 * e * t)};
            }
            CHECK(std::abs(swave_amplitude(s, r, t) - direct) < 1e-12);
        }
    }
}

TEST_CASE("spherical shell expands at twice the group velocity") {
    const SWaveState s = SWaveState::gaussian(1.0, 0.02, 1.0, 512);
    const double v_group = 1.0 / std::sqrt(2.0);  // k/E at the peak momentum
    const double expected_speed = 2.0 * v_group;

    // numerical peak tracking over a time sweep
    std::vector<double> times{150.0, 200.0, 250.0, 300.0, 350.0};
    std::vector<double> peaks;
    for (double t : times) {
        const double guess = expected_speed * t;
        double best_r = guess, best = -1.0;
        for (double r = guess - 75.0; r <= guess + 75.0; r += 0.5) {
            const double a = std::abs(swave_amplitude(s, r, t));
            if (a > best) {
                best = a;
                best_r = r;
            }
        }
        peaks.push_back(best_r);
    }
    // least-squares slope of peak position vs time
    double st = 0, sp = 0, stt = 0, stp = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        st += times[i];
        sp += peaks[i];
        stt += times[i] * times[i];
        stp += times[i] * peaks[i];
    }
    const double n = static_cast<double>(times.size());
    const double slope = (n * stp - st * sp) / (n * stt - st * st);
    CHECK(slope == Catch::Approx(expected_speed).epsilon(0.02));
}

TEST_CASE("conditional state after a momentum-selective detection") {
    const SWaveState s = SWaveState::gaussian(1.0, 0.05, 1.0);
    const Vec3 selected{0.97, 0.0, 0.0};
    const PlaneWaveDescriptor p2 = conditional_state(selected, s);

    // exactly opposite momentum; the pair's total momentum vanishes
    CHECK(p2.momentum.x == -selected.x);
    CHECK(p2.momentum.y == -selected.y);
    CHECK(p2.momentum.z == -selected.z);
    CHECK(p2.momentum.x + selected.x == 0.0);

    // amplitude weight is g at the selected |k|
    const double d = (0.97 - 1.0) / 0.05;
    CHECK(std::abs(p2.weight) == Catch::Approx(std::exp(-0.25 * d * d)).epsilon(1e-3));
    CHECK(p2.energy == Catch::Approx(std::sqrt(0.97 * 0.97 + 1.0)).epsilon(1e-14));
    CHECK(std::abs(p2.phase(1.3) - std::polar(1.0, p2.energy * 1.3)) < 1e-15);

    // outside the profile support: probability-zero detection
    CHECK_THROWS_AS(conditional_state({3.0, 0.0, 0.0}, s), std::domain_error);
}

TEST_CASE("decay scenario: one detector fires, the other is silent") {
    const SWaveState state = SWaveState::gaussian(1.0, 0.05, 1.0);
    const DecayGeometry geom = right_angle_geometry();
    const DecayReport rep = run_90deg_scenario(geom, BoostParameters::along_x(0.5), state, 2000, 77);

    REQUIRE(rep.trials.size() == 2000);
    CHECK(rep.fire_counts[0] + rep.fire_counts[1] == 2000);
    for (const auto& t : rep.trials) {
        CHECK((t.firing == 0 || t.firing == 1));
        CHECK(t.silent == 1 - t.firing);
        // momentum anticorrelation holds exactly
        CHECK(t.momentum_2.x == -t.momentum_1.x);
        CHECK(t.momentum_2.y == -t.momentum_1.y);
        CHECK(t.momentum_2.z == -t.momentum_1.z);
        // the sampled momentum lies inside the firing detector's cone
        const Detector& det = geom.detectors[static_cast<std::size_t>(t.firing)];
        const double cosang = dot(normalized(t.momentum_1), det.direction);
        CHECK(cosang >= std::cos(det.half_angle) - 1e-12);
    }
}

TEST_CASE("decay scenario: Born weights over the acceptance cones") {
    const SWaveState state = SWaveState::gaussian(1.0, 0.05, 1.0);
    const DecayReport rep =
        run_90deg_scenario(right_angle_geometry(), BoostParameters::along_x(0.5), state, 2000, 5);
    const double p0 = rep.born_weights[0];
    const double freq0 = static_cast<double>(rep.fire_counts[0]) / 2000.0;
    CHECK(std::abs(freq0 - p0) <= binomial_band(p0, 2000));

    // isotropic s-wave: the weights are the cone solid angles
    const double w0 = 1.0 - std::cos(0.15), w1 = 1.0 - std::cos(0.25);
    CHECK(p0 == Catch::Approx(w0 / (w0 + w1)).epsilon(1e-12));
}

TEST_CASE("decay scenario: boosted ordering and the frame flip") {
    const SWaveState state = SWaveState::gaussian(1.0, 0.05, 1.0);
    const double expected = 1.1547005383792515;  // gamma beta dx at beta 0.5, dx 2

    const DecayReport plus =
        run_90deg_scenario(right_angle_geometry(), BoostParameters::along_x(0.5), state, 50, 9);
    for (const auto& t : plus.trials) {
        CHECK(std::abs(std::abs(t.boosted_delay) - expected) < 1e-12);
        CHECK(t.first_boosted == 0);  // downstream detector arrives first for beta > 0
    }
    const DecayReport minus =
        run_90deg_scenario(right_angle_geometry(), BoostParameters::along_x(-0.5), state, 50, 9);
    for (const auto& t : minus.trials) CHECK(t.first_boosted == 1);  // flipped winner
    CHECK(plus.n_ties == 0);

    // rest-frame statistics cannot depend on the observer: identical seeds
    // give identical firing sequences in the two frames
    for (std::size_t i = 0; i < plus.trials.size(); ++i)
        CHECK(plus.trials[i].firing == minus.trials[i].firing);
}

TEST_CASE("decay scenario: simultaneous arrivals and ties") {
    const SWaveState state = SWaveState::gaussian(1.0, 0.05, 1.0);

    // aligned back-to-back geometry at beta = 0: simultaneous arrivals
    DecayGeometry aligned;
    aligned.source = {0.0, 0.0, 0.0};
    aligned.detectors[0] = {"detector_1", {1.0, 0.0, 0.0}, 2.0, 0.2};
    aligned.detectors[1] = {"detector_2", {-1.0, 0.0, 0.0}, 2.0, 0.2};
    const DecayReport rest = run_90deg_scenario(aligned, BoostParameters::along_x(0.0), state, 20, 3);
    for (const auto& t : rest.trials) {
        CHECK(t.arrival_rest[0].t == t.arrival_rest[1].t);
        CHECK(t.boosted_delay == 0.0);
        CHECK(t.first_boosted == kTie);
    }

    // both detectors perpendicular to the boost axis: a genuine ordering tie
    DecayGeometry perp;
    perp.source = {0.0, 0.0, 0.0};
    perp.detectors[0] = {"detector_1", {0.0, 1.0, 0.0}, 2.0, 0.2};
    perp.detectors[1] = {"detector_2", {0.0, -1.0, 0.0}, 2.0, 0.2};
    const DecayReport tied = run_90deg_scenario(perp, BoostParameters::along_x(0.6), state, 20, 3);
    CHECK(tied.n_ties == 20);
}

TEST_CASE("decay geometry validation") {
    DecayGeometry bad = right_angle_geometry();
    bad.detectors[0].direction = {1.0, 1.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = right_angle_geometry();
    bad.detectors[1].distance = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("hemisphere screen: isotropic hits are uniform over equal solid angles") {
    const ScreenReport rep = run_einstein_screen(20000, isotropic_profile(), 6, 12, 11);
    REQUIRE(rep.bin_probs.size() == 72);
    for (double p : rep.bin_probs) CHECK(p == Catch::Approx(1.0 / 72.0).epsilon(1e-12));
    const ChiSquareTest chi = chi_square_test(rep.bin_counts, rep.bin_probs, 20000);
    CHECK(chi.pass);

    // per-trial exclusivity: every trial lands in exactly one bin
    std::size_t total = 0;
    for (std::size_t c : rep.bin_counts) total += c;
    CHECK(total == 20000);
    CHECK(rep.hits.size() == 20000);
    for (const auto& h : rep.hits) {
        CHECK((h.theta >= 0.0 && h.theta <= std::numbers::pi / 2.0 + 1e-12));
        CHECK((h.phi >= 0.0 && h.phi < 2.0 * std::numbers::pi));
        CHECK(h.bin < 72);
    }
}

TEST_CASE("hemisphere screen: concentrated profile hits a single bin") {
    // one azimuth sector, cap covering only the topmost polar ring
    const ScreenReport rep =
        run_einstein_screen(500, polar_cap_profile(35.0 * std::numbers::pi / 180.0), 6, 1, 13);
    for (const auto& h : rep.hits) CHECK(h.bin == 5);
    CHECK(rep.bin_counts[5] == 500);

    // a cap that covers no bin center leaves nothing to normalize
    CHECK_THROWS_AS(run_einstein_screen(10, polar_cap_profile(0.05), 6, 1, 13), std::invalid_argument);
}
