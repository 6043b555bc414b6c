#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "relwave/config.hpp"
#include "relwave/epr.hpp"
#include "relwave/lorentz_action.hpp"
#include "relwave/reduction.hpp"
#include "relwave/rng.hpp"
#include "relwave/scenario.hpp"
#include "relwave/spacetime.hpp"
#include "relwave/stats.hpp"
#include "relwave/twoparticle.hpp"
#include "relwave/wavepacket.hpp"

// End-to-end verification suite: every numbered check runs at its stated
// tolerance and reports one pass/fail line. Where a check needs an
// independent oracle (a brute-force sum, an explicit event boost, a closed
// form), the oracle is written out here as a plain loop so it shares no code
// path with the implementation it is checking.

namespace relwave::verify {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace detail {

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline Vec3 random_unit(SplitMix64& rng) {
    // uniform on the sphere
    const double u = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    return {s * std::cos(phi), s * std::sin(phi), u};
}

inline FourVector random_event(SplitMix64& rng, double scale) {
    return {rng.uniform(-scale, scale), rng.uniform(-scale, scale), rng.uniform(-scale, scale),
            rng.uniform(-scale, scale)};
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

}  // namespace detail

// 1. interval invariance under random boosts
inline CriterionResult criterion_interval_invariance() {
    detail::Timer timer;
    SplitMix64 rng(0x11ce11ce);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const FourVector a = detail::random_event(rng, 5.0);
        const FourVector b = detail::random_event(rng, 5.0);
        const BoostParameters boost_params{rng.uniform(-0.99, 0.99), detail::random_unit(rng)};
        const double before = interval(a, b);
        const double after = interval(boost(a, boost_params), boost(b, boost_params));
        const FourVector d{a.t - b.t, a.x - b.x, a.y - b.y, a.z - b.z};
        const double scale = std::max(1.0, d.t * d.t + norm_sq(d.spatial()));
        worst = std::max(worst, std::abs(after - before) / scale);
    }
    const double secs = timer.seconds();
    const bool pass = worst < 1e-12 && secs < 1.0;
    return {1, "interval invariance (10^4 random boosts)", pass,
            "worst rel err " + detail::fmt(worst) + ", " + detail::fmt(secs) + " s", secs};
}

// 2. boost arithmetic: the beta = 0.6 values and inverse composition
inline CriterionResult criterion_boost_arithmetic() {
    detail::Timer timer;
    const FourVector v{0.0, 1.0, 0.0, 0.0};
    const FourVector w = boost(v, BoostParameters::along_x(0.6));
    double worst = std::max(std::abs(w.x - 1.25), std::abs(w.t - (-0.75)));
    SplitMix64 rng(0xb005);
    for (int i = 0; i < 1000; ++i) {
        const FourVector e = detail::random_event(rng, 3.0);
        const BoostParameters b{rng.uniform(-0.9, 0.9), detail::random_unit(rng)};
        const FourVector back = boost(boost(e, b), b.inverse());
        worst = std::max({worst, std::abs(back.t - e.t), std::abs(back.x - e.x),
                          std::abs(back.y - e.y), std::abs(back.z - e.z)});
    }
    const bool pass = worst < 1e-12;
    return {2, "boost arithmetic (beta = 0.6 triple, inverse composition)", pass,
            "worst abs err " + detail::fmt(worst), timer.seconds()};
}

// 3. ordering delay against the explicit-boost oracle
inline CriterionResult criterion_ordering_delay() {
    detail::Timer timer;
    SplitMix64 rng(0x0bde1);
    double worst = 0.0;
    bool signs_ok = true;
    for (int i = 0; i < 1000; ++i) {
        const double dx = rng.uniform(-5.0, 5.0);
        const double beta = rng.uniform(-0.95, 0.95);
        const Vec3 axis = detail::random_unit(rng);
        const BoostParameters b{beta, axis};
        // oracle: boost two events simultaneous in the rest frame and
        // subtract the resulting times
        const double t0 = rng.uniform(-2.0, 2.0);
        const Vec3 base = detail::random_event(rng, 2.0).spatial();
        const FourVector e1 = FourVector::from(t0, base);
        const FourVector e2 = FourVector::from(t0, base + dx * axis);
        const double oracle = boost(e1, b).t - boost(e2, b).t;
        const double delay = ordering_delay(dx, b);
        worst = std::max(worst, std::abs(delay - oracle) / std::max(1.0, std::abs(oracle)));
        if (ordering_delay(dx, b.inverse()) != -delay) signs_ok = false;
    }
    const bool pass = worst < 1e-12 && signs_ok;
    return {3, "ordering delay vs explicit event boosting (10^3 cases)", pass,
            "worst rel err " + detail::fmt(worst) + (signs_ok ? "" : ", sign flip FAILED"),
            timer.seconds()};
}

// 4. position<->momentum round trip and norm conservation under evolution
inline CriterionResult criterion_round_trip() {
    detail::Timer timer;
    const MomentumGrid grid = MomentumGrid::uniform_1d(2.0, 4096);  // 10 sigma
    const MomentumAmplitude amp = gaussian_packet({0.0, 0.0, 0.0}, 0.2, 1.0, grid);
    const SpatialGrid xgrid = SpatialGrid::conjugate_to(grid);
    const double n0 = norm(amp);

    double worst_rt = 0.0, worst_norm = 0.0;
    for (double t : {0.0, 0.7, 3.1}) {
        const PositionField field = evolve(amp, t, xgrid);
        const InversionResult inv = position_to_momentum(field, amp.mass);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const double k0 = dispersion(amp.grid.points[i], amp.mass);
            const double meas = amp.grid.weights[i] / (2.0 * k0);
            num += std::norm(inv.amplitude.values[i] - amp.values[i]) * meas;
            den += std::norm(amp.values[i]) * meas;
        }
        worst_rt = std::max(worst_rt, std::sqrt(num / den));
        worst_norm = std::max(worst_norm, std::abs(norm(inv.amplitude) - n0) / n0);
    }
    const bool pass = worst_rt < 1e-8 && worst_norm < 1e-10;
    return {4, "wave-packet round trip and norm conservation", pass,
            "round trip L2 " + detail::fmt(worst_rt) + ", norm drift " + detail::fmt(worst_norm),
            timer.seconds()};
}

// 5. nonrelativistic limit of the free evolution
inline CriterionResult criterion_nonrelativistic_limit() {
    detail::Timer timer;
    const double m = 1.0;
    const double sigma = 0.00125;  // 8 sigma span = 0.01 m
    const MomentumAmplitude amp = gaussian_packet({0.0, 0.0, 0.0}, sigma, m, MomentumGrid::packet_default(0.0, sigma));
    const double t = 10.0;  // t * m = 10

    // per-mode phase against the m + k^2/2m evolution law
    double worst_mode = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const double k = relwave::norm(amp.grid.points[i]);
        const double kg_phase = std::sqrt(k * k + m * m) * t;
        const double nr_phase = (m + k * k / (2.0 * m)) * t;
        worst_mode = std::max(worst_mode, std::abs(kg_phase - nr_phase));
    }

    // field-level: independent nonrelativistic synthesis loop as the oracle
    const SpatialGrid xgrid = SpatialGrid::uniform_1d(-1500.0, 1500.0, 257);
    const PositionField kg = evolve(amp, t, xgrid);
    double worst_field = 0.0;
    double peak = 0.0;
    for (const auto& v : kg.values) peak = std::max(peak, std::abs(v));
    for (std::size_t j = 0; j < xgrid.size(); ++j) {
        cdouble nr{0.0, 0.0};
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const double k = amp.grid.points[i].x;
            const double k0 = std::sqrt(k * k + m * m);
            const double phase = -((m + k * k / (2.0 * m)) * t - k * xgrid.points[j].x);
            nr += amp.values[i] * std::polar(amp.grid.weights[i] / k0, phase);
        }
        if (std::abs(kg.values[j]) > 1e-3 * peak)
            worst_field = std::max(worst_field, std::abs(std::arg(kg.values[j] / nr)));
    }
    const bool pass = worst_mode < 1e-4 && worst_field < 1e-4;
    return {5, "nonrelativistic limit (|k| <= 0.01 m, t m = 10)", pass,
            "mode phase err " + detail::fmt(worst_mode) + ", field phase err " + detail::fmt(worst_field),
            timer.seconds()};
}

// 6. pullback vs momentum-boost equivalence on random packets
inline CriterionResult criterion_lorentz_equivalence() {
    detail::Timer timer;
    SplitMix64 rng(0x10e2);
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
        const double sigma = rng.uniform(0.15, 0.3);
        const double m = rng.uniform(0.5, 2.0);
        const double center = rng.uniform(-0.5, 0.5) * sigma;
        const double beta = rng.uniform(-0.8, 0.8);
        const BoostParameters b = BoostParameters::along_x(beta);

        // the grid must hold the boosted image of everything above the
        // momentum_boost support cut (~11 sigma for a Gaussian)
        const double edge = std::abs(center) + 12.0 * sigma;
        const double half = 1.05 * b.gamma() * (edge + std::abs(beta) * dispersion({edge, 0.0, 0.0}, m));
        const MomentumAmplitude amp =
            gaussian_packet({center, 0.0, 0.0}, sigma, m, MomentumGrid::uniform_1d(half, 32768));

        const double sigma_x = 1.0 / (2.0 * sigma);
        std::vector<FourVector> targets(64);
        for (int j = 0; j < 64; ++j) {
            const double x = -2.0 * sigma_x + 4.0 * sigma_x * j / 63.0;
            const double t = sigma_x * (static_cast<double>(j % 3) - 1.0);
            targets[static_cast<std::size_t>(j)] = {t, x, 0.0, 0.0};
        }
        const SpacetimeSampleSet via_pullback = pullback_transform(amp, b, targets);
        const MomentumAmplitude boosted = momentum_boost(amp, b);
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < targets.size(); ++j) {
            num += std::norm(synthesize(boosted, targets[j]) - via_pullback.values[j]);
            den += std::norm(via_pullback.values[j]);
        }
        worst = std::max(worst, std::sqrt(num / den));
    }
    const double secs = timer.seconds();
    const bool pass = worst < 1e-6 && secs < 60.0;
    return {6, "Lorentz-action equivalence (100 random packets, |beta| <= 0.8)", pass,
            "worst L2 diff " + detail::fmt(worst) + ", " + detail::fmt(secs) + " s", secs};
}

// 7. Born statistics chi-square over random fields and partitions
inline CriterionResult criterion_born_statistics() {
    detail::Timer timer;
    SplitMix64 rng(0xb0211);
    bool all_pass = true;
    double worst_ratio = 0.0;
    for (int c = 0; c < 10; ++c) {
        const double sigma = rng.uniform(0.1, 0.4);
        const double center = rng.uniform(-0.3, 0.3);
        const MomentumAmplitude amp = gaussian_packet({center, 0.0, 0.0}, sigma, 1.0,
                                                      MomentumGrid::packet_default(center, sigma, 1024));
        const double sigma_x = 1.0 / (2.0 * sigma);
        const SpatialGrid xgrid = SpatialGrid::uniform_1d(-6.0 * sigma_x, 6.0 * sigma_x, 512);
        const PositionField field = evolve(amp, rng.uniform(0.0, 2.0), xgrid);

        // partition the support at jittered quantiles of the intensity
        const int n_cells = 3 + static_cast<int>(rng.next() % 6);
        std::vector<double> intensity(field.size());
        double total = 0.0;
        for (std::size_t j = 0; j < field.size(); ++j) {
            intensity[j] = std::norm(field.values[j]) * field.grid.weights[j];
            total += intensity[j];
        }
        std::vector<double> cuts{xgrid.axes[0].min};
        double acc = 0.0;
        std::size_t j = 0;
        for (int cell = 1; cell < n_cells; ++cell) {
            const double target = total * (cell + rng.uniform(-0.3, 0.3)) / n_cells;
            while (j < field.size() && acc < target) acc += intensity[j++];
            cuts.push_back(xgrid.points[std::min(j, field.size() - 1)].x);
        }
        cuts.push_back(xgrid.axes[0].max() + 1e-9);
        std::vector<DetectorCell> cells;
        for (int cell = 0; cell < n_cells; ++cell)
            cells.push_back({"cell_" + std::to_string(cell), cuts[cell], cuts[cell + 1]});
        const DetectorArray det(cells, DetectorMode::position);

        const std::vector<double> p = born_probabilities(field, det);
        std::vector<std::size_t> counts(p.size(), 0);
        const std::size_t n_trials = 100000;
        const std::uint64_t master = rng.next();
        for (std::size_t trial = 0; trial < n_trials; ++trial)
            counts[sample_outcome(p, derive_seed(master, trial))] += 1;
        const ChiSquareTest chi = chi_square_test(counts, p, n_trials);
        worst_ratio = std::max(worst_ratio, chi.statistic / chi.threshold);
        if (!chi.pass) all_pass = false;
    }
    return {7, "Born statistics chi-square (10 fields x 10^5 trials, 4 sigma)", all_pass,
            "worst stat/threshold " + detail::fmt(worst_ratio), timer.seconds()};
}

// 8. the misaligned-detector scenario: one firing detector, frame-flipped winner
inline CriterionResult criterion_decay_scenario() {
    detail::Timer timer;
    DecayGeometry geom;
    geom.source = {0.0, 0.0, 0.0};
    geom.detectors[0] = {"detector_1", {1.0, 0.0, 0.0}, 2.0, 0.15};
    geom.detectors[1] = {"detector_2", {0.0, 1.0, 0.0}, 2.0, 0.25};
    const SWaveState state = SWaveState::gaussian(1.0, 0.05, 1.0);

    const DecayReport rep =
        run_90deg_scenario(geom, BoostParameters::along_x(0.5), state, 10000, 0xdecaf);
    bool one_fires = rep.fire_counts[0] + rep.fire_counts[1] == rep.trials.size();
    for (const auto& t : rep.trials)
        if (!((t.firing == 0 || t.firing == 1) && t.silent == 1 - t.firing &&
              t.momentum_2.x == -t.momentum_1.x && t.momentum_2.y == -t.momentum_1.y &&
              t.momentum_2.z == -t.momentum_1.z))
            one_fires = false;

    // Born cone weights at 4 sigma
    const double p0 = rep.born_weights[0];
    const double freq0 = static_cast<double>(rep.fire_counts[0]) / static_cast<double>(rep.trials.size());
    const bool born_ok = std::abs(freq0 - p0) <= binomial_band(p0, rep.trials.size());

    // the stated delay for the equal-distance 90-degree arrangement
    const double expected_delay = std::abs(ordering_delay(2.0, BoostParameters::along_x(0.5)));
    bool delay_ok = true;
    for (const auto& t : rep.trials)
        if (std::abs(std::abs(t.boosted_delay) - expected_delay) > 1e-12) delay_ok = false;

    // winner flips with the boost sign on random equal-distance geometries
    SplitMix64 rng(0x90de6);
    bool flips = true;
    for (int c = 0; c < 25; ++c) {
        DecayGeometry g;
        g.source = {0.0, 0.0, 0.0};
        const double ang1 = rng.uniform(0.0, 2.0 * std::numbers::pi);
        double ang2 = ang1 + rng.uniform(0.4, 2.0 * std::numbers::pi - 0.4);
        const double d = rng.uniform(1.0, 4.0);
        g.detectors[0] = {"detector_1", {std::cos(ang1), std::sin(ang1), 0.0}, d, 0.2};
        g.detectors[1] = {"detector_2", {std::cos(ang2), std::sin(ang2), 0.0}, d, 0.2};
        if (std::abs(g.detectors[0].direction.x - g.detectors[1].direction.x) * d < 1e-6) continue;
        const double beta = rng.uniform(0.1, 0.8);
        const DecayReport plus = run_90deg_scenario(g, BoostParameters::along_x(beta), state, 1, c);
        const DecayReport minus = run_90deg_scenario(g, BoostParameters::along_x(-beta), state, 1, c);
        const int w_plus = plus.trials[0].first_boosted;
        const int w_minus = minus.trials[0].first_boosted;
        if (w_plus == kTie || w_minus == kTie || w_plus != 1 - w_minus) flips = false;
    }
    const bool pass = one_fires && born_ok && delay_ok && flips;
    return {8, "misaligned-detector decay (one fires, Born weights, frame flip)", pass,
            std::string(one_fires ? "" : "one-fires FAILED ") + (born_ok ? "" : "born FAILED ") +
                (delay_ok ? "" : "delay FAILED ") + (flips ? "" : "flip FAILED ") + "freq0 " +
                detail::fmt(freq0) + " vs " + detail::fmt(p0),
            timer.seconds()};
}

// 9. singlet statistics: perfect anticorrelation, -a.b law, CHSH values
inline CriterionResult criterion_singlet_statistics() {
    detail::Timer timer;
    const std::size_t n = 100000;
    bool pass = true;
    std::string detail_msg;

    const AnalyzerSetting a0 = AnalyzerSetting::in_plane(0.4);
    const double e_aa = correlation(a0, a0, n, 0x5e91);
    if (e_aa != -1.0) pass = false;

    SplitMix64 rng(0x519113);
    for (int c = 0; c < 3; ++c) {
        const AnalyzerSetting a = AnalyzerSetting::in_plane(rng.uniform(0.0, std::numbers::pi));
        const AnalyzerSetting b = AnalyzerSetting::in_plane(rng.uniform(0.0, std::numbers::pi));
        const double analytic = -dot(a.axis, b.axis);  // closed-form oracle
        const double est = correlation(a, b, n, rng.next());
        const double band = 4.0 * std::sqrt((1.0 - analytic * analytic) / static_cast<double>(n)) + 1e-9;
        if (std::abs(est - analytic) > band) pass = false;
    }

    const AnalyzerSetting a = AnalyzerSetting::in_plane(0.0);
    const AnalyzerSetting a2 = AnalyzerSetting::in_plane(std::numbers::pi / 2.0);
    const AnalyzerSetting b = AnalyzerSetting::in_plane(std::numbers::pi / 4.0);
    const AnalyzerSetting b2 = AnalyzerSetting::in_plane(3.0 * std::numbers::pi / 4.0);
    const double s_est = chsh(a, a2, b, b2, n, 0xc45);
    const double tsirelson = 2.0 * std::numbers::sqrt2;
    const double band = 4.0 * std::sqrt(4.0 * 0.5 / static_cast<double>(n));
    if (std::abs(std::abs(s_est) - tsirelson) > band) pass = false;
    detail_msg = "|S| = " + detail::fmt(std::abs(s_est)) + " vs 2 sqrt 2 = " + detail::fmt(tsirelson);

    const double s_boundary = chsh_analytic(a, a, a, a);
    if (std::abs(std::abs(s_boundary) - 2.0) > 1e-12) pass = false;

    return {9, "singlet statistics (E(a,a) = -1, E = -a.b, CHSH)", pass,
            detail_msg + ", E(a,a) = " + detail::fmt(e_aa) + ", analytic boundary |S| = " +
                detail::fmt(std::abs(s_boundary)),
            timer.seconds()};
}

// 10. order invariance of the joint table and no-signaling marginals
inline CriterionResult criterion_order_invariance() {
    detail::Timer timer;
    const std::size_t n = 100000;
    const AnalyzerSetting a = AnalyzerSetting::in_plane(0.0);
    const AnalyzerSetting b = AnalyzerSetting::in_plane(std::numbers::pi / 4.0);
    bool pass = true;

    FrameOrdering d1_first{DetectorId::D1, false, 0.3, BoostParameters::along_x(0.5)};
    FrameOrdering d2_first{DetectorId::D2, false, 0.3, BoostParameters::along_x(-0.5)};
    for (const FrameOrdering& order : {d1_first, d2_first}) {
        std::array<std::size_t, 4> counts{};
        for (std::size_t trial = 0; trial < n; ++trial) {
            const JointOutcome o = sample_joint(a, b, order, derive_seed(0x0d4e + (order.first == DetectorId::D1 ? 0 : 1), trial));
            counts[(o.s_d1 == 1 ? 0 : 2) + (o.s_d2 == 1 ? 0 : 1)] += 1;
        }
        int cell = 0;
        for (int s1 : {+1, -1})
            for (int s2 : {+1, -1}) {
                const double p = (1.0 - s1 * s2 * dot(a.axis, b.axis)) / 4.0;  // closed form
                const double freq = static_cast<double>(counts[cell++]) / static_cast<double>(n);
                if (std::abs(freq - p) > binomial_band(p, n)) pass = false;
            }
    }

    // marginals stay (1/2, 1/2) whatever the remote setting
    const std::size_t n_marg = 20000;
    int pair = 0;
    for (double own : {0.0, 1.0, 2.1}) {
        for (double remote : {0.3, 1.2, 2.4, 3.0}) {
            const AnalyzerSetting sa = AnalyzerSetting::in_plane(own);
            const AnalyzerSetting sb = AnalyzerSetting::in_plane(remote);
            std::size_t up_d1 = 0, up_d2 = 0;
            for (std::size_t trial = 0; trial < n_marg; ++trial) {
                const JointOutcome o = sample_joint(sa, sb, d1_first, derive_seed(0xa13 + pair, trial));
                if (o.s_d1 == 1) ++up_d1;
                if (o.s_d2 == 1) ++up_d2;
            }
            const double band = binomial_band(0.5, n_marg);
            if (std::abs(static_cast<double>(up_d1) / n_marg - 0.5) > band) pass = false;
            if (std::abs(static_cast<double>(up_d2) / n_marg - 0.5) > band) pass = false;
            ++pair;
        }
    }
    return {10, "order invariance and no-signaling (4 sigma)", pass, pass ? "all tables within band" : "band exceeded",
            timer.seconds()};
}

// 11. reduction width seen from a moving frame
inline CriterionResult criterion_reduction_width() {
    detail::Timer timer;
    const BoostParameters b = BoostParameters::along_x(0.5);
    bool pass = true;
    double worst = 0.0;
    for (double extent : {2.0, 1.0, 0.1, 0.01, 0.0}) {
        const FourVector reduction_event{1.5, 0.3, 0.0, 0.0};
        const MixedRegion region =
            mixed_region(reduction_event.x - extent / 2.0, reduction_event.x + extent / 2.0, reduction_event, b);
        const double expected = std::abs(time_slice_spread(extent, b));
        worst = std::max(worst, std::abs(region.width() - expected));
        if (std::abs(region.width() - expected) > 1e-10) pass = false;
    }
    const MixedRegion zero = mixed_region(0.3, 0.3, {1.5, 0.3, 0.0, 0.0}, b);
    if (zero.width() != 0.0) pass = false;
    return {11, "reduction width in a moving frame (gamma beta extent)", pass,
            "worst |width - gamma beta extent| = " + detail::fmt(worst), timer.seconds()};
}

// 12. byte-identical reports: repeated runs, serial vs parallel
inline CriterionResult criterion_determinism() {
    detail::Timer timer;
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "relwave_verify_runs";
    std::error_code ec;
    fs::remove_all(base, ec);

    const auto read_file = [](const fs::path& p) {
        std::ifstream is(p, std::ios::binary);
        std::ostringstream os;
        os << is.rdbuf();
        return os.str();
    };
    const auto outputs_equal = [&](const fs::path& d1, const fs::path& d2,
                                   const std::vector<std::string>& names) {
        for (const auto& n : names)
            if (read_file(d1 / n) != read_file(d2 / n)) return false;
        return true;
    };

    bool pass = true;
    {
        RunConfig cfg = parse_config("scenario = epr_boosted\nn_trials = 20000\nsweep_points = 7\nseed = 42");
        cfg.out_dir = (base / "epr_serial_1").string();
        run(cfg);
        cfg.out_dir = (base / "epr_serial_2").string();
        run(cfg);
        cfg.out_dir = (base / "epr_parallel").string();
        cfg.threads = 4;
        run(cfg);
        const std::vector<std::string> names{"report.json", "correlation.csv"};
        if (!outputs_equal(base / "epr_serial_1", base / "epr_serial_2", names)) pass = false;
        if (!outputs_equal(base / "epr_serial_1", base / "epr_parallel", names)) pass = false;
    }
    {
        RunConfig cfg = parse_config("scenario = decay_90\nn_trials = 5000\nseed = 7");
        cfg.out_dir = (base / "decay_serial").string();
        run(cfg);
        cfg.out_dir = (base / "decay_parallel").string();
        cfg.threads = 4;
        run(cfg);
        const std::vector<std::string> names{"report.json", "timeline.csv", "records.jsonl"};
        if (!outputs_equal(base / "decay_serial", base / "decay_parallel", names)) pass = false;
    }
    fs::remove_all(base, ec);
    return {12, "determinism (repeat runs and serial vs parallel, byte-identical)", pass,
            pass ? "all outputs identical" : "outputs differ", timer.seconds()};
}

inline std::vector<CriterionResult> run_all() {
    return {criterion_interval_invariance(), criterion_boost_arithmetic(), criterion_ordering_delay(),
            criterion_round_trip(),          criterion_nonrelativistic_limit(),
            criterion_lorentz_equivalence(), criterion_born_statistics(),
            criterion_decay_scenario(),      criterion_singlet_statistics(),
            criterion_order_invariance(),    criterion_reduction_width(),
            criterion_determinism()};
}

/// one line per criterion; returns 0 when everything passed
inline int report(std::ostream& os, const std::vector<CriterionResult>& results) {
    int failures = 0;
    for (const auto& r : results) {
        os << (r.pass ? "PASS" : "FAIL") << "  " << r.index << ". " << r.name << " -- " << r.detail
           << " [" << detail::fmt(r.seconds) << " s]\n";
        if (!r.pass) ++failures;
    }
    os << (failures == 0 ? "all criteria passed\n" : std::to_string(failures) + " criteria FAILED\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace relwave::verify
