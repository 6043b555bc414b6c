#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "relwave/reduction.hpp"
#include "relwave/rng.hpp"
#include "relwave/spacetime.hpp"
#include "relwave/threading.hpp"
#include "relwave/wavepacket.hpp"

// Two-particle decay scenarios: an s-wave relative wave packet expanding
// outwards, momentum-conditional collapse of the undetected partner, the
// 90-degree misaligned-detector experiment, and the hemisphere screen.

namespace relwave {

/// Isotropic (s-wave) relative state of two equal-mass decay products,
/// expanded over the radial momentum grid. No angular data is stored: the
/// state depends on |r| only by construction.
struct SWaveState {
    std::vector<double> k;        // radial momentum samples, ascending, >= 0
    std::vector<double> weights;  // quadrature weights
    std::vector<cdouble> g;       // energy-width profile of the decaying particle
    double mass = 0.0;

    std::size_t size() const { return k.size(); }
    double energy(std::size_t i) const { return std::sqrt(k[i] * k[i] + mass * mass); }

    /// Gaussian profile centered on the decay momentum.
    static SWaveState gaussian(double k_center, double k_sigma, double mass, std::size_t n = 512,
                               double span_sigmas = 8.0) {
        if (!(k_sigma > 0.0) || !(k_center > 0.0) || n < 2)
            throw std::invalid_argument("SWaveState::gaussian: bad arguments");
        SWaveState s;
        s.mass = mass;
        const double lo = std::max(0.0, k_center - span_sigmas * k_sigma);
        const double hi = k_center + span_sigmas * k_sigma;
        const double step = (hi - lo) / static_cast<double>(n - 1);
        s.k.resize(n);
        s.weights.resize(n);
        s.g.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.k[i] = lo + step * static_cast<double>(i);
            s.weights[i] = step * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
            const double d = (s.k[i] - k_center) / k_sigma;
            s.g[i] = std::exp(-0.25 * d * d);
        }
        return s;
    }
};

inline double spherical_j0(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

/// Radial amplitude of the expanding spherical packet:
/// sum_k k^2 j0(k r) g(k) e^{2 i E_k t} weights. The factor 2 in the phase
/// carries both particles' energies.
inline cdouble swave_amplitude(const SWaveState& s, double r, double t) {
    if (!(r >= 0.0)) throw std::invalid_argument("swave_amplitude: r must be >= 0");
    cdouble acc{0.0, 0.0};
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double kk = s.k[i];
        acc += s.g[i] * std::polar(kk * kk * spherical_j0(kk * r) * s.weights[i], 2.0 * s.energy(i) * t);
    }
    return acc;
}

/// Plane-wave state of the undetected particle after a momentum-selective
/// detection of its partner: exactly opposite momentum, amplitude g(|k|),
/// evolution phase e^{i E_k t}.
struct PlaneWaveDescriptor {
    Vec3 momentum;   // momentum of the undetected particle (= -selected)
    cdouble weight;  // g at the selected |k|
    double energy;   // E_k of one particle

    cdouble phase(double t) const { return std::polar(1.0, energy * t); }
};

inline PlaneWaveDescriptor conditional_state(const Vec3& selected_k, const SWaveState& s) {
    const double kmag = norm(selected_k);
    if (kmag < s.k.front() || kmag > s.k.back())
        throw std::domain_error("conditional_state: selected momentum outside the profile support (probability-zero detection)");
    // linear interpolation of g at |k|
    const double u = (kmag - s.k.front()) / (s.k.back() - s.k.front()) * static_cast<double>(s.size() - 1);
    std::size_t i = static_cast<std::size_t>(u);
    if (i > s.size() - 2) i = s.size() - 2;
    const double f = u - static_cast<double>(i);
    const cdouble gk = (1.0 - f) * s.g[i] + f * s.g[i + 1];
    if (std::abs(gk) < 1e-12)
        throw std::domain_error("conditional_state: selected momentum outside the profile support (probability-zero detection)");
    return {-selected_k, gk, std::sqrt(kmag * kmag + s.mass * s.mass)};
}

struct Detector {
    std::string label;
    Vec3 direction;     // unit vector from the source
    double distance;    // > 0
    double half_angle;  // acceptance cone half-angle, radians
};

struct DecayGeometry {
    Vec3 source{};
    std::array<Detector, 2> detectors;

    void validate() const {
        for (const auto& d : detectors) {
            if (std::abs(norm(d.direction) - 1.0) > 1e-12)
                throw std::invalid_argument("DecayGeometry: detector directions must be unit vectors");
            if (!(d.distance > 0.0)) throw std::invalid_argument("DecayGeometry: detector distances must be > 0");
            if (!(d.half_angle > 0.0) || d.half_angle >= std::numbers::pi / 2)
                throw std::invalid_argument("DecayGeometry: acceptance half-angle must be in (0, pi/2)");
        }
    }
};

namespace detail {

// orthonormal basis completing a unit axis
inline std::pair<Vec3, Vec3> tangent_basis(const Vec3& axis) {
    const Vec3 helper = std::abs(axis.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    const Vec3 e1 = normalized(cross(axis, helper));
    return {e1, cross(axis, e1)};
}

// uniform direction inside the cone of given half-angle around axis
inline Vec3 sample_cone(const Vec3& axis, double half_angle, SplitMix64& rng) {
    const double u = rng.uniform(std::cos(half_angle), 1.0);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    const auto [e1, e2] = tangent_basis(axis);
    return u * axis + s * std::cos(phi) * e1 + s * std::sin(phi) * e2;
}

// categorical sample from the radial Born density k^2 |g|^2 weights
inline std::size_t sample_radial_bin(const SWaveState& s, SplitMix64& rng) {
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        total += s.k[i] * s.k[i] * std::norm(s.g[i]) * s.weights[i];
    const double u = rng.uniform01() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        cum += s.k[i] * s.k[i] * std::norm(s.g[i]) * s.weights[i];
        if (u < cum) return i;
    }
    return s.size() - 1;
}

}  // namespace detail

inline constexpr int kTie = -1;

struct DecayTrial {
    Vec3 momentum_1;  // momentum of the detected particle
    Vec3 momentum_2;  // exactly -momentum_1
    int firing = 0;   // detector index that clicks this trial
    int silent = 1;
    std::array<FourVector, 2> arrival_rest;  // packet-front arrival events, detector rest frame
    double boosted_delay = 0.0;              // t'(arrival 0) - t'(arrival 1)
    int first_boosted = kTie;                // ordering winner in the moving frame, kTie on a tie
};

struct DecayReport {
    DecayGeometry geometry;
    BoostParameters frame;
    std::array<double, 2> born_weights{};  // acceptance-cone Born weights
    std::array<std::size_t, 2> fire_counts{};
    std::size_t n_ties = 0;
    std::vector<DecayTrial> trials;
    std::vector<MeasurementRecord> records;
};

/// The misaligned-detector decay experiment. Which detector clicks is Born
/// over the two acceptance cones (the s-wave is isotropic, so the weights are
/// the solid angles); conditioning the partner on the opposite momentum keeps
/// the other detector silent, so exactly one detector fires per trial. The
/// moving-frame arrival ordering is reported per trial but never feeds back
/// into the statistics: Born probabilities belong to the detector rest frame.
inline DecayReport run_90deg_scenario(const DecayGeometry& geom, const BoostParameters& b,
                                      const SWaveState& state, std::size_t n_trials,
                                      std::uint64_t seed, unsigned n_threads = 1) {
    geom.validate();
    DecayReport rep;
    rep.geometry = geom;
    rep.frame = b;

    const double w0 = 1.0 - std::cos(geom.detectors[0].half_angle);
    const double w1 = 1.0 - std::cos(geom.detectors[1].half_angle);
    rep.born_weights = {w0 / (w0 + w1), w1 / (w0 + w1)};

    rep.trials.resize(n_trials);
    rep.records.resize(n_trials);
    parallel_for_trials(n_trials, n_threads, [&](std::size_t trial) {
        const std::uint64_t trial_seed = derive_seed(seed, trial);
        SplitMix64 rng(trial_seed);
        DecayTrial t;

        const double pick = rng.uniform01();
        t.firing = pick < rep.born_weights[0] ? 0 : 1;
        t.silent = 1 - t.firing;

        const std::size_t bin = detail::sample_radial_bin(state, rng);
        const double kmag = state.k[bin];
        const Vec3 dir = detail::sample_cone(geom.detectors[t.firing].direction,
                                             geom.detectors[t.firing].half_angle, rng);
        t.momentum_1 = kmag * dir;
        t.momentum_2 = -t.momentum_1;

        // packet-front arrivals from classical ray propagation at the group
        // velocity of the sampled momentum (the packets are well localized)
        const double v = kmag / state.energy(bin);
        for (int d = 0; d < 2; ++d) {
            const Detector& det = geom.detectors[d];
            t.arrival_rest[d] =
                FourVector::from(det.distance / v, geom.source + det.distance * det.direction);
        }
        const double tp0 = boost(t.arrival_rest[0], b).t;
        const double tp1 = boost(t.arrival_rest[1], b).t;
        t.boosted_delay = tp0 - tp1;
        if (t.boosted_delay == 0.0)
            t.first_boosted = kTie;  // measure-zero; reported, never broken randomly
        else
            t.first_boosted = t.boosted_delay < 0.0 ? 0 : 1;

        MeasurementRecord rec;
        rec.outcome_label = geom.detectors[t.firing].label;
        rec.event = t.arrival_rest[t.firing];
        rec.pre_norm = 0.5 * (w0 + w1);  // solid-angle fraction of the union before conditioning
        rec.rng_seed = trial_seed;
        rec.probabilities = {rep.born_weights[0], rep.born_weights[1]};
        rec.policy = "instantaneous-born";
        rep.records[trial] = std::move(rec);
        rep.trials[trial] = t;
    });
    for (const auto& t : rep.trials) {
        rep.fire_counts[static_cast<std::size_t>(t.firing)] += 1;
        if (t.first_boosted == kTie) rep.n_ties += 1;
    }
    return rep;
}

/// |amplitude|^2 density over the outgoing hemisphere, as a function of
/// polar angle theta in [0, pi/2] and azimuth phi in [0, 2 pi).
using AngularProfile = std::function<double(double theta, double phi)>;

inline AngularProfile isotropic_profile() {
    return [](double, double) { return 1.0; };
}

/// Nonzero only within cap_half_angle of the pole; for concentration tests.
inline AngularProfile polar_cap_profile(double cap_half_angle) {
    return [cap_half_angle](double theta, double) { return theta <= cap_half_angle ? 1.0 : 0.0; };
}

struct ScreenHit {
    double theta = 0.0;
    double phi = 0.0;
    std::size_t bin = 0;
};

struct ScreenReport {
    int n_polar = 0;
    int n_azimuth = 0;
    std::vector<double> bin_probs;         // Born weights per equal-solid-angle bin
    std::vector<std::size_t> bin_counts;
    std::vector<ScreenHit> hits;
};

/// The hemisphere-screen experiment: every electron is spread over the whole
/// screen until it is detected at exactly one spot; all other spots lose
/// their chance in the same trial. Bins are equal solid angle (uniform in
/// cos theta x phi), so an isotropic profile gives uniform bin weights.
inline ScreenReport run_einstein_screen(std::size_t n_trials, const AngularProfile& profile,
                                        int n_polar, int n_azimuth, std::uint64_t seed,
                                        unsigned n_threads = 1) {
    if (n_polar < 1 || n_azimuth < 1) throw std::invalid_argument("run_einstein_screen: bad binning");
    ScreenReport rep;
    rep.n_polar = n_polar;
    rep.n_azimuth = n_azimuth;
    const std::size_t n_bins = static_cast<std::size_t>(n_polar) * n_azimuth;

    // Born weights from the profile at the bin centers (bins have equal
    // solid angle, so the area factor drops out of the normalization)
    rep.bin_probs.resize(n_bins);
    double total = 0.0;
    for (int iu = 0; iu < n_polar; ++iu) {
        const double u_center = (iu + 0.5) / n_polar;  // u = cos theta in (0, 1]
        for (int ip = 0; ip < n_azimuth; ++ip) {
            const double phi_center = 2.0 * std::numbers::pi * (ip + 0.5) / n_azimuth;
            const double density = profile(std::acos(u_center), phi_center);
            if (!(density >= 0.0)) throw std::invalid_argument("run_einstein_screen: profile must be >= 0");
            rep.bin_probs[static_cast<std::size_t>(iu) * n_azimuth + ip] = density;
            total += density;
        }
    }
    if (!(total > 0.0)) throw std::invalid_argument("run_einstein_screen: profile vanishes on the hemisphere");
    for (auto& p : rep.bin_probs) p /= total;

    rep.bin_counts.assign(n_bins, 0);
    rep.hits.resize(n_trials);
    parallel_for_trials(n_trials, n_threads, [&](std::size_t trial) {
        SplitMix64 rng(derive_seed(seed, trial));
        const std::size_t bin = sample_outcome(rep.bin_probs, rng.next());
        const int iu = static_cast<int>(bin) / n_azimuth;
        const int ip = static_cast<int>(bin) % n_azimuth;
        const double u = rng.uniform(static_cast<double>(iu) / n_polar, (iu + 1.0) / n_polar);
        const double phi = rng.uniform(2.0 * std::numbers::pi * ip / n_azimuth,
                                       2.0 * std::numbers::pi * (ip + 1.0) / n_azimuth);
        rep.hits[trial] = {std::acos(u), phi, bin};
    });
    for (const auto& h : rep.hits) rep.bin_counts[h.bin] += 1;
    return rep;
}

}  // namespace relwave
