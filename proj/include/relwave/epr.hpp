#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "relwave/rng.hpp"
#include "relwave/spacetime.hpp"
#include "relwave/stats.hpp"
#include "relwave/threading.hpp"
#include "relwave/wavepacket.hpp"

// The Bohm-EPR singlet experiment: joint spin sampling in either measurement
// order, correlation and CHSH statistics, and the frame-dependence of which
// detector measures first.
//
// Joint probabilities are computed from the antisymmetric two-spin state by
// explicit projector algebra on the 4-dimensional product space; the closed
// form (1 - s1 s2 a.b)/4 lives only in the tests as an oracle. Spin axes are
// always evaluated in the detector rest frame (no Wigner rotation is
// modeled), and the frame ordering is metadata: it never branches the
// sampling law.

namespace relwave {

struct AnalyzerSetting {
    Vec3 axis;

    explicit AnalyzerSetting(const Vec3& a) : axis(a) {
        if (std::abs(norm(a) - 1.0) > 1e-12)
            throw std::invalid_argument("AnalyzerSetting: axis must be a unit vector");
    }
    /// setting in the x-z plane, angle from +z
    static AnalyzerSetting in_plane(double angle_rad) {
        return AnalyzerSetting{Vec3{std::sin(angle_rad), 0.0, std::cos(angle_rad)}};
    }
};

namespace spin {

using Mat2 = std::array<std::array<cdouble, 2>, 2>;

inline Mat2 pauli_dot(const Vec3& n) {
    // n.sigma for the standard Pauli matrices
    return {{{cdouble{n.z, 0.0}, cdouble{n.x, -n.y}},
             {cdouble{n.x, n.y}, cdouble{-n.z, 0.0}}}};
}

/// projector onto spin outcome s = +-1 along axis n: (I + s n.sigma)/2
inline Mat2 projector(const Vec3& n, int s) {
    if (s != 1 && s != -1) throw std::invalid_argument("spin projector: outcome must be +1 or -1");
    const Mat2 ns = pauli_dot(n);
    Mat2 p{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            p[i][j] = 0.5 * ((i == j ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0}) + static_cast<double>(s) * ns[i][j]);
    return p;
}

/// <psi| A (x) B |psi> on the two-spin product space
inline cdouble sandwich(const std::array<cdouble, 4>& psi, const Mat2& a, const Mat2& b) {
    std::array<cdouble, 4> out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out[i * 2 + j] += a[i][k] * b[j][l] * psi[k * 2 + l];
    cdouble acc{0.0, 0.0};
    for (int i = 0; i < 4; ++i) acc += std::conj(psi[i]) * out[i];
    return acc;
}

}  // namespace spin

/// The fixed antisymmetric two-spin state of two decay products flying
/// apart back-to-back; the spatial packets are carried as classical tracks
/// (they are well localized, so only the arrival kinematics matter).
class SingletState {
public:
    explicit SingletState(double track_speed = 0.5, const Vec3& emission_axis = {1.0, 0.0, 0.0})
        : track_speed_(track_speed), emission_axis_(emission_axis) {
        if (!(track_speed > 0.0) || track_speed >= 1.0)
            throw std::invalid_argument("SingletState: track speed must be in (0, 1)");
        if (std::abs(norm(emission_axis) - 1.0) > 1e-12)
            throw std::invalid_argument("SingletState: emission axis must be a unit vector");
    }

    /// amplitudes over the basis (uu, ud, du, dd)
    std::array<cdouble, 4> amplitudes() const {
        const double r = 1.0 / std::numbers::sqrt2;
        return {cdouble{0.0, 0.0}, cdouble{r, 0.0}, cdouble{-r, 0.0}, cdouble{0.0, 0.0}};
    }

    /// classical packet track of particle 0 (+axis) or 1 (-axis)
    Vec3 track(int particle, double t) const {
        if (particle != 0 && particle != 1) throw std::invalid_argument("SingletState::track: particle must be 0 or 1");
        const double sign = particle == 0 ? 1.0 : -1.0;
        return sign * track_speed_ * t * emission_axis_;
    }

    double track_speed() const { return track_speed_; }
    const Vec3& emission_axis() const { return emission_axis_; }

private:
    double track_speed_;
    Vec3 emission_axis_;
};

/// P(s1, s2 | a, b) from the singlet state by projector contraction.
inline double joint_probability(const AnalyzerSetting& a, const AnalyzerSetting& b, int s1, int s2) {
    const SingletState state;
    const cdouble v = spin::sandwich(state.amplitudes(), spin::projector(a.axis, s1),
                                     spin::projector(b.axis, s2));
    return v.real();
}

/// marginal of the first-measuring detector (sum over the partner outcome)
inline double marginal_probability(const AnalyzerSetting& own, const AnalyzerSetting& other, int s,
                                   bool own_is_d1) {
    if (own_is_d1)
        return joint_probability(own, other, s, +1) + joint_probability(own, other, s, -1);
    return joint_probability(other, own, +1, s) + joint_probability(other, own, -1, s);
}

enum class DetectorId { D1, D2 };

inline const char* to_string(DetectorId d) { return d == DetectorId::D1 ? "D1" : "D2"; }

struct FrameOrdering {
    DetectorId first = DetectorId::D1;
    bool tie = true;      // simultaneous in this frame (e.g. beta = 0)
    double delay = 0.0;   // |gamma beta dx| between the two arrivals
    BoostParameters frame;
};

/// Which detector measures first in the moving frame, given the two arrival
/// events (simultaneous in the rest frame), and by how much.
inline FrameOrdering frame_roles(const FourVector& arrival_d1, const FourVector& arrival_d2,
                                 const BoostParameters& b) {
    if (std::abs(arrival_d1.t - arrival_d2.t) > 1e-12)
        throw std::invalid_argument("frame_roles: arrivals must be simultaneous in the rest frame");
    FrameOrdering ord;
    ord.frame = b;
    const double t1 = boost(arrival_d1, b).t;
    const double t2 = boost(arrival_d2, b).t;
    ord.delay = std::abs(t1 - t2);
    if (t1 == t2) {
        ord.tie = true;
        ord.first = DetectorId::D1;
    } else {
        ord.tie = false;
        ord.first = t1 < t2 ? DetectorId::D1 : DetectorId::D2;
    }
    return ord;
}

struct JointOutcome {
    int s_d1 = 0;  // +-1 at detector D1 (setting a)
    int s_d2 = 0;  // +-1 at detector D2 (setting b)
    FourVector event_d1{};
    FourVector event_d2{};
    DetectorId measured_first = DetectorId::D1;
};

struct EprArrangement {
    FourVector event_d1{2.0, -1.0, 0.0, 0.0};  // default: separation 2, arrival t = L/v with v = 0.5
    FourVector event_d2{2.0, +1.0, 0.0, 0.0};
};

/// One run of the pair experiment: the first detector in `order` samples its
/// own marginal, the second is reduced to the conditional given that result.
/// The resulting joint distribution is identical for both orders.
inline JointOutcome sample_joint(const AnalyzerSetting& a, const AnalyzerSetting& b,
                                 const FrameOrdering& order, std::uint64_t seed,
                                 const EprArrangement& arrangement = {}) {
    SplitMix64 rng(seed);
    JointOutcome out;
    out.event_d1 = arrangement.event_d1;
    out.event_d2 = arrangement.event_d2;
    out.measured_first = order.tie ? DetectorId::D1 : order.first;

    const bool d1_first = out.measured_first == DetectorId::D1;
    const AnalyzerSetting& first_setting = d1_first ? a : b;
    const AnalyzerSetting& second_setting = d1_first ? b : a;

    const double p_first_up = marginal_probability(first_setting, second_setting, +1, d1_first);
    const int s_first = rng.uniform01() < p_first_up ? +1 : -1;

    const double joint_up = d1_first ? joint_probability(a, b, s_first, +1)
                                     : joint_probability(a, b, +1, s_first);
    const double p_marg = d1_first ? marginal_probability(a, b, s_first, true)
                                   : marginal_probability(b, a, s_first, false);
    const double p_second_up = joint_up / p_marg;
    const int s_second = rng.uniform01() < p_second_up ? +1 : -1;

    out.s_d1 = d1_first ? s_first : s_second;
    out.s_d2 = d1_first ? s_second : s_first;
    return out;
}

/// Monte Carlo estimate of E(a,b) = <s1 s2>.
inline double correlation(const AnalyzerSetting& a, const AnalyzerSetting& b, std::size_t n_trials,
                          std::uint64_t seed, unsigned n_threads = 1) {
    if (n_trials < 1000) throw std::invalid_argument("correlation: need n_trials >= 1000");
    std::vector<double> products(n_trials);
    const FrameOrdering order{};  // rest frame; the order never changes the statistics
    parallel_for_trials(n_trials, n_threads, [&](std::size_t trial) {
        const JointOutcome o = sample_joint(a, b, order, derive_seed(seed, trial));
        products[trial] = static_cast<double>(o.s_d1 * o.s_d2);
    });
    double sum = 0.0;
    for (double p : products) sum += p;
    return sum / static_cast<double>(n_trials);
}

/// Analytic E(a,b) from the projector-algebra joint probabilities.
inline double correlation_analytic(const AnalyzerSetting& a, const AnalyzerSetting& b) {
    double e = 0.0;
    for (int s1 : {+1, -1})
        for (int s2 : {+1, -1}) e += s1 * s2 * joint_probability(a, b, s1, s2);
    return e;
}

/// CHSH combination S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
inline double chsh(const AnalyzerSetting& a, const AnalyzerSetting& a2, const AnalyzerSetting& b,
                   const AnalyzerSetting& b2, std::size_t n_trials, std::uint64_t seed,
                   unsigned n_threads = 1) {
    return correlation(a, b, n_trials, derive_seed(seed, 1), n_threads) -
           correlation(a, b2, n_trials, derive_seed(seed, 2), n_threads) +
           correlation(a2, b, n_trials, derive_seed(seed, 3), n_threads) +
           correlation(a2, b2, n_trials, derive_seed(seed, 4), n_threads);
}

inline double chsh_analytic(const AnalyzerSetting& a, const AnalyzerSetting& a2,
                            const AnalyzerSetting& b, const AnalyzerSetting& b2) {
    return correlation_analytic(a, b) - correlation_analytic(a, b2) + correlation_analytic(a2, b) +
           correlation_analytic(a2, b2);
}

}  // namespace relwave
