#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "relwave/spacetime.hpp"
#include "relwave/wavepacket.hpp"

// Scalar Lorentz action on wave functions, two independent routes:
//   * pullback_transform evaluates the original packet at the mapped
//     space-time coordinates (the field is the same function in the new
//     coordinates);
//   * momentum_boost maps each mode's four-momentum and resamples, with
//     the invariant d3k/k0 measure making the Jacobian unity.
//
// A boosted single-time slice of the old frame is NOT a single-time object
// in the new frame: the boost spreads the time coordinate across the
// packet. That is why boosting returns a SpacetimeSampleSet rather than a
// PositionField; a new-frame state only exists via momentum_boost + evolve
// (exact, whole history) or via the quasi-2D approximation, whose error
// quasi_2d_residual reports explicitly.

namespace relwave {

/// Complex samples at arbitrary space-time events (times need not agree).
struct SpacetimeSampleSet {
    std::vector<FourVector> events;
    std::vector<cdouble> values;

    std::size_t size() const { return values.size(); }
};

/// Evaluate the boosted field at new-frame target events by mapping each
/// event back to the original frame and synthesizing there.
inline SpacetimeSampleSet pullback_transform(const MomentumAmplitude& amp, const BoostParameters& b,
                                             std::span<const FourVector> targets) {
    SpacetimeSampleSet out;
    out.events.assign(targets.begin(), targets.end());
    out.values.resize(targets.size());
    const BoostParameters inv = b.inverse();
    for (std::size_t i = 0; i < targets.size(); ++i)
        out.values[i] = synthesize(amp, boost(targets[i], inv));
    return out;
}

namespace detail {

inline cdouble lerp_amplitude(const MomentumAmplitude& amp, const Vec3& k) {
    const int dim = amp.grid.dim;
    int base[3] = {0, 0, 0};
    double frac[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
        const Axis& ax = amp.grid.axes[a];
        const double u = (k[a] - ax.min) / ax.step;
        if (u < 0.0 || u > ax.n - 1) return {0.0, 0.0};  // outside support
        int i = static_cast<int>(std::floor(u));
        if (i > ax.n - 2) i = ax.n - 2;
        base[a] = i;
        frac[a] = u - i;
    }
    const int nx = amp.grid.axes[0].n;
    const int ny = dim >= 2 ? amp.grid.axes[1].n : 1;
    cdouble acc{0.0, 0.0};
    const int corners = 1 << dim;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        int idx[3] = {base[0], base[1], base[2]};
        for (int a = 0; a < dim; ++a) {
            if (c & (1 << a)) {
                idx[a] += 1;
                w *= frac[a];
            } else {
                w *= 1.0 - frac[a];
            }
        }
        const std::size_t flat = (static_cast<std::size_t>(idx[2]) * ny + idx[1]) * nx + idx[0];
        acc += w * amp.values[flat];
    }
    return acc;
}

}  // namespace detail

/// Momentum-space realization of the scalar action: w'(k') = w(inverse-boost
/// of k'), resampled onto the original grid by linear interpolation
/// (first-order accurate). The invariant measure keeps the norm unchanged.
/// Throws if the boosted support no longer fits the grid.
inline MomentumAmplitude momentum_boost(const MomentumAmplitude& amp, const BoostParameters& b) {
    if (amp.grid.dim == 1 && !b.is_along_x())
        throw std::invalid_argument("momentum_boost: 1D amplitudes require a boost along the x axis");

    // forward-map the support and require it to stay on the grid
    double wmax = 0.0;
    for (const auto& v : amp.values) wmax = std::max(wmax, std::abs(v));
    const double support_cut = 1e-13 * wmax;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        if (std::abs(amp.values[i]) <= support_cut) continue;
        const Vec3& k = amp.grid.points[i];
        const FourVector image = boost(FourVector::from(dispersion(k, amp.mass), k), b);
        const Vec3 ki = image.spatial();
        for (int a = 0; a < amp.grid.dim; ++a)
            if (ki[a] < amp.grid.axes[a].min || ki[a] > amp.grid.axes[a].max())
                throw std::domain_error("momentum_boost: boosted support exceeds the grid span");
    }

    const BoostParameters inv = b.inverse();
    std::vector<cdouble> out(amp.size());
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const Vec3& kp = amp.grid.points[i];
        const FourVector src = boost(FourVector::from(dispersion(kp, amp.mass), kp), inv);
        out[i] = detail::lerp_amplitude(amp, src.spatial());
    }
    return MomentumAmplitude(amp.grid, std::move(out), amp.mass);
}

/// Spread gamma*beta*extent of new-frame times over a single-time slice of
/// the old frame; zero means states map to states.
inline double time_slice_spread(double spatial_extent, const BoostParameters& b) {
    if (!(spatial_extent >= 0.0))
        throw std::invalid_argument("time_slice_spread: extent must be >= 0");
    return b.gamma() * b.beta() * spatial_extent;
}

struct SliceSpec {
    double half_width = 0.0;  // 0: derive from the packet's momentum spread
    int n = 257;              // sample count along the boost axis
};

namespace detail {

inline double momentum_rms_spread(const MomentumAmplitude& amp) {
    const Vec3 mean = mean_momentum(amp);
    double acc = 0.0, total = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const double k0 = dispersion(amp.grid.points[i], amp.mass);
        const double w = std::norm(amp.values[i]) * amp.grid.weights[i] / (2.0 * k0);
        acc += w * norm_sq(amp.grid.points[i] - mean);
        total += w;
    }
    return std::sqrt(acc / total);
}

}  // namespace detail

/// L2 relative error of the quasi-2D shortcut: assigning the whole packet a
/// single time in the new frame instead of the exact per-point time of the
/// mapped slice. Vanishes with the packet's extent along the boost axis and
/// with beta.
inline double quasi_2d_residual(const MomentumAmplitude& amp, const BoostParameters& b,
                                SliceSpec slice = {}) {
    if (!b.is_along_x()) throw std::invalid_argument("quasi_2d_residual: boost must be along the x axis");
    if (slice.n < 1) throw std::invalid_argument("quasi_2d_residual: need n >= 1 slice samples");

    double half = slice.half_width;
    if (half <= 0.0) {
        const double sk = detail::momentum_rms_spread(amp);
        half = sk > 0.0 ? 5.0 / (2.0 * sk) : 0.0;  // ~5 position-space sigmas
    }

    // The new-frame slice t' = 0 seen in original coordinates is the tilted
    // slice t = beta * u at position u along the axis; the approximation
    // freezes the whole packet at the single time t = 0.
    double num = 0.0, den = 0.0;
    for (int j = 0; j < slice.n; ++j) {
        const double u = slice.n == 1 ? 0.0 : -half + 2.0 * half * j / (slice.n - 1);
        const cdouble exact = synthesize(amp, {b.beta() * u, u, 0.0, 0.0});
        const cdouble approx = synthesize(amp, {0.0, u, 0.0, 0.0});
        num += std::norm(exact - approx);
        den += std::norm(exact);
    }
    if (den == 0.0) return 0.0;
    return std::sqrt(num / den);
}

}  // namespace relwave
