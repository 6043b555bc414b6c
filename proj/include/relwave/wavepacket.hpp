#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "relwave/grid.hpp"
#include "relwave/spacetime.hpp"

// Momentum-space representation and free evolution of scalar (spin-0,
// neutral) wave packets.
//
// Conventions, used everywhere in this library:
//   * mode phase  e^{-i (k0 t - k.x)}  with  k0 = sqrt(|k|^2 + m^2)
//   * packet      phi(t,x) = sum_i w(k_i) e^{-i(k0_i t - k_i.x)} weight_i / k0_i
//   * norm        sum_i |w(k_i)|^2 weight_i / (2 k0_i)
// The d3k/k0 synthesis measure and the 1/(2 k0) orthogonality measure are
// distinct on purpose; mixing them silently is the main correctness hazard.

namespace relwave {

using cdouble = std::complex<double>;

/// Relativistic dispersion sqrt(|k|^2 + m^2).
inline double dispersion(const Vec3& k, double m) {
    if (!(m >= 0.0)) throw std::invalid_argument("dispersion: mass must be >= 0");
    return std::sqrt(norm_sq(k) + m * m);
}

struct MomentumAmplitude {
    MomentumGrid grid;
    std::vector<cdouble> values;
    double mass = 0.0;

    MomentumAmplitude() = default;
    MomentumAmplitude(MomentumGrid g, std::vector<cdouble> v, double m)
        : grid(std::move(g)), values(std::move(v)), mass(m) {
        grid.validate();
        if (values.size() != grid.size())
            throw std::invalid_argument("MomentumAmplitude: values/grid size mismatch");
        if (!(mass >= 0.0)) throw std::invalid_argument("MomentumAmplitude: mass must be >= 0");
        if (mass == 0.0)
            for (const Vec3& k : grid.points)
                if (norm_sq(k) == 0.0)
                    throw std::invalid_argument(
                        "MomentumAmplitude: the 1/k0 measure is singular at k = 0 for massless packets");
    }

    std::size_t size() const { return values.size(); }
};

/// Complex samples of phi over a spatial grid, all at one coordinate time.
/// The single shared time is what makes this a definite quantum state.
struct PositionField {
    SpatialGrid grid;
    std::vector<cdouble> values;
    double time = 0.0;

    std::size_t size() const { return values.size(); }
};

/// phi(t,x): quadrature sum over modes with the d3k/k0 measure.
inline cdouble synthesize(const MomentumAmplitude& amp, const FourVector& event) {
    require_finite(event, "synthesize");
    const Vec3 r = event.spatial();
    cdouble acc{0.0, 0.0};
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const Vec3& k = amp.grid.points[i];
        const double k0 = dispersion(k, amp.mass);
        const double phase = -(k0 * event.t - dot(k, r));
        acc += amp.values[i] * std::polar(amp.grid.weights[i] / k0, phase);
    }
    return acc;
}

/// Free evolution: sample phi(t, .) on a spatial grid.
inline PositionField evolve(const MomentumAmplitude& amp, double t, const SpatialGrid& grid) {
    if (!std::isfinite(t)) throw std::invalid_argument("evolve: non-finite time");
    PositionField f;
    f.grid = grid;
    f.time = t;
    f.values.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        f.values[j] = synthesize(amp, FourVector::from(t, grid.points[j]));
    return f;
}

/// Relativistic norm with the 1/(2 k0) measure; invariant under evolve.
inline double norm(const MomentumAmplitude& amp) {
    double acc = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const double k0 = dispersion(amp.grid.points[i], amp.mass);
        acc += std::norm(amp.values[i]) * amp.grid.weights[i] / (2.0 * k0);
    }
    return acc;
}

/// Mean momentum weighted with the 1/(2 k0) measure.
inline Vec3 mean_momentum(const MomentumAmplitude& amp) {
    Vec3 acc{};
    double total = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const double k0 = dispersion(amp.grid.points[i], amp.mass);
        const double w = std::norm(amp.values[i]) * amp.grid.weights[i] / (2.0 * k0);
        acc = acc + w * amp.grid.points[i];
        total += w;
    }
    if (total <= 0.0) throw std::domain_error("mean_momentum: zero-norm amplitude");
    return (1.0 / total) * acc;
}

struct InversionResult {
    MomentumAmplitude amplitude;
    // set when > 1% of the reconstructed norm sits in the outermost 10% of
    // the momentum grid: the field was probably not band-limited to the grid
    bool aliasing_warning = false;
};

/// Inverse of synthesize: recover w(k) from a single-time field sample.
/// Includes the k0 e^{+i k0 t} factor that undoes the evolution phase, and a
/// per-mode quadrature-weight compensation so that on a conjugate grid pair
/// the round trip is exact for band-limited fields.
inline InversionResult position_to_momentum(const PositionField& field, double mass) {
    if (!(mass >= 0.0)) throw std::invalid_argument("position_to_momentum: mass must be >= 0");
    const int dim = field.grid.dim;

    MomentumGrid kg;
    kg.dim = dim;
    for (int a = 0; a < dim; ++a) {
        const int n = field.grid.axes[a].n;
        const double dk = 2.0 * std::numbers::pi / (n * field.grid.axes[a].step);
        kg.axes[a] = {-dk * (n - 1) / 2.0, dk, n};
    }
    detail::fill_lattice(kg, /*trapezoid=*/true);
    kg.validate();

    const double inv_two_pi_d = std::pow(2.0 * std::numbers::pi, -dim);
    double cell = 1.0;
    for (int a = 0; a < dim; ++a) cell *= kg.axes[a].step;

    std::vector<cdouble> w(kg.size());
    for (std::size_t i = 0; i < kg.size(); ++i) {
        const Vec3& k = kg.points[i];
        cdouble s{0.0, 0.0};
        for (std::size_t j = 0; j < field.size(); ++j) {
            const double phase = -dot(k, field.grid.points[j]);
            s += field.values[j] * std::polar(field.grid.weights[j], phase);
        }
        const double k0 = dispersion(k, mass);
        // cell/weight ratio undoes the trapezoid end-point halving, making
        // this the exact inverse of the discrete synthesize sum
        w[i] = s * std::polar(k0 * inv_two_pi_d * (cell / kg.weights[i]), k0 * field.time);
    }

    MomentumAmplitude amp(std::move(kg), std::move(w), mass);

    double total = 0.0, outer = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const double k0 = dispersion(amp.grid.points[i], mass);
        const double contrib = std::norm(amp.values[i]) * amp.grid.weights[i] / (2.0 * k0);
        total += contrib;
        bool in_outer_band = false;
        for (int a = 0; a < dim; ++a)
            if (std::abs(amp.grid.points[i][a]) > 0.9 * amp.grid.axes[a].max()) in_outer_band = true;
        if (in_outer_band) outer += contrib;
    }

    InversionResult res{std::move(amp), false};
    if (total > 0.0 && outer > 0.01 * total) res.aliasing_warning = true;
    return res;
}

/// Gaussian momentum profile w(k) ~ exp(-|k - center|^2 / (4 sigma^2)),
/// normalized to unit relativistic norm. Rejects grids that truncate more
/// than 1e-6 of the |w|^2 mass.
inline MomentumAmplitude gaussian_packet(const Vec3& center_k, double sigma_k, double m,
                                         MomentumGrid grid) {
    if (!(sigma_k > 0.0)) throw std::invalid_argument("gaussian_packet: sigma_k must be > 0");
    grid.validate();

    // |w|^2 is Gaussian with std sigma_k per axis; tail mass outside the grid
    const auto tail = [](double zlo, double zhi) {
        return 0.5 * std::erfc(zhi / std::numbers::sqrt2) + 0.5 * std::erfc(zlo / std::numbers::sqrt2);
    };
    double truncated = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
        const double zhi = (grid.axes[a].max() - center_k[a]) / sigma_k;
        const double zlo = (center_k[a] - grid.axes[a].min) / sigma_k;
        truncated += tail(zlo, zhi);
    }
    if (truncated > 1e-6)
        throw std::invalid_argument("gaussian_packet: grid truncates > 1e-6 of the Gaussian mass");

    std::vector<cdouble> w(grid.size());
    const double inv_four_sigma_sq = 1.0 / (4.0 * sigma_k * sigma_k);
    for (std::size_t i = 0; i < grid.size(); ++i)
        w[i] = std::exp(-norm_sq(grid.points[i] - center_k) * inv_four_sigma_sq);

    MomentumAmplitude amp(std::move(grid), std::move(w), m);
    const double n = norm(amp);
    if (!(n > 0.0)) throw std::domain_error("gaussian_packet: zero norm");
    const double scale = 1.0 / std::sqrt(n);
    for (auto& v : amp.values) v *= scale;
    return amp;
}

}  // namespace relwave
