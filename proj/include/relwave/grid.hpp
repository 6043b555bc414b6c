#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "relwave/spacetime.hpp"

// Uniform Cartesian sample grids for momentum- and position-space fields.
// 1D grids put their axis along x (k = (k,0,0)); 3D grids are tensor
// lattices with x fastest in the flattened point order.

namespace relwave {

struct Axis {
    double min = 0.0;
    double step = 0.0;
    int n = 0;

    double max() const { return min + step * (n - 1); }
    double coord(int i) const { return min + step * i; }
};

namespace detail {

// trapezoid rule: half weight at the two ends
inline double trapezoid_factor(int i, int n) {
    if (n == 1) return 1.0;
    return (i == 0 || i == n - 1) ? 0.5 : 1.0;
}

template <typename Grid>
inline void fill_lattice(Grid& g, bool trapezoid) {
    int nx = g.axes[0].n;
    int ny = g.dim >= 2 ? g.axes[1].n : 1;
    int nz = g.dim >= 3 ? g.axes[2].n : 1;
    g.points.reserve(static_cast<std::size_t>(nx) * ny * nz);
    g.weights.reserve(g.points.capacity());
    for (int iz = 0; iz < nz; ++iz) {
        for (int iy = 0; iy < ny; ++iy) {
            for (int ix = 0; ix < nx; ++ix) {
                Vec3 p{g.axes[0].coord(ix), g.dim >= 2 ? g.axes[1].coord(iy) : 0.0,
                       g.dim >= 3 ? g.axes[2].coord(iz) : 0.0};
                double w = 1.0;
                const int idx[3] = {ix, iy, iz};
                for (int a = 0; a < g.dim; ++a) {
                    double f = trapezoid ? trapezoid_factor(idx[a], g.axes[a].n) : 1.0;
                    w *= (g.axes[a].n == 1 ? 1.0 : g.axes[a].step) * f;
                }
                g.points.push_back(p);
                g.weights.push_back(w);
            }
        }
    }
}

inline Axis symmetric_axis(double half_span, int n) {
    if (!(half_span > 0.0) || n < 2) throw std::invalid_argument("grid axis: need half_span > 0 and n >= 2");
    const double step = 2.0 * half_span / (n - 1);
    return {-half_span, step, n};
}

}  // namespace detail

/// Momentum-space quadrature grid. Kept symmetric about k = 0 so that a
/// real-profile packet has zero mean momentum; trapezoid weights.
struct MomentumGrid {
    int dim = 1;
    std::array<Axis, 3> axes{};
    std::vector<Vec3> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }

    static MomentumGrid uniform_1d(double half_span, int n) {
        MomentumGrid g;
        g.dim = 1;
        g.axes[0] = detail::symmetric_axis(half_span, n);
        detail::fill_lattice(g, /*trapezoid=*/true);
        g.validate();
        return g;
    }

    static MomentumGrid uniform_3d(double half_span, int n_per_axis) {
        MomentumGrid g;
        g.dim = 3;
        for (int a = 0; a < 3; ++a) g.axes[a] = detail::symmetric_axis(half_span, n_per_axis);
        detail::fill_lattice(g, /*trapezoid=*/true);
        g.validate();
        return g;
    }

    /// Default 1D grid for a packet centered at center_k with width sigma_k:
    /// symmetric span wide enough to cover center_k +- 8 sigma_k.
    static MomentumGrid packet_default(double center_k, double sigma_k, int n = 4096) {
        if (!(sigma_k > 0.0)) throw std::invalid_argument("packet_default: sigma_k must be > 0");
        return uniform_1d(std::abs(center_k) + 8.0 * sigma_k, n);
    }

    void validate() const {
        if (dim != 1 && dim != 3) throw std::invalid_argument("MomentumGrid: dim must be 1 or 3");
        for (int a = 0; a < dim; ++a) {
            const Axis& ax = axes[a];
            if (ax.n < 2 || !(ax.step > 0.0)) throw std::invalid_argument("MomentumGrid: axis samples must be strictly ordered");
            if (std::abs(ax.min + ax.max()) > 1e-12 * std::max(1.0, std::abs(ax.max())))
                throw std::invalid_argument("MomentumGrid: grid must be symmetric about k = 0");
        }
        for (double w : weights)
            if (!(w > 0.0)) throw std::invalid_argument("MomentumGrid: weights must be > 0");
    }
};

/// Position-space sample grid. `periodic` grids carry uniform (rectangle
/// rule) weights, which is the right quadrature on one period of the
/// conjugate Fourier grid; otherwise trapezoid.
struct SpatialGrid {
    int dim = 1;
    std::array<Axis, 3> axes{};
    std::vector<Vec3> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }

    static SpatialGrid uniform_1d(double lo, double hi, int n) {
        if (!(hi > lo) || n < 2) throw std::invalid_argument("SpatialGrid: need hi > lo and n >= 2");
        SpatialGrid g;
        g.dim = 1;
        g.axes[0] = {lo, (hi - lo) / (n - 1), n};
        detail::fill_lattice(g, /*trapezoid=*/true);
        return g;
    }

    static SpatialGrid uniform_3d(double lo, double hi, int n_per_axis) {
        if (!(hi > lo) || n_per_axis < 2) throw std::invalid_argument("SpatialGrid: need hi > lo and n >= 2");
        SpatialGrid g;
        g.dim = 3;
        for (int a = 0; a < 3; ++a) g.axes[a] = {lo, (hi - lo) / (n_per_axis - 1), n_per_axis};
        detail::fill_lattice(g, /*trapezoid=*/true);
        return g;
    }

    /// Conjugate (DFT-dual) grid of a momentum grid: same sample count,
    /// spacing dx = 2 pi / (n dk), centered on the origin, uniform weights.
    /// On this pairing the discrete synthesize/invert transforms are exact
    /// inverses of each other.
    static SpatialGrid conjugate_to(const MomentumGrid& k) {
        SpatialGrid g;
        g.dim = k.dim;
        for (int a = 0; a < k.dim; ++a) {
            const int n = k.axes[a].n;
            const double dx = 2.0 * std::numbers::pi / (n * k.axes[a].step);
            g.axes[a] = {-dx * (n - 1) / 2.0, dx, n};
        }
        detail::fill_lattice(g, /*trapezoid=*/false);
        return g;
    }
};

}  // namespace relwave
