#pragma once

#include <cmath>
#include <stdexcept>

// Exact four-vector and boost algebra in natural units (c = 1).
// Metric convention: interval() returns the space-minus-time form
// |dx|^2 - dt^2, so space-like separations are positive.

namespace relwave {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator-() const { return {-x, -y, -z}; }
    double operator[](int i) const {
        switch (i) {
            case 0: return x;
            case 1: return y;
            default: return z;
        }
    }
    double& operator[](int i) {
        switch (i) {
            case 0: return x;
            case 1: return y;
            default: return z;
        }
    }
    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
    friend Vec3 operator*(const Vec3& v, double s) { return s * v; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm_sq(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm_sq(v)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
    return {v.x / n, v.y / n, v.z / n};
}
inline bool finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

struct FourVector {
    double t = 0.0, x = 0.0, y = 0.0, z = 0.0;

    Vec3 spatial() const { return {x, y, z}; }
    static FourVector from(double t, const Vec3& r) { return {t, r.x, r.y, r.z}; }
};

inline bool finite(const FourVector& v) {
    return std::isfinite(v.t) && std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}
inline void require_finite(const FourVector& v, const char* what) {
    if (!finite(v)) throw std::invalid_argument(std::string(what) + ": non-finite four-vector component");
}

// Guard against gamma overflow; scenarios never need ultra-relativistic frames.
inline constexpr double kBetaLimit = 1.0 - 1e-9;

class BoostParameters {
public:
    BoostParameters() = default;  // identity boost along x

    BoostParameters(double beta, const Vec3& axis) : beta_(beta) {
        if (!std::isfinite(beta) || std::abs(beta) >= kBetaLimit)
            throw std::invalid_argument("BoostParameters: |beta| must be < 1 - 1e-9");
        if (!finite(axis) || std::abs(norm(axis) - 1.0) > 1e-12)
            throw std::invalid_argument("BoostParameters: axis must be a unit vector (|axis| = 1 within 1e-12)");
        axis_ = normalized(axis);
    }

    static BoostParameters along_x(double beta) { return {beta, {1.0, 0.0, 0.0}}; }

    double beta() const { return beta_; }
    const Vec3& axis() const { return axis_; }
    // Derived, never stored: cannot desynchronize from beta.
    double gamma() const { return 1.0 / std::sqrt(1.0 - beta_ * beta_); }

    BoostParameters inverse() const {
        BoostParameters b;
        b.beta_ = -beta_;
        b.axis_ = axis_;
        return b;
    }
    bool is_identity() const { return beta_ == 0.0; }
    bool is_along_x() const { return std::abs(axis_.y) < 1e-12 && std::abs(axis_.z) < 1e-12; }

private:
    double beta_ = 0.0;
    Vec3 axis_{1.0, 0.0, 0.0};
};

inline bool same_frame(const BoostParameters& a, const BoostParameters& b, double tol = 1e-12) {
    if (std::abs(a.beta() - b.beta()) > tol) return false;
    if (a.is_identity() && b.is_identity()) return true;
    return norm(a.axis() - b.axis()) <= tol;
}

/// Invariant interval |x_a - x_b|^2 - (t_a - t_b)^2. Symmetric in its arguments.
inline double interval(const FourVector& a, const FourVector& b) {
    require_finite(a, "interval");
    require_finite(b, "interval");
    const double dt = a.t - b.t;
    const Vec3 dr = a.spatial() - b.spatial();
    return norm_sq(dr) - dt * dt;
}

/// Passive boost to a frame moving with velocity beta along b.axis():
/// the parallel spatial component and the time mix, the perpendicular
/// components are unchanged.
inline FourVector boost(const FourVector& v, const BoostParameters& b) {
    require_finite(v, "boost");
    const double g = b.gamma();
    const double beta = b.beta();
    const Vec3 r = v.spatial();
    const double par = dot(r, b.axis());
    const Vec3 perp = r - par * b.axis();
    const double par_new = g * (par - beta * v.t);
    const double t_new = g * (v.t - beta * par);
    return FourVector::from(t_new, perp + par_new * b.axis());
}

/// Time delay gamma*beta*dx between two events that are simultaneous in the
/// rest frame and separated by dx along the boost axis. Positive result means
/// the event at larger axis coordinate occurs earlier in the moving frame.
inline double ordering_delay(double dx, const BoostParameters& b) {
    if (!std::isfinite(dx)) throw std::invalid_argument("ordering_delay: non-finite dx");
    return b.gamma() * b.beta() * dx;
}

struct StickContraction {
    double length_moving;  // L * sqrt(1 - beta^2)
    double desync_time;    // beta * x / sqrt(1 - beta^2) at x = length_moving
};

/// Length of a stick at rest in the primed frame as measured in the unprimed
/// frame (extremities sampled at equal unprimed time), and the primed-frame
/// time offset between those two sample events.
inline StickContraction contraction_check(double rest_length, const BoostParameters& b) {
    if (!std::isfinite(rest_length) || rest_length < 0.0)
        throw std::invalid_argument("contraction_check: rest length must be finite and >= 0");
    const double beta = b.beta();
    const double root = std::sqrt(1.0 - beta * beta);
    const double length_moving = rest_length * root;
    return {length_moving, beta * length_moving / root};
}

/// Collinear composition law: boost(b1) after boost(b2) equals a single boost
/// with this velocity.
inline double velocity_addition(double beta1, double beta2) {
    return (beta1 + beta2) / (1.0 + beta1 * beta2);
}

}  // namespace relwave
