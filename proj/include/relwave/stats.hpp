#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

// Small statistics helpers for the Monte Carlo verification suites.

namespace relwave {

/// Half-width of the z-sigma binomial band around p for n trials.
inline double binomial_band(double p, std::size_t n, double z = 4.0) {
    return z * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

/// Pearson chi-square statistic of observed counts against expected
/// probabilities. Cells with negligible expectation are skipped.
inline double chi_square_statistic(std::span<const std::size_t> counts, std::span<const double> probs,
                                   std::size_t n_trials, std::size_t* dof_out = nullptr) {
    if (counts.size() != probs.size()) throw std::invalid_argument("chi_square_statistic: size mismatch");
    double stat = 0.0;
    std::size_t dof = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = probs[i] * static_cast<double>(n_trials);
        if (expected < 1e-9) continue;
        const double d = static_cast<double>(counts[i]) - expected;
        stat += d * d / expected;
        ++dof;
    }
    if (dof_out) *dof_out = dof > 0 ? dof - 1 : 0;
    return stat;
}

/// Upper chi-square quantile at the one-sided z-sigma level
/// (Wilson-Hilferty approximation).
inline double chi_square_threshold(std::size_t dof, double z = 4.0) {
    if (dof == 0) return 0.0;
    const double k = static_cast<double>(dof);
    const double c = 2.0 / (9.0 * k);
    const double t = 1.0 - c + z * std::sqrt(c);
    return k * t * t * t;
}

struct ChiSquareTest {
    double statistic = 0.0;
    double threshold = 0.0;
    std::size_t dof = 0;
    bool pass = false;
};

inline ChiSquareTest chi_square_test(std::span<const std::size_t> counts, std::span<const double> probs,
                                     std::size_t n_trials, double z = 4.0) {
    ChiSquareTest t;
    t.statistic = chi_square_statistic(counts, probs, n_trials, &t.dof);
    t.threshold = chi_square_threshold(t.dof, z);
    t.pass = t.statistic <= t.threshold;
    return t;
}

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Sample mean and standard error of a sequence.
inline Estimate mean_estimate(std::span<const double> xs) {
    Estimate e;
    e.n = xs.size();
    if (e.n == 0) return e;
    double sum = 0.0;
    for (double x : xs) sum += x;
    e.value = sum / static_cast<double>(e.n);
    double var = 0.0;
    for (double x : xs) var += (x - e.value) * (x - e.value);
    if (e.n > 1) e.std_error = std::sqrt(var / (static_cast<double>(e.n) * (e.n - 1.0)));
    return e;
}

}  // namespace relwave
