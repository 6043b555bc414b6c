#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "relwave/lorentz_action.hpp"
#include "relwave/rng.hpp"
#include "relwave/spacetime.hpp"
#include "relwave/wavepacket.hpp"

// Stochastic measurement engine: Born-rule sampling over detector cells,
// instantaneous reduction in the detector rest frame, and the boosted-frame
// description of a reduction event.
//
// The boosted-frame description is bookkeeping only: outcome statistics are
// always computed in the rest frame of the detectors, and no Lorentz
// transformation is ever applied point-by-point to a collapsing wave.
// Transformations act on whole pre/post histories.

namespace relwave {

enum class DetectorMode { position, momentum };

struct DetectorCell {
    std::string label;
    double lo = 0.0;
    double hi = 0.0;  // half-open interval [lo, hi) along the x axis
};

/// Disjoint cells covering a sensitive interval, tagged with the boost of
/// the detector rest frame relative to the lab (identity when at rest).
class DetectorArray {
public:
    DetectorArray(std::vector<DetectorCell> cells, DetectorMode mode,
                  BoostParameters rest_frame_boost = {})
        : cells_(std::move(cells)), mode_(mode), rest_frame_boost_(rest_frame_boost) {
        if (cells_.size() < 1) throw std::invalid_argument("DetectorArray: need at least one cell");
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            if (!(cells_[i].hi > cells_[i].lo))
                throw std::invalid_argument("DetectorArray: cell must have hi > lo");
            if (i > 0 && std::abs(cells_[i].lo - cells_[i - 1].hi) > 1e-12)
                throw std::invalid_argument("DetectorArray: cells must tile the sensitive region without gaps or overlap");
        }
    }

    static DetectorArray uniform(double lo, double hi, std::size_t n_cells, DetectorMode mode,
                                 BoostParameters rest_frame_boost = {}) {
        if (n_cells < 1 || !(hi > lo)) throw std::invalid_argument("DetectorArray::uniform: bad arguments");
        std::vector<DetectorCell> cells(n_cells);
        const double step = (hi - lo) / static_cast<double>(n_cells);
        for (std::size_t i = 0; i < n_cells; ++i) {
            cells[i].label = "cell_" + std::to_string(i);
            cells[i].lo = lo + step * static_cast<double>(i);
            cells[i].hi = i + 1 == n_cells ? hi : lo + step * static_cast<double>(i + 1);
        }
        return DetectorArray(std::move(cells), mode, rest_frame_boost);
    }

    const std::vector<DetectorCell>& cells() const { return cells_; }
    DetectorMode mode() const { return mode_; }
    const BoostParameters& rest_frame_boost() const { return rest_frame_boost_; }

    // index of the cell containing x, or npos. Cells are half-open except
    // the last, which closes the sensitive region at its upper boundary.
    std::size_t cell_of(double x) const {
        if (x < cells_.front().lo || x > cells_.back().hi) return npos;
        for (std::size_t i = 0; i + 1 < cells_.size(); ++i)
            if (x < cells_[i].hi) return i;
        return cells_.size() - 1;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<DetectorCell> cells_;
    DetectorMode mode_;
    BoostParameters rest_frame_boost_;
};

/// Born probabilities of a position measurement: cell intensities
/// sum_{x in cell} |phi(x)|^2 * volume weight, normalized over the array.
/// The field must be prepared in the detector rest frame.
inline std::vector<double> born_probabilities(const PositionField& field, const DetectorArray& det,
                                              const BoostParameters& field_frame = {}) {
    if (det.mode() != DetectorMode::position)
        throw std::invalid_argument("born_probabilities: detector is not in position mode");
    if (!same_frame(det.rest_frame_boost(), field_frame))
        throw std::invalid_argument("born_probabilities: field frame does not match the detector rest frame");
    if (field.grid.dim != 1)
        throw std::invalid_argument("born_probabilities: interval detectors require a 1D field");

    std::vector<double> p(det.cells().size(), 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < field.size(); ++j) {
        const std::size_t c = det.cell_of(field.grid.points[j].x);
        if (c == DetectorArray::npos) continue;
        const double contrib = std::norm(field.values[j]) * field.grid.weights[j];
        p[c] += contrib;
        total += contrib;
    }
    if (!(total > 0.0)) throw std::domain_error("born_probabilities: zero total intensity in the detector");
    for (auto& v : p) v /= total;
    return p;
}

/// Born probabilities of a momentum measurement over k-axis bins, with the
/// relativistic 1/(2 k0) measure.
inline std::vector<double> born_probabilities(const MomentumAmplitude& amp, const DetectorArray& det) {
    if (det.mode() != DetectorMode::momentum)
        throw std::invalid_argument("born_probabilities: detector is not in momentum mode");
    if (amp.grid.dim != 1)
        throw std::invalid_argument("born_probabilities: interval detectors require a 1D amplitude");
    std::vector<double> p(det.cells().size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const std::size_t c = det.cell_of(amp.grid.points[i].x);
        if (c == DetectorArray::npos) continue;
        const double k0 = dispersion(amp.grid.points[i], amp.mass);
        const double contrib = std::norm(amp.values[i]) * amp.grid.weights[i] / (2.0 * k0);
        p[c] += contrib;
        total += contrib;
    }
    if (!(total > 0.0)) throw std::domain_error("born_probabilities: zero total intensity in the detector");
    for (auto& v : p) v /= total;
    return p;
}

/// Categorical sample from a probability vector; deterministic given seed.
inline std::size_t sample_outcome(std::span<const double> p, std::uint64_t seed) {
    if (p.empty()) throw std::invalid_argument("sample_outcome: empty distribution");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= -1e-15) || !std::isfinite(v)) throw std::invalid_argument("sample_outcome: invalid probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("sample_outcome: probabilities must sum to 1");
    SplitMix64 rng(seed);
    const double u = rng.uniform01() * sum;
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        cum += p[i];
        if (u < cum) return i;
    }
    return p.size() - 1;
}

/// Restrict the field to one cell, zero elsewhere, renormalized to unit
/// position-space norm. Time unchanged: instantaneous in this frame.
inline PositionField reduce_position(const PositionField& field, const DetectorCell& cell) {
    PositionField out = field;
    double intensity = 0.0;
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double x = out.grid.points[j].x;
        if (x < cell.lo || x >= cell.hi) {
            out.values[j] = {0.0, 0.0};
        } else {
            intensity += std::norm(out.values[j]) * out.grid.weights[j];
        }
    }
    if (!(intensity > 0.0)) throw std::domain_error("reduce_position: cell has zero intensity");
    const double scale = 1.0 / std::sqrt(intensity);
    for (auto& v : out.values) v *= scale;
    return out;
}

struct MeasurementRecord {
    std::string outcome_label;
    FourVector event;  // detection event in the detector rest frame
    double pre_norm = 0.0;
    std::uint64_t rng_seed = 0;
    std::vector<double> probabilities;
    std::string policy;
};

/// Pluggable collapse dynamics. Any policy must reproduce Born statistics
/// marginally; the default is one-shot Born sampling at the detection time.
class ReductionPolicy {
public:
    virtual ~ReductionPolicy() = default;
    virtual std::string_view id() const = 0;
    virtual std::size_t select(std::span<const double> probabilities, std::uint64_t seed) const = 0;
};

class InstantaneousBornPolicy final : public ReductionPolicy {
public:
    std::string_view id() const override { return "instantaneous-born"; }
    std::size_t select(std::span<const double> probabilities, std::uint64_t seed) const override {
        return sample_outcome(probabilities, seed);
    }
};

/// One position measurement: Born probabilities over the array, outcome via
/// the policy, reduction of the field, and a full record. The detection
/// event is the cell midpoint at the field time (the scenario supplies the
/// detection time by preparing the field at it).
inline std::pair<MeasurementRecord, PositionField> measure_position(
    const PositionField& field, const DetectorArray& det, std::uint64_t seed,
    const ReductionPolicy& policy = InstantaneousBornPolicy{}) {
    const std::vector<double> p = born_probabilities(field, det);
    const std::size_t outcome = policy.select(p, seed);
    const DetectorCell& cell = det.cells()[outcome];

    double pre_norm = 0.0;
    for (std::size_t j = 0; j < field.size(); ++j)
        pre_norm += std::norm(field.values[j]) * field.grid.weights[j];

    MeasurementRecord rec;
    rec.outcome_label = cell.label;
    rec.event = {field.time, 0.5 * (cell.lo + cell.hi), 0.0, 0.0};
    rec.pre_norm = pre_norm;
    rec.rng_seed = seed;
    rec.probabilities = p;
    rec.policy = std::string(policy.id());
    return {std::move(rec), reduce_position(field, cell)};
}

struct MixedRegion {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double width() const { return t_hi - t_lo; }
};

/// New-frame time window over which a reduction that is instantaneous in the
/// rest frame appears gradual: the image of {reduction time} x {packet
/// support along the boost axis}.
inline MixedRegion mixed_region(double support_lo, double support_hi, const FourVector& reduction_event,
                                const BoostParameters& b) {
    if (!(support_hi >= support_lo)) throw std::invalid_argument("mixed_region: support_hi must be >= support_lo");
    const Vec3 base = reduction_event.spatial();
    const double base_par = dot(base, b.axis());
    const auto t_of = [&](double s) {
        const Vec3 r = base + (s - base_par) * b.axis();
        return boost(FourVector::from(reduction_event.t, r), b).t;
    };
    const double t1 = t_of(support_lo);
    const double t2 = t_of(support_hi);
    return {std::min(t1, t2), std::max(t1, t2)};
}

/// Describe a reduction from a moving frame: each new-frame target event is
/// mapped back to the rest frame and evaluated against the pre-history or the
/// post-history according to whether it lands before or after the reduction
/// time there.
inline SpacetimeSampleSet reduction_in_boosted_frame(const MomentumAmplitude& pre_history,
                                                     const MomentumAmplitude& post_history,
                                                     const FourVector& reduction_event,
                                                     const BoostParameters& b,
                                                     std::span<const FourVector> targets) {
    SpacetimeSampleSet out;
    out.events.assign(targets.begin(), targets.end());
    out.values.resize(targets.size());
    const BoostParameters inv = b.inverse();
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const FourVector rest = boost(targets[i], inv);
        const MomentumAmplitude& history = rest.t < reduction_event.t ? pre_history : post_history;
        out.values[i] = synthesize(history, rest);
    }
    return out;
}

}  // namespace relwave
