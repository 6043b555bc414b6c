#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "relwave/config.hpp"
#include "relwave/epr.hpp"
#include "relwave/io.hpp"
#include "relwave/lorentz_action.hpp"
#include "relwave/stats.hpp"
#include "relwave/twoparticle.hpp"
#include "relwave/version.hpp"
#include "relwave/wavepacket.hpp"

// Configuration-driven scenario runner. Every run writes
//   report.json     scenario results (deterministic bytes given the seed)
//   *.csv           plot-ready data, schemas documented per emitter
//   records.jsonl   measurement records where the scenario produces them
//   manifest.json   config echo, seed, version, wall time and a content
//                   digest of every other output file (written last)
// On any error the partial outputs are removed.

namespace relwave {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

// collects output files so a failed run leaves nothing behind
class OutputSet {
public:
    explicit OutputSet(const std::filesystem::path& dir) : dir_(dir) {
        std::filesystem::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& content) {
        const std::filesystem::path p = dir_ / name;
        std::ofstream os(p, std::ios::binary);
        if (!os) throw ScenarioError("cannot open output file " + p.string());
        os << content;
        os.close();
        files_.emplace_back(name, content.size(), fnv1a64_hex(content));
    }

    void remove_all() {
        std::error_code ec;
        for (const auto& [name, size, digest] : files_) std::filesystem::remove(dir_ / name, ec);
    }

    nlohmann::json file_table() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [name, size, digest] : files_)
            arr.push_back({{"name", name}, {"bytes", size}, {"fnv1a64", digest}});
        return arr;
    }

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::vector<std::tuple<std::string, std::size_t, std::string>> files_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// plot-data emitters (header row always, even for empty reports)

/// columns: trial,theta,phi,bin
inline void emit_hits_csv(const ScreenReport& rep, std::ostream& os) {
    os << "trial,theta,phi,bin\n";
    for (std::size_t i = 0; i < rep.hits.size(); ++i)
        os << i << ',' << format_double(rep.hits[i].theta) << ',' << format_double(rep.hits[i].phi)
           << ',' << rep.hits[i].bin << '\n';
}

/// columns: trial,firing,silent,kx,ky,kz,t_arrival_1,t_arrival_2,tprime_1,tprime_2,delay,winner
inline void emit_timeline_csv(const DecayReport& rep, std::ostream& os) {
    os << "trial,firing,silent,kx,ky,kz,t_arrival_1,t_arrival_2,tprime_1,tprime_2,delay,winner\n";
    for (std::size_t i = 0; i < rep.trials.size(); ++i) {
        const DecayTrial& t = rep.trials[i];
        const double tp0 = boost(t.arrival_rest[0], rep.frame).t;
        const double tp1 = boost(t.arrival_rest[1], rep.frame).t;
        os << i << ',' << t.firing << ',' << t.silent << ',' << format_double(t.momentum_1.x) << ','
           << format_double(t.momentum_1.y) << ',' << format_double(t.momentum_1.z) << ','
           << format_double(t.arrival_rest[0].t) << ',' << format_double(t.arrival_rest[1].t) << ','
           << format_double(tp0) << ',' << format_double(tp1) << ','
           << format_double(t.boosted_delay) << ',' << t.first_boosted << '\n';
    }
}

struct CorrelationSweepRow {
    double angle_deg = 0.0;
    double analytic = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t n_trials = 0;
};

/// columns: angle_deg,analytic,estimate,std_error,n_trials
inline void emit_correlation_sweep_csv(const std::vector<CorrelationSweepRow>& rows, std::ostream& os) {
    os << "angle_deg,analytic,estimate,std_error,n_trials\n";
    for (const auto& r : rows)
        os << format_double(r.angle_deg) << ',' << format_double(r.analytic) << ','
           << format_double(r.estimate) << ',' << format_double(r.std_error) << ',' << r.n_trials
           << '\n';
}

/// columns: trial,s_d1,s_d2,measured_first
inline void emit_epr_trials_csv(const std::vector<JointOutcome>& outcomes, std::ostream& os) {
    os << "trial,s_d1,s_d2,measured_first\n";
    for (std::size_t i = 0; i < outcomes.size(); ++i)
        os << i << ',' << outcomes[i].s_d1 << ',' << outcomes[i].s_d2 << ','
           << to_string(outcomes[i].measured_first) << '\n';
}

// ---------------------------------------------------------------------------
// scenario implementations

namespace detail {

inline nlohmann::json run_einstein(const RunConfig& cfg, OutputSet& out) {
    AngularProfile profile = cfg.profile == "isotropic"
                                 ? isotropic_profile()
                                 : polar_cap_profile(deg2rad(cfg.cap_half_angle_deg));
    const ScreenReport rep = run_einstein_screen(cfg.n_trials, profile, cfg.n_polar_bins,
                                                 cfg.n_azimuth_bins, cfg.seed, cfg.threads);
    const ChiSquareTest chi = chi_square_test(rep.bin_counts, rep.bin_probs, cfg.n_trials);

    std::ostringstream hits;
    emit_hits_csv(rep, hits);
    out.write("hits.csv", hits.str());

    nlohmann::json rj;
    rj["scenario"] = to_string(cfg.scenario);
    rj["seed"] = cfg.seed;
    rj["n_trials"] = cfg.n_trials;
    rj["binning"] = {{"n_polar", rep.n_polar}, {"n_azimuth", rep.n_azimuth}};
    rj["profile"] = cfg.profile;
    rj["bin_probs"] = rep.bin_probs;
    rj["bin_counts"] = rep.bin_counts;
    rj["chi_square"] = {{"statistic", chi.statistic},
                        {"threshold_4sigma", chi.threshold},
                        {"dof", chi.dof},
                        {"pass", chi.pass}};
    return rj;
}

inline nlohmann::json run_decay90(const RunConfig& cfg, OutputSet& out) {
    DecayGeometry geom;
    geom.source = {0.0, 0.0, 0.0};
    const double a1 = deg2rad(cfg.det1_angle_deg);
    const double a2 = deg2rad(cfg.det2_angle_deg);
    geom.detectors[0] = {"detector_1", {std::cos(a1), std::sin(a1), 0.0}, cfg.det1_distance,
                         deg2rad(cfg.det1_acceptance_deg)};
    geom.detectors[1] = {"detector_2", {std::cos(a2), std::sin(a2), 0.0}, cfg.det2_distance,
                         deg2rad(cfg.det2_acceptance_deg)};
    const BoostParameters frame = BoostParameters::along_x(cfg.beta);
    const SWaveState state = SWaveState::gaussian(cfg.k_center, cfg.k_sigma, cfg.mass);
    const DecayReport rep = run_90deg_scenario(geom, frame, state, cfg.n_trials, cfg.seed, cfg.threads);

    std::ostringstream timeline;
    emit_timeline_csv(rep, timeline);
    out.write("timeline.csv", timeline.str());

    std::ostringstream records;
    for (const auto& r : rep.records) append_record(records, r);
    out.write("records.jsonl", records.str());

    nlohmann::json trials = nlohmann::json::array();
    for (const auto& t : rep.trials)
        trials.push_back({{"firing", t.firing},
                          {"silent", t.silent},
                          {"k", {t.momentum_1.x, t.momentum_1.y, t.momentum_1.z}},
                          {"delay", t.boosted_delay},
                          {"winner", t.first_boosted}});

    nlohmann::json rj;
    rj["scenario"] = to_string(cfg.scenario);
    rj["seed"] = cfg.seed;
    rj["n_trials"] = cfg.n_trials;
    rj["beta"] = cfg.beta;
    rj["geometry"] = {{"source", {0.0, 0.0, 0.0}},
                      {"detector_1",
                       {{"angle_deg", cfg.det1_angle_deg},
                        {"distance", cfg.det1_distance},
                        {"acceptance_deg", cfg.det1_acceptance_deg}}},
                      {"detector_2",
                       {{"angle_deg", cfg.det2_angle_deg},
                        {"distance", cfg.det2_distance},
                        {"acceptance_deg", cfg.det2_acceptance_deg}}}};
    rj["born_weights"] = rep.born_weights;
    rj["fire_counts"] = rep.fire_counts;
    rj["n_ties"] = rep.n_ties;
    rj["trials"] = std::move(trials);
    return rj;
}

inline nlohmann::json run_epr(const RunConfig& cfg, OutputSet& out) {
    const AnalyzerSetting a = AnalyzerSetting::in_plane(deg2rad(cfg.a_deg));
    const AnalyzerSetting a2 = AnalyzerSetting::in_plane(deg2rad(cfg.a_prime_deg));
    const AnalyzerSetting b = AnalyzerSetting::in_plane(deg2rad(cfg.b_deg));
    const AnalyzerSetting b2 = AnalyzerSetting::in_plane(deg2rad(cfg.b_prime_deg));

    const double half = 0.5 * cfg.separation;
    const double arrival_t = half / cfg.track_speed;
    const EprArrangement arrangement{{arrival_t, -half, 0.0, 0.0}, {arrival_t, +half, 0.0, 0.0}};

    const BoostParameters plus = BoostParameters::along_x(cfg.beta);
    const BoostParameters minus = BoostParameters::along_x(-cfg.beta);
    const FrameOrdering roles_plus = frame_roles(arrangement.event_d1, arrangement.event_d2, plus);
    const FrameOrdering roles_minus = frame_roles(arrangement.event_d1, arrangement.event_d2, minus);

    // CHSH estimate with per-pair standard errors
    const auto estimate_pair = [&](const AnalyzerSetting& x, const AnalyzerSetting& y,
                                   std::uint64_t salt) {
        std::vector<double> products(cfg.n_trials);
        parallel_for_trials(cfg.n_trials, cfg.threads, [&](std::size_t trial) {
            const JointOutcome o =
                sample_joint(x, y, roles_plus, derive_seed(derive_seed(cfg.seed, salt), trial), arrangement);
            products[trial] = static_cast<double>(o.s_d1 * o.s_d2);
        });
        return mean_estimate(products);
    };
    const Estimate e_ab = estimate_pair(a, b, 1);
    const Estimate e_ab2 = estimate_pair(a, b2, 2);
    const Estimate e_a2b = estimate_pair(a2, b, 3);
    const Estimate e_a2b2 = estimate_pair(a2, b2, 4);
    const double s_est = e_ab.value - e_ab2.value + e_a2b.value + e_a2b2.value;
    const double s_err = std::sqrt(e_ab.std_error * e_ab.std_error + e_ab2.std_error * e_ab2.std_error +
                                   e_a2b.std_error * e_a2b.std_error + e_a2b2.std_error * e_a2b2.std_error);
    const double s_analytic = chsh_analytic(a, a2, b, b2);

    // correlation sweep for plotting
    std::vector<CorrelationSweepRow> sweep(static_cast<std::size_t>(cfg.sweep_points));
    const std::size_t n_sweep = std::max<std::size_t>(1000, cfg.n_trials / 10);
    for (int i = 0; i < cfg.sweep_points; ++i) {
        const double angle = 180.0 * i / (cfg.sweep_points - 1);
        const AnalyzerSetting bi = AnalyzerSetting::in_plane(deg2rad(cfg.a_deg + angle));
        std::vector<double> products(n_sweep);
        parallel_for_trials(n_sweep, cfg.threads, [&](std::size_t trial) {
            const JointOutcome o = sample_joint(
                a, bi, roles_plus, derive_seed(derive_seed(cfg.seed, 100 + i), trial), arrangement);
            products[trial] = static_cast<double>(o.s_d1 * o.s_d2);
        });
        const Estimate est = mean_estimate(products);
        sweep[i] = {angle, correlation_analytic(a, bi), est.value, est.std_error, n_sweep};
    }
    std::ostringstream sweep_csv;
    emit_correlation_sweep_csv(sweep, sweep_csv);
    out.write("correlation.csv", sweep_csv.str());

    // joint tables under both measurement orders, against the analytic table
    FrameOrdering d2_first = roles_plus;
    d2_first.tie = false;
    d2_first.first = DetectorId::D2;
    FrameOrdering d1_first = roles_plus;
    d1_first.tie = false;
    d1_first.first = DetectorId::D1;
    const auto table = [&](const FrameOrdering& order, std::uint64_t salt) {
        std::vector<JointOutcome> outs(cfg.n_trials);
        parallel_for_trials(cfg.n_trials, cfg.threads, [&](std::size_t trial) {
            outs[trial] = sample_joint(a, b, order, derive_seed(derive_seed(cfg.seed, salt), trial),
                                       arrangement);
        });
        std::array<std::size_t, 4> counts{};
        for (const auto& o : outs) counts[(o.s_d1 == 1 ? 0 : 2) + (o.s_d2 == 1 ? 0 : 1)] += 1;
        return std::pair(counts, std::move(outs));
    };
    const auto [counts_d1_first, outcomes_d1] = table(d1_first, 11);
    const auto [counts_d2_first, outcomes_d2] = table(d2_first, 12);
    std::array<double, 4> analytic_table{joint_probability(a, b, +1, +1), joint_probability(a, b, +1, -1),
                                         joint_probability(a, b, -1, +1), joint_probability(a, b, -1, -1)};

    if (cfg.emit_trials) {
        std::ostringstream trials_csv;
        emit_epr_trials_csv(outcomes_d1, trials_csv);
        out.write("trials.csv", trials_csv.str());
    }

    const auto roles_json = [](const FrameOrdering& o) {
        return nlohmann::json{{"beta", o.frame.beta()},
                              {"first", o.tie ? "tie" : to_string(o.first)},
                              {"delay", o.delay}};
    };
    const auto estimate_json = [](const Estimate& e, double analytic) {
        return nlohmann::json{
            {"estimate", e.value}, {"std_error", e.std_error}, {"n_trials", e.n}, {"analytic", analytic}};
    };

    nlohmann::json rj;
    rj["scenario"] = to_string(cfg.scenario);
    rj["seed"] = cfg.seed;
    rj["n_trials"] = cfg.n_trials;
    rj["settings_deg"] = {{"a", cfg.a_deg}, {"a_prime", cfg.a_prime_deg}, {"b", cfg.b_deg}, {"b_prime", cfg.b_prime_deg}};
    rj["arrangement"] = {{"separation", cfg.separation}, {"track_speed", cfg.track_speed},
                         {"arrival_time", arrival_t}};
    rj["correlations"] = {{"ab", estimate_json(e_ab, correlation_analytic(a, b))},
                          {"ab_prime", estimate_json(e_ab2, correlation_analytic(a, b2))},
                          {"a_prime_b", estimate_json(e_a2b, correlation_analytic(a2, b))},
                          {"a_prime_b_prime", estimate_json(e_a2b2, correlation_analytic(a2, b2))}};
    rj["chsh"] = {{"estimate", s_est}, {"std_error", s_err}, {"analytic", s_analytic}};
    rj["frame_roles"] = {{"plus_beta", roles_json(roles_plus)}, {"minus_beta", roles_json(roles_minus)}};
    rj["joint_tables"] = {{"order", {"++", "+-", "-+", "--"}},
                          {"analytic", analytic_table},
                          {"d1_first_counts", counts_d1_first},
                          {"d2_first_counts", counts_d2_first}};
    return rj;
}

inline nlohmann::json run_packet_demo(const RunConfig& cfg, OutputSet& out) {
    const BoostParameters frame = BoostParameters::along_x(cfg.beta);
    const double edge = std::abs(cfg.center_k) + 12.0 * cfg.sigma_k;
    const double edge_k0 = dispersion({edge, 0.0, 0.0}, cfg.mass);
    const double half_span = 1.05 * frame.gamma() * (edge + std::abs(cfg.beta) * edge_k0);
    const MomentumGrid grid = MomentumGrid::uniform_1d(half_span, cfg.grid_n);
    const MomentumAmplitude amp = gaussian_packet({cfg.center_k, 0.0, 0.0}, cfg.sigma_k, cfg.mass, grid);

    // target events in the moving frame, spread over three time slices
    const double sigma_x = 1.0 / (2.0 * cfg.sigma_k);
    std::vector<FourVector> targets(static_cast<std::size_t>(cfg.n_targets));
    for (int j = 0; j < cfg.n_targets; ++j) {
        const double x = cfg.n_targets == 1 ? 0.0 : -2.0 * sigma_x + 4.0 * sigma_x * j / (cfg.n_targets - 1);
        const double t = sigma_x * (static_cast<double>(j % 3) - 1.0);
        targets[static_cast<std::size_t>(j)] = {t, x, 0.0, 0.0};
    }

    const SpacetimeSampleSet exact = pullback_transform(amp, frame, targets);
    const MomentumAmplitude boosted = momentum_boost(amp, frame);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < targets.size(); ++j) {
        const cdouble via_momentum = synthesize(boosted, targets[j]);
        num += std::norm(via_momentum - exact.values[j]);
        den += std::norm(exact.values[j]);
    }
    const double equivalence_l2 = den > 0.0 ? std::sqrt(num / den) : 0.0;
    const double residual = quasi_2d_residual(amp, frame, {0.0, cfg.slice_samples});
    const double extent = 4.0 * sigma_x;
    const double spread = time_slice_spread(extent, frame);

    std::ostringstream samples_csv;
    write_csv(samples_csv, exact);
    out.write("boosted_samples.csv", samples_csv.str());

    nlohmann::json rj;
    rj["scenario"] = to_string(cfg.scenario);
    rj["seed"] = cfg.seed;
    rj["beta"] = cfg.beta;
    rj["packet"] = {{"mass", cfg.mass}, {"sigma_k", cfg.sigma_k}, {"center_k", cfg.center_k},
                    {"grid_n", cfg.grid_n}, {"grid_half_span", half_span}};
    rj["norms"] = {{"original", norm(amp)}, {"boosted", norm(boosted)}};
    rj["equivalence_l2"] = equivalence_l2;
    rj["quasi_2d_residual"] = residual;
    rj["time_slice_spread"] = {{"extent", extent}, {"spread", spread}};
    return rj;
}

}  // namespace detail

struct RunResult {
    std::filesystem::path out_dir;
    std::filesystem::path report_path;
    std::filesystem::path manifest_path;
};

/// Execute a validated config: dispatch to the scenario, write report,
/// plot data and manifest. Deterministic outputs given (config, seed);
/// only the manifest carries the wall time.
inline RunResult run(const RunConfig& cfg) {
    validate_config(cfg);
    detail::OutputSet out{std::filesystem::path(cfg.out_dir)};
    const auto start = std::chrono::steady_clock::now();
    try {
        nlohmann::json report;
        switch (cfg.scenario) {
            case ScenarioId::einstein_screen: report = detail::run_einstein(cfg, out); break;
            case ScenarioId::decay_90: report = detail::run_decay90(cfg, out); break;
            case ScenarioId::epr_boosted: report = detail::run_epr(cfg, out); break;
            case ScenarioId::packet_boost_demo: report = detail::run_packet_demo(cfg, out); break;
        }
        out.write("report.json", report.dump(1) + "\n");

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        nlohmann::json manifest;
        manifest["version"] = kVersion;
        manifest["seed"] = cfg.seed;
        manifest["config_text"] = serialize_config(cfg);
        manifest["wall_time_s"] = wall;
        manifest["files"] = out.file_table();
        {
            const std::filesystem::path p = out.dir() / "manifest.json";
            std::ofstream os(p, std::ios::binary);
            if (!os) throw ScenarioError("cannot open output file " + p.string());
            os << manifest.dump(1) << "\n";
        }
    } catch (...) {
        out.remove_all();
        throw;
    }
    return {out.dir(), out.dir() / "report.json", out.dir() / "manifest.json"};
}

}  // namespace relwave
