#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "relwave/spacetime.hpp"

// Configuration for the scenario runner: a flat, human-writable key = value
// document ('#' starts a comment). Unknown keys are errors, not warnings,
// and every numeric guard has a name that appears in the error message.

namespace relwave {

/// Shortest decimal form that parses back to exactly the same double.
inline std::string format_double_compact(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

enum class ScenarioId { einstein_screen, decay_90, epr_boosted, packet_boost_demo };

inline const char* to_string(ScenarioId s) {
    switch (s) {
        case ScenarioId::einstein_screen: return "einstein_screen";
        case ScenarioId::decay_90: return "decay_90";
        case ScenarioId::epr_boosted: return "epr_boosted";
        default: return "packet_boost_demo";
    }
}

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& field, const std::string& message)
        : std::runtime_error(line > 0
                                 ? "config error (line " + std::to_string(line) + ", " + field + "): " + message
                                 : "config error (" + field + "): " + message),
          line_(line),
          field_(field) {}

    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

struct RunConfig {
    ScenarioId scenario = ScenarioId::einstein_screen;
    std::uint64_t seed = 1;
    std::size_t n_trials = 100000;
    unsigned threads = 1;
    std::string out_dir = "out";
    double beta = 0.5;

    // einstein_screen
    int n_polar_bins = 6;
    int n_azimuth_bins = 12;
    std::string profile = "isotropic";  // isotropic | polar_cap
    double cap_half_angle_deg = 30.0;   // wide enough to cover a bin center of the default binning

    // decay_90
    double det1_angle_deg = 0.0;
    double det2_angle_deg = 90.0;
    double det1_distance = 2.0;
    double det2_distance = 2.0;
    double det1_acceptance_deg = 10.0;
    double det2_acceptance_deg = 10.0;
    double k_center = 1.0;
    double k_sigma = 0.05;
    double mass = 1.0;

    // epr_boosted
    double separation = 2.0;
    double track_speed = 0.5;
    double a_deg = 0.0;
    double a_prime_deg = 90.0;
    double b_deg = 45.0;
    double b_prime_deg = 135.0;
    int sweep_points = 19;
    bool emit_trials = false;

    // packet_boost_demo
    double sigma_k = 0.2;
    double center_k = 0.0;
    int grid_n = 8192;
    int n_targets = 128;
    int slice_samples = 257;

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(std::string s) {
    const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
}

struct RawEntry {
    std::string value;
    int line = 0;
};

// keys valid per scenario, in canonical serialization order
inline std::vector<std::string> scenario_keys(ScenarioId s) {
    std::vector<std::string> keys{"seed", "n_trials", "threads", "out_dir"};
    switch (s) {
        case ScenarioId::einstein_screen:
            keys.insert(keys.end(), {"n_polar_bins", "n_azimuth_bins", "profile", "cap_half_angle_deg"});
            break;
        case ScenarioId::decay_90:
            keys.insert(keys.end(), {"beta", "det1_angle_deg", "det2_angle_deg", "det1_distance",
                                     "det2_distance", "det1_acceptance_deg", "det2_acceptance_deg",
                                     "k_center", "k_sigma", "mass"});
            break;
        case ScenarioId::epr_boosted:
            keys.insert(keys.end(), {"beta", "separation", "track_speed", "a_deg", "a_prime_deg",
                                     "b_deg", "b_prime_deg", "sweep_points", "emit_trials"});
            break;
        case ScenarioId::packet_boost_demo:
            keys.insert(keys.end(),
                        {"beta", "mass", "sigma_k", "center_k", "grid_n", "n_targets", "slice_samples"});
            break;
    }
    return keys;
}

inline double parse_double(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError(line, key, "expected a finite number, got '" + v + "'");
    }
}

inline long long parse_int(const std::string& v, int line, const std::string& key) {
    long long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError(line, key, "expected an integer, got '" + v + "'");
    return out;
}

inline std::uint64_t parse_uint64(const std::string& v, int line, const std::string& key) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError(line, key, "expected a non-negative integer, got '" + v + "'");
    return out;
}

inline bool parse_bool(const std::string& v, int line, const std::string& key) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(line, key, "expected true or false, got '" + v + "'");
}

inline void check(bool ok, int line, const std::string& key, double value, const char* guard) {
    if (!ok) {
        std::ostringstream os;
        os << "value " << value << " violates guard " << guard;
        throw ConfigError(line, key, os.str());
    }
}

}  // namespace detail

inline void validate_config(const RunConfig& c) {
    using detail::check;
    check(c.n_trials >= 1, 0, "n_trials", static_cast<double>(c.n_trials), "n_trials >= 1");
    check(c.threads >= 1 && c.threads <= 256, 0, "threads", c.threads, "1 <= threads <= 256");
    if (c.out_dir.empty()) throw ConfigError(0, "out_dir", "must not be empty");
    check(std::abs(c.beta) < kBetaLimit, 0, "beta", c.beta, "|beta| < 1 - 1e-9");
    switch (c.scenario) {
        case ScenarioId::einstein_screen:
            check(c.n_polar_bins >= 1, 0, "n_polar_bins", c.n_polar_bins, "n_polar_bins >= 1");
            check(c.n_azimuth_bins >= 1, 0, "n_azimuth_bins", c.n_azimuth_bins, "n_azimuth_bins >= 1");
            if (c.profile != "isotropic" && c.profile != "polar_cap")
                throw ConfigError(0, "profile", "must be 'isotropic' or 'polar_cap', got '" + c.profile + "'");
            check(c.cap_half_angle_deg > 0.0 && c.cap_half_angle_deg <= 90.0, 0, "cap_half_angle_deg",
                  c.cap_half_angle_deg, "0 < cap_half_angle_deg <= 90");
            break;
        case ScenarioId::decay_90:
            check(c.det1_distance > 0.0, 0, "det1_distance", c.det1_distance, "det1_distance > 0");
            check(c.det2_distance > 0.0, 0, "det2_distance", c.det2_distance, "det2_distance > 0");
            check(c.det1_acceptance_deg > 0.0 && c.det1_acceptance_deg < 90.0, 0, "det1_acceptance_deg",
                  c.det1_acceptance_deg, "0 < det1_acceptance_deg < 90");
            check(c.det2_acceptance_deg > 0.0 && c.det2_acceptance_deg < 90.0, 0, "det2_acceptance_deg",
                  c.det2_acceptance_deg, "0 < det2_acceptance_deg < 90");
            check(c.k_center > 0.0, 0, "k_center", c.k_center, "k_center > 0");
            check(c.k_sigma > 0.0, 0, "k_sigma", c.k_sigma, "k_sigma > 0");
            check(c.mass >= 0.0, 0, "mass", c.mass, "mass >= 0");
            break;
        case ScenarioId::epr_boosted:
            check(c.separation > 0.0, 0, "separation", c.separation, "separation > 0");
            check(c.track_speed > 0.0 && c.track_speed < 1.0, 0, "track_speed", c.track_speed,
                  "0 < track_speed < 1");
            check(c.sweep_points >= 2, 0, "sweep_points", c.sweep_points, "sweep_points >= 2");
            break;
        case ScenarioId::packet_boost_demo:
            check(c.mass >= 0.0, 0, "mass", c.mass, "mass >= 0");
            check(c.sigma_k > 0.0, 0, "sigma_k", c.sigma_k, "sigma_k > 0");
            check(c.grid_n >= 16 && c.grid_n <= (1 << 20), 0, "grid_n", c.grid_n,
                  "16 <= grid_n <= 2^20");
            check(c.n_targets >= 1, 0, "n_targets", c.n_targets, "n_targets >= 1");
            check(c.slice_samples >= 1, 0, "slice_samples", c.slice_samples, "slice_samples >= 1");
            break;
    }
}

inline RunConfig parse_config(const std::string& text) {
    std::map<std::string, detail::RawEntry> raw;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line_no, "syntax", "expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "syntax", "empty key");
        if (value.empty()) throw ConfigError(line_no, key, "empty value");
        if (raw.count(key)) throw ConfigError(line_no, key, "duplicate key");
        raw[key] = {value, line_no};
    }

    const auto scenario_it = raw.find("scenario");
    if (scenario_it == raw.end()) throw ConfigError(0, "scenario", "missing required key");
    RunConfig cfg;
    const std::string& sid = scenario_it->second.value;
    if (sid == "einstein_screen") cfg.scenario = ScenarioId::einstein_screen;
    else if (sid == "decay_90") cfg.scenario = ScenarioId::decay_90;
    else if (sid == "epr_boosted") cfg.scenario = ScenarioId::epr_boosted;
    else if (sid == "packet_boost_demo") cfg.scenario = ScenarioId::packet_boost_demo;
    else throw ConfigError(scenario_it->second.line, "scenario", "unknown scenario id '" + sid + "'");
    raw.erase(scenario_it);

    // scenario-dependent defaults
    switch (cfg.scenario) {
        case ScenarioId::einstein_screen: cfg.n_trials = 100000; break;
        case ScenarioId::decay_90: cfg.n_trials = 10000; break;
        case ScenarioId::epr_boosted: cfg.n_trials = 100000; break;
        case ScenarioId::packet_boost_demo: cfg.n_trials = 1; break;
    }
    cfg.out_dir = std::string("out/") + to_string(cfg.scenario);

    const auto take = [&raw](const std::string& key) -> const detail::RawEntry* {
        const auto it = raw.find(key);
        return it == raw.end() ? nullptr : &it->second;
    };
    const auto consume = [&raw](const std::string& key) { raw.erase(key); };

    for (const std::string& key : detail::scenario_keys(cfg.scenario)) {
        const detail::RawEntry* e = take(key);
        if (!e) continue;
        const std::string& v = e->value;
        const int ln = e->line;
        if (key == "seed") cfg.seed = detail::parse_uint64(v, ln, key);
        else if (key == "n_trials") cfg.n_trials = static_cast<std::size_t>(detail::parse_uint64(v, ln, key));
        else if (key == "threads") cfg.threads = static_cast<unsigned>(detail::parse_uint64(v, ln, key));
        else if (key == "out_dir") cfg.out_dir = v;
        else if (key == "beta") cfg.beta = detail::parse_double(v, ln, key);
        else if (key == "n_polar_bins") cfg.n_polar_bins = static_cast<int>(detail::parse_int(v, ln, key));
        else if (key == "n_azimuth_bins") cfg.n_azimuth_bins = static_cast<int>(detail::parse_int(v, ln, key));
        else if (key == "profile") cfg.profile = v;
        else if (key == "cap_half_angle_deg") cfg.cap_half_angle_deg = detail::parse_double(v, ln, key);
        else if (key == "det1_angle_deg") cfg.det1_angle_deg = detail::parse_double(v, ln, key);
        else if (key == "det2_angle_deg") cfg.det2_angle_deg = detail::parse_double(v, ln, key);
        else if (key == "det1_distance") cfg.det1_distance = detail::parse_double(v, ln, key);
        else if (key == "det2_distance") cfg.det2_distance = detail::parse_double(v, ln, key);
        else if (key == "det1_acceptance_deg") cfg.det1_acceptance_deg = detail::parse_double(v, ln, key);
        else if (key == "det2_acceptance_deg") cfg.det2_acceptance_deg = detail::parse_double(v, ln, key);
        else if (key == "k_center") cfg.k_center = detail::parse_double(v, ln, key);
        else if (key == "k_sigma") cfg.k_sigma = detail::parse_double(v, ln, key);
        else if (key == "mass") cfg.mass = detail::parse_double(v, ln, key);
        else if (key == "separation") cfg.separation = detail::parse_double(v, ln, key);
        else if (key == "track_speed") cfg.track_speed = detail::parse_double(v, ln, key);
        else if (key == "a_deg") cfg.a_deg = detail::parse_double(v, ln, key);
        else if (key == "a_prime_deg") cfg.a_prime_deg = detail::parse_double(v, ln, key);
        else if (key == "b_deg") cfg.b_deg = detail::parse_double(v, ln, key);
        else if (key == "b_prime_deg") cfg.b_prime_deg = detail::parse_double(v, ln, key);
        else if (key == "sweep_points") cfg.sweep_points = static_cast<int>(detail::parse_int(v, ln, key));
        else if (key == "emit_trials") cfg.emit_trials = detail::parse_bool(v, ln, key);
        else if (key == "sigma_k") cfg.sigma_k = detail::parse_double(v, ln, key);
        else if (key == "center_k") cfg.center_k = detail::parse_double(v, ln, key);
        else if (key == "grid_n") cfg.grid_n = static_cast<int>(detail::parse_int(v, ln, key));
        else if (key == "n_targets") cfg.n_targets = static_cast<int>(detail::parse_int(v, ln, key));
        else if (key == "slice_samples") cfg.slice_samples = static_cast<int>(detail::parse_int(v, ln, key));
        consume(key);
    }

    if (!raw.empty()) {
        const auto& first = *raw.begin();
        throw ConfigError(first.second.line, first.first,
                          "unknown key for scenario '" + std::string(to_string(cfg.scenario)) + "'");
    }

    validate_config(cfg);
    return cfg;
}

/// Canonical text form: scenario first, then the scenario's keys in
/// documented order. parse(serialize(parse(text))) == parse(text).
inline std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "scenario = " << to_string(cfg.scenario) << '\n';
    for (const std::string& key : detail::scenario_keys(cfg.scenario)) {
        os << key << " = ";
        if (key == "seed") os << cfg.seed;
        else if (key == "n_trials") os << cfg.n_trials;
        else if (key == "threads") os << cfg.threads;
        else if (key == "out_dir") os << cfg.out_dir;
        else if (key == "beta") os << format_double_compact(cfg.beta);
        else if (key == "n_polar_bins") os << cfg.n_polar_bins;
        else if (key == "n_azimuth_bins") os << cfg.n_azimuth_bins;
        else if (key == "profile") os << cfg.profile;
        else if (key == "cap_half_angle_deg") os << format_double_compact(cfg.cap_half_angle_deg);
        else if (key == "det1_angle_deg") os << format_double_compact(cfg.det1_angle_deg);
        else if (key == "det2_angle_deg") os << format_double_compact(cfg.det2_angle_deg);
        else if (key == "det1_distance") os << format_double_compact(cfg.det1_distance);
        else if (key == "det2_distance") os << format_double_compact(cfg.det2_distance);
        else if (key == "det1_acceptance_deg") os << format_double_compact(cfg.det1_acceptance_deg);
        else if (key == "det2_acceptance_deg") os << format_double_compact(cfg.det2_acceptance_deg);
        else if (key == "k_center") os << format_double_compact(cfg.k_center);
        else if (key == "k_sigma") os << format_double_compact(cfg.k_sigma);
        else if (key == "mass") os << format_double_compact(cfg.mass);
        else if (key == "separation") os << format_double_compact(cfg.separation);
        else if (key == "track_speed") os << format_double_compact(cfg.track_speed);
        else if (key == "a_deg") os << format_double_compact(cfg.a_deg);
        else if (key == "a_prime_deg") os << format_double_compact(cfg.a_prime_deg);
        else if (key == "b_deg") os << format_double_compact(cfg.b_deg);
        else if (key == "b_prime_deg") os << format_double_compact(cfg.b_prime_deg);
        else if (key == "sweep_points") os << cfg.sweep_points;
        else if (key == "emit_trials") os << (cfg.emit_trials ? "true" : "false");
        else if (key == "sigma_k") os << format_double_compact(cfg.sigma_k);
        else if (key == "center_k") os << format_double_compact(cfg.center_k);
        else if (key == "grid_n") os << cfg.grid_n;
        else if (key == "n_targets") os << cfg.n_targets;
        else if (key == "slice_samples") os << cfg.slice_samples;
        os << '\n';
    }
    return os.str();
}

}  // namespace relwave
