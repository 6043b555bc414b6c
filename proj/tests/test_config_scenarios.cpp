#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "relwave/config.hpp"
#include "relwave/io.hpp"
#include "relwave/scenario.hpp"

using namespace relwave;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::size_t count_rows(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(is, line)) ++rows;
    return rows ? rows - 1 : 0;  // minus header
}

fs::path test_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "relwave_tests" / name;
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("minimal config gets the documented defaults") {
    const RunConfig cfg = parse_config("scenario = epr_boosted\n");
    CHECK(cfg.scenario == ScenarioId::epr_boosted);
    CHECK(cfg.seed == 1);
    CHECK(cfg.n_trials == 100000);
    CHECK(cfg.threads == 1);
    CHECK(cfg.out_dir == "out/epr_boosted");
    CHECK(cfg.beta == 0.5);
    CHECK(cfg.sweep_points == 19);
    CHECK_FALSE(cfg.emit_trials);

    const RunConfig decay = parse_config("scenario = decay_90");
    CHECK(decay.n_trials == 10000);
    CHECK(decay.det2_angle_deg == 90.0);
}

TEST_CASE("config parse errors carry line and field diagnostics") {
    // unknown key
    try {
        parse_config("scenario = decay_90\nbogus_key = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
        CHECK(e.field() == "bogus_key");
        CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
    }

    // a key that belongs to another scenario is unknown here
    CHECK_THROWS_AS(parse_config("scenario = einstein_screen\nbeta = 0.5\n"), ConfigError);

    CHECK_THROWS_AS(parse_config("n_trials = 10\n"), ConfigError);                    // missing scenario
    CHECK_THROWS_AS(parse_config("scenario = warp_drive\n"), ConfigError);            // unknown scenario
    CHECK_THROWS_AS(parse_config("scenario = decay_90\nbeta = 0.1\nbeta = 0.2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = decay_90\nbeta\n"), ConfigError);        // no '='
    CHECK_THROWS_AS(parse_config("scenario = decay_90\nbeta = \n"), ConfigError);     // empty value
    CHECK_THROWS_AS(parse_config("scenario = decay_90\nbeta = fast\n"), ConfigError); // not a number
}

TEST_CASE("validation errors name the violated guard") {
    try {
        parse_config("scenario = decay_90\nbeta = 1.5\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "beta");
        CHECK(std::string(e.what()).find("|beta| < 1 - 1e-9") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("scenario = decay_90\nk_sigma = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = epr_boosted\ntrack_speed = 1.0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = einstein_screen\nprofile = ring\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = epr_boosted\nn_trials = 0\n"), ConfigError);
}

TEST_CASE("config round-trips through serialization") {
    const std::string text =
        "# comment line\n"
        "scenario = decay_90\n"
        "beta = -0.25   # inline comment\n"
        "n_trials = 1234\n"
        "det2_distance = 3.5\n"
        "seed = 99\n";
    const RunConfig once = parse_config(text);
    CHECK(once.beta == -0.25);
    CHECK(once.det2_distance == 3.5);
    const RunConfig twice = parse_config(serialize_config(once));
    CHECK(once == twice);

    // all four scenarios round-trip from their defaults
    for (const char* sid : {"einstein_screen", "decay_90", "epr_boosted", "packet_boost_demo"}) {
        const RunConfig a = parse_config(std::string("scenario = ") + sid);
        const RunConfig b = parse_config(serialize_config(a));
        CHECK(a == b);
    }
}

TEST_CASE("decay run writes report, plot data, records and manifest") {
    RunConfig cfg = parse_config("scenario = decay_90\nn_trials = 300\nseed = 5");
    cfg.out_dir = test_dir("decay_files").string();
    const RunResult res = run(cfg);

    REQUIRE(fs::exists(res.report_path));
    REQUIRE(fs::exists(res.manifest_path));
    REQUIRE(fs::exists(res.out_dir / "timeline.csv"));
    REQUIRE(fs::exists(res.out_dir / "records.jsonl"));

    const nlohmann::json report = nlohmann::json::parse(slurp(res.report_path));
    CHECK(report["scenario"] == "decay_90");
    CHECK(report["trials"].size() == 300);
    CHECK(report["fire_counts"][0].get<std::size_t>() + report["fire_counts"][1].get<std::size_t>() == 300);
    CHECK(count_rows(slurp(res.out_dir / "timeline.csv")) == 300);

    // every output file is listed in the manifest with a matching digest
    const nlohmann::json manifest = nlohmann::json::parse(slurp(res.manifest_path));
    CHECK(manifest["version"] == kVersion);
    bool saw_report = false;
    for (const auto& f : manifest["files"]) {
        const std::string content = slurp(res.out_dir / f["name"].get<std::string>());
        CHECK(fnv1a64_hex(content) == f["fnv1a64"].get<std::string>());
        CHECK(content.size() == f["bytes"].get<std::size_t>());
        if (f["name"] == "report.json") saw_report = true;
    }
    CHECK(saw_report);

    // config echo in the manifest parses back to the exact run config
    const RunConfig echoed = parse_config(manifest["config_text"].get<std::string>());
    CHECK(echoed == cfg);
}

TEST_CASE("runs are deterministic and thread-count independent") {
    const fs::path dir_a = test_dir("det_a");
    const fs::path dir_b = test_dir("det_b");
    const fs::path dir_c = test_dir("det_c");
    RunConfig cfg = parse_config("scenario = decay_90\nn_trials = 400\nseed = 21");
    cfg.out_dir = dir_a.string();
    run(cfg);
    cfg.out_dir = dir_b.string();
    run(cfg);
    cfg.out_dir = dir_c.string();
    cfg.threads = 3;
    run(cfg);

    for (const char* name : {"report.json", "timeline.csv", "records.jsonl"}) {
        const std::string a = slurp(dir_a / name);
        CHECK(a == slurp(dir_b / name));
        CHECK(a == slurp(dir_c / name));
    }
}

TEST_CASE("epr run emits the correlation sweep") {
    RunConfig cfg = parse_config("scenario = epr_boosted\nn_trials = 2000\nseed = 9");
    cfg.out_dir = test_dir("epr_files").string();
    const RunResult res = run(cfg);

    const std::string csv = slurp(res.out_dir / "correlation.csv");
    CHECK(count_rows(csv) == 19);

    // analytic column is -cos(angle): monotone increasing from -1 to +1
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "angle_deg,analytic,estimate,std_error,n_trials");
    double previous = -2.0, first = 0.0, last = 0.0;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double analytic = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(analytic >= previous);
        previous = analytic;
        if (row == 0) first = analytic;
        last = analytic;
        ++row;
    }
    CHECK(first == Catch::Approx(-1.0).margin(1e-12));
    CHECK(last == Catch::Approx(1.0).margin(1e-12));

    const nlohmann::json report = nlohmann::json::parse(slurp(res.report_path));
    CHECK(report["chsh"].contains("estimate"));
    CHECK(report["chsh"].contains("analytic"));
    CHECK(report["frame_roles"]["plus_beta"]["first"] == "D2");
    CHECK(report["frame_roles"]["minus_beta"]["first"] == "D1");

    // trials CSV appears on request
    RunConfig with_trials = cfg;
    with_trials.emit_trials = true;
    with_trials.out_dir = test_dir("epr_trials").string();
    const RunResult res2 = run(with_trials);
    CHECK(count_rows(slurp(res2.out_dir / "trials.csv")) == 2000);
}

TEST_CASE("einstein run matches its own chi-square gate") {
    RunConfig cfg = parse_config("scenario = einstein_screen\nn_trials = 5000\nseed = 3");
    cfg.out_dir = test_dir("screen_files").string();
    const RunResult res = run(cfg);
    const nlohmann::json report = nlohmann::json::parse(slurp(res.report_path));
    CHECK(report["chi_square"]["pass"].get<bool>());
    CHECK(count_rows(slurp(res.out_dir / "hits.csv")) == 5000);
}

TEST_CASE("packet demo reports the two-route comparison") {
    RunConfig cfg = parse_config("scenario = packet_boost_demo\ngrid_n = 2048\nn_targets = 16\nslice_samples = 65");
    cfg.out_dir = test_dir("packet_files").string();
    const RunResult res = run(cfg);
    const nlohmann::json report = nlohmann::json::parse(slurp(res.report_path));
    CHECK(report["equivalence_l2"].get<double>() < 1e-3);
    CHECK(report["quasi_2d_residual"].get<double>() > 0.0);
    CHECK(report["norms"]["boosted"].get<double>() ==
          Catch::Approx(report["norms"]["original"].get<double>()).epsilon(1e-4));
    CHECK(fs::exists(res.out_dir / "boosted_samples.csv"));
    const std::string csv = slurp(res.out_dir / "boosted_samples.csv");
    CHECK(csv.substr(0, 14) == "t,x,y,z,re,im\n");
    CHECK(count_rows(csv) == 16);
}

TEST_CASE("empty reports still produce header-only plot files") {
    std::ostringstream hits;
    emit_hits_csv(ScreenReport{}, hits);
    CHECK(hits.str() == "trial,theta,phi,bin\n");

    std::ostringstream timeline;
    emit_timeline_csv(DecayReport{}, timeline);
    CHECK(count_rows(timeline.str()) == 0);

    std::ostringstream sweep;
    emit_correlation_sweep_csv({}, sweep);
    CHECK(sweep.str() == "angle_deg,analytic,estimate,std_error,n_trials\n");
}

TEST_CASE("failed runs leave no partial outputs") {
    RunConfig cfg = parse_config("scenario = einstein_screen\nn_trials = 50");
    cfg.profile = "polar_cap";
    cfg.cap_half_angle_deg = 1.0;  // covers no bin center: the scenario must fail
    cfg.out_dir = test_dir("failing").string();
    CHECK_THROWS(run(cfg));
    CHECK_FALSE(fs::exists(fs::path(cfg.out_dir) / "report.json"));
    CHECK_FALSE(fs::exists(fs::path(cfg.out_dir) / "hits.csv"));
    CHECK_FALSE(fs::exists(fs::path(cfg.out_dir) / "manifest.json"));
}
