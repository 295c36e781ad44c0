#include "sirbif/errors.hpp"
#include "sirbif/scenario.hpp"

#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

using namespace sirbif;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("sirbif_scenario_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunResult run_text(const std::string& text, const fs::path& out)
{
    RunOptions opts;
    opts.out_dir = out;
    return run(parse_scenario(text), opts);
}

int cli(const std::string& args)
{
    const std::string cmd = std::string(SIRBIF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

const char* kFlipSweep = R"({"schema_version": 1, "command": "sweep",
  "params": {"N": 0.72, "beta": 0.52, "r": 0.21, "alpha": 3.95},
  "settings": {"param": "alpha", "lo": 3.95, "hi": 4.85, "steps": 181, "transient": 20000, "keep": 512}})";

}  // namespace

TEST_CASE("classify reproduces the first table row", "[scenario]")
{
    const auto dir = scratch_dir("classify");
    const RunResult res = run_text(
        R"({"schema_version": 1, "command": "classify", "params": {"N": 1, "beta": 0.5, "r": 0.3, "alpha": 0.5}})", dir);
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(read_file(dir / "classify.json"));
    CHECK(j == nlohmann::json{{"E1", "D1_stable_node"}, {"E2", "nonexistent"}});
}

TEST_CASE("scenario validation", "[scenario][errors]")
{
    CHECK_THROWS_AS(parse_scenario("{"), InvalidInput);
    CHECK_THROWS_AS(parse_scenario(R"({"command": "classify", "params": {"N": 1, "beta": 0.5, "r": 0.3, "alpha": 0.5}})"),
                    InvalidInput);
    CHECK_THROWS_AS(parse_scenario(R"({"schema_version": 2, "command": "classify"})"), InvalidInput);
    CHECK_THROWS_AS(parse_scenario(R"({"schema_version": 1, "command": "plot"})"), InvalidInput);
    CHECK_THROWS_AS(parse_scenario(R"({"schema_version": 1, "command": "classify"})"), InvalidInput);
    CHECK_THROWS_AS(
        parse_scenario(R"({"schema_version": 1, "command": "classify", "params": {"N": 1, "beta": 0.5, "r": 1.3, "alpha": 0.5}})"),
        InvalidInput);
    CHECK_THROWS_AS(
        parse_scenario(R"({"schema_version": 1, "command": "simulate", "params": {"N": 1, "beta": 0.5, "r": 0.3, "alpha": 0.5},
                           "settings": {"steps": 3}})"),
        InvalidInput);
    CHECK_THROWS_AS(parse_tolerance_overrides(R"({"newton": -1})"), InvalidInput);
    CHECK_THROWS_AS(parse_tolerance_overrides(R"({"speed": 1})"), InvalidInput);
    CHECK(parse_tolerance_overrides(R"({"newton": 1e-12})").newton == 1e-12);

    const Scenario sc = parse_scenario(R"({"schema_version": 1, "command": "ns-curve", "params": {"N": 1.25, "beta": 0.32},
                                           "settings": {"r_lo": 0.7, "r_hi": 3.0}})");
    CHECK(parse_scenario(scenario_to_json(sc).dump()).command == "ns-curve");
}

TEST_CASE("sweep on the flip scenario lists periods 1, 2 and 4", "[scenario]")
{
    const auto dir = scratch_dir("sweep");
    REQUIRE(run_text(kFlipSweep, dir).exit_code == 0);
    const Table t = parse_csv(read_file(dir / "sweep.csv"));
    std::set<int> periods;
    for (const auto& row : sweep_rows(t)) {
        if (row.kind == "periodic") {
            periods.insert(row.period);
        }
    }
    CHECK(periods.count(1) == 1);
    CHECK(periods.count(2) == 1);
    CHECK(periods.count(4) == 1);
}

TEST_CASE("sweep output re-parses into the in-memory records", "[scenario][round-trip]")
{
    const auto dir = scratch_dir("sweep_rt");
    const Scenario sc = parse_scenario(kFlipSweep);
    RunOptions opts;
    opts.out_dir = dir;
    REQUIRE(run(sc, opts).exit_code == 0);

    SweepOptions o;
    o.n_transient = 20000;
    o.n_keep = 512;
    const auto records = sweep_bifurcation(*sc.params, SweepParam::Alpha, 3.95, 4.85, 181, o);
    const auto expected = sweep_rows(records);
    const auto parsed = sweep_rows(parse_csv(read_file(dir / "sweep.csv")));
    REQUIRE(parsed.size() == expected.size());
    CHECK(parsed == expected);
}

TEST_CASE("identical scenarios give bit-identical files", "[scenario][round-trip]")
{
    const auto a = scratch_dir("det_a");
    const auto b = scratch_dir("det_b");
    const std::string text = R"({"schema_version": 1, "command": "simulate",
        "params": {"N": 10, "beta": 0.9, "r": 0.4246, "alpha": 5.419},
        "settings": {"seed": [2.18, 5.78, 2.12], "transient": 5000, "keep": 200}})";
    REQUIRE(run_text(text, a).exit_code == 0);
    RunOptions opts;
    opts.out_dir = b;
    opts.threads = 3;
    REQUIRE(run(parse_scenario(text), opts).exit_code == 0);
    CHECK(read_file(a / "orbit.csv") == read_file(b / "orbit.csv"));
    CHECK(read_file(a / "simulate.json") == read_file(b / "simulate.json"));

    const auto rows = orbit_rows(parse_csv(read_file(a / "orbit.csv")));
    REQUIRE(rows.size() == 200);
    CHECK(rows.front().step == 5001);
    CHECK(rows.back().step == 5200);
    State3 s{2.18, 5.78, 2.12};
    const Params p{10.0, 0.9, 0.4246, 5.419};
    for (int i = 0; i < 5001; ++i) {
        s = map_step(p, s);
    }
    CHECK(rows.front().state.x == s.x);
    CHECK(rows.front().state.y == s.y);
    CHECK(rows.front().state.z == s.z);
}

TEST_CASE("continuation curves and events re-parse exactly", "[scenario][round-trip]")
{
    const auto dir = scratch_dir("continue");
    const std::string text = R"({"schema_version": 1, "command": "continue",
        "params": {"N": 0.72, "beta": 0.52, "r": 0.21, "alpha": 0.1},
        "settings": {"param": "alpha", "lo": 0.1, "hi": 6.0, "start": "E1"}})";
    REQUIRE(run_text(text, dir).exit_code == 0);
    const Params p{0.72, 0.52, 0.21, 0.1};
    const ContinuationCurve curve = continue_fixed_points(p, SweepParam::Alpha, {0.72, 0.0, 0.0}, 0.1, 6.0);

    const auto points = curve_points(parse_csv(read_file(dir / "curve.csv")), curve.test_names.size());
    REQUIRE(points.size() == curve.points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        CHECK(points[i].params.alpha == curve.points[i].params.alpha);
        CHECK(points[i].state.x == curve.points[i].state.x);
        CHECK(points[i].state.y == curve.points[i].state.y);
        CHECK(points[i].multipliers == curve.points[i].multipliers);
        CHECK(points[i].test_values == curve.points[i].test_values);
    }
    const auto events = curve_events(parse_csv(read_file(dir / "curve_events.csv")));
    REQUIRE(events.size() == curve.events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        CHECK(events[i].kind == curve.events[i].kind);
        CHECK(events[i].params.alpha == curve.events[i].params.alpha);
        CHECK(events[i].tangent == curve.events[i].tangent);
        CHECK(events[i].note == curve.events[i].note);
    }
    CHECK(fs::exists(dir / "branch.csv"));
    const auto branch = curve_points(parse_csv(read_file(dir / "branch.csv")), curve.test_names.size());
    CHECK(branch.size() > 10);
}

TEST_CASE("tongue grid re-parses exactly", "[scenario][round-trip]")
{
    const auto dir = scratch_dir("tongue");
    const std::string text = R"({"schema_version": 1, "command": "tongue", "params": {"N": 10, "beta": 0.9},
        "settings": {"n": 2, "m": 5, "grid": [11, 13], "sigma_abs": 0.0102}})";
    REQUIRE(run_text(text, dir).exit_code == 0);
    const TongueSpec spec = arnold_tongue(10.0, 0.9, 2, 5, 0.0102);
    const auto rows = tongue_rows(parse_csv(read_file(dir / "tongue_grid.csv")));
    REQUIRE(rows.size() == 11 * 13);
    for (const auto& row : rows) {
        CHECK(row == TongueRow{row.r, row.alpha, spec.boundary(row.r, row.alpha)});
    }
    const auto j = nlohmann::json::parse(read_file(dir / "tongue.json"));
    CHECK(j["alpha_star"].get<double>() == spec.alpha_star);
}

TEST_CASE("ns-curve report lists the codimension-two points", "[scenario]")
{
    const auto dir = scratch_dir("ns");
    const std::string text = R"({"schema_version": 1, "command": "ns-curve", "params": {"N": 1.25, "beta": 0.32},
        "settings": {"r_lo": 0.7, "r_hi": 3.0, "points_per_unit": 400}})";
    REQUIRE(run_text(text, dir).exit_code == 0);
    const auto j = nlohmann::json::parse(read_file(dir / "ns_curve.json"));
    std::vector<std::string> kinds;
    for (const auto& e : j["events"]) {
        kinds.push_back(e["kind"].get<std::string>());
    }
    CHECK(kinds == std::vector<std::string>{"R2", "R3", "R4", "CH"});
    CHECK(j["events"][1].contains("normal_form"));
    CHECK(parse_csv(read_file(dir / "ns_curve.csv")).header.back() == "alpha_generic");
}

TEST_CASE("failed runs map to exit codes and write nothing", "[scenario][errors]")
{
    const auto dir = scratch_dir("fail");
    RunOptions opts;
    opts.out_dir = dir / "out";
    opts.tolerance_overrides = Tolerances{};
    opts.tolerance_overrides->contraction = 1e-300;
    const Scenario sc = parse_scenario(R"({"schema_version": 1, "command": "simulate",
        "params": {"N": 1, "beta": 0.3, "r": 0.4, "alpha": 2.0}, "settings": {"seed": [0.37, 0.41, 0.93]}})");
    const RunResult res = run(sc, opts);
    CHECK(res.exit_code == 2);
    CHECK(res.files.empty());
    CHECK_FALSE(fs::exists(dir / "out" / "orbit.csv"));

    Scenario verify;
    verify.command = "verify";
    CHECK(run(verify, opts).exit_code == 1);
}

TEST_CASE("command-line exit codes", "[scenario][cli]")
{
    const auto dir = scratch_dir("cli");
    write_text(dir / "classify.json",
               R"({"schema_version": 1, "command": "classify", "params": {"N": 1, "beta": 0.5, "r": 0.3, "alpha": 0.5}})");
    write_text(dir / "bad.json",
               R"({"schema_version": 1, "command": "classify", "params": {"N": 1, "beta": 1.5, "r": 0.3, "alpha": 0.5}})");
    write_text(dir / "blowup.json", R"({"schema_version": 1, "command": "simulate",
        "params": {"N": 1, "beta": 0.3, "r": 0.4, "alpha": 2.0}, "settings": {"seed": [0.37, 0.41, 0.93]}})");
    write_text(dir / "tight.json", R"({"contraction": 1e-300})");
    write_text(dir / "verify1.json", R"({"schema_version": 1, "command": "verify", "settings": {"only": [1, 3]}})");
    const std::string out = " --out " + (dir / "out").string();

    CHECK(cli("classify --scenario " + (dir / "classify.json").string() + out) == 0);
    CHECK(cli("classify --scenario " + (dir / "bad.json").string() + out) == 1);
    CHECK(cli("simulate --scenario " + (dir / "classify.json").string() + out) == 1);
    CHECK(cli("simulate --scenario " + (dir / "blowup.json").string() + " --tolerance-overrides " +
              (dir / "tight.json").string() + out) == 2);
    CHECK(cli("verify --scenario " + (dir / "verify1.json").string() + out) == 0);
    CHECK(cli("verify --tolerance-overrides " + (dir / "tight.json").string() + out) == 1);
    CHECK(cli("frobnicate") == 1);
    CHECK(cli("sweep --help") == 0);
}

TEST_CASE("verify exits 3 exactly when a check fails", "[scenario][cli]")
{
    const auto dir = scratch_dir("verify");
    Scenario sc;
    sc.command = "verify";
    RunOptions opts;
    opts.out_dir = dir;
    const RunResult res = run(sc, opts);
    const auto j = nlohmann::json::parse(read_file(dir / "verify.json"));
    REQUIRE(j["checks"].size() == 13);
    CHECK(res.exit_code == (j["failed"].get<int>() == 0 ? 0 : 3));
}
