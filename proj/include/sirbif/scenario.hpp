#pragma once

#include "sirbif/continuation.hpp"
#include "sirbif/dynamics.hpp"
#include "sirbif/io.hpp"
#include "sirbif/model.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sirbif {

inline constexpr int kSchemaVersion = 1;

// Subcommand names in the order they appear in --help.
const std::vector<std::string>& command_names();

struct Scenario {
    int schema_version = kSchemaVersion;
    std::string command;
    std::optional<Params> params;  // required by every command except verify
    nlohmann::json settings = nlohmann::json::object();
};

// Parses and validates a scenario document.  Throws InvalidInput on
// malformed JSON, unknown commands or keys, and out-of-domain values.
Scenario parse_scenario(const std::string& text);
nlohmann::json scenario_to_json(const Scenario& s);

// Numerical knobs that --tolerance-overrides may replace.
struct Tolerances {
    double recurrence = 1e-8;    // period detection, scaled by N
    double contraction = 1e-9;   // invariant-plane contraction check
    double divergence = 1e6;     // orbit escapes once |s| > divergence * N
    double newton = 1e-10;       // continuation corrector
    double event = 1e-10;        // continuation event bracket
    double ns_agreement = 1e-9;  // closed vs generic NS locus
};

// Keys: recurrence, contraction, divergence, newton, event, ns_agreement.
Tolerances parse_tolerance_overrides(const std::string& text, const Tolerances& base = {});

struct RunOptions {
    std::filesystem::path out_dir = ".";
    int threads = 1;
    std::optional<Tolerances> tolerance_overrides;
    std::ostream* summary = nullptr;  // human-readable table, optional
};

struct RunResult {
    int exit_code = 0;  // 0 ok, 1 validation, 2 numerical, 3 verification failure
    std::vector<std::filesystem::path> files;
    std::string message;
};

// Runs one scenario and writes its artifacts into out_dir.  Exceptions are
// mapped to exit codes; nothing is written for a failed run.
RunResult run(const Scenario& scenario, const RunOptions& options = {});

// Exit code for an exception thrown by the library (1 or 2).
int exit_code_for(const std::exception& e);

// ---- record types and their CSV forms --------------------------------

// orbit.csv: step,x,y,z
struct OrbitRow {
    std::size_t step = 0;
    State3 state;
    bool operator==(const OrbitRow&) const;
};
Table orbit_table(const std::vector<OrbitRow>& rows);
std::vector<OrbitRow> orbit_rows(const Table& t);

// sweep.csv: value,sample,x,y,z,period,kind
//   period is 0 unless kind is "periodic"; failed points carry kind "error"
//   and NaN coordinates.
struct SweepRow {
    double value = 0.0;
    std::size_t sample = 0;
    State3 state;
    int period = 0;
    std::string kind;
    bool operator==(const SweepRow&) const;
};
std::vector<SweepRow> sweep_rows(const std::vector<SweepRecord>& records);
Table sweep_table(const std::vector<SweepRow>& rows);
std::vector<SweepRow> sweep_rows(const Table& t);

// curve.csv: point,N,beta,r,alpha,x,y,z,m1_re,m1_im,m2_re,m2_im,m3_re,m3_im,<test columns>
Table curve_table(const ContinuationCurve& c);
std::vector<CurvePoint> curve_points(const Table& t, std::size_t n_tests);

// events.csv: kind,N,beta,r,alpha,x,y,z,residual,tx,ty,tz,tlambda,note
Table events_table(const std::vector<ContinuationEvent>& events);
std::vector<ContinuationEvent> curve_events(const Table& t);

// tongue_grid.csv: r,alpha,varpi1,varpi2,t_minus,t_plus,inside
struct TongueRow {
    double r = 0.0;
    double alpha = 0.0;
    TongueBoundary boundary;
    bool operator==(const TongueRow&) const;
};
Table tongue_table(const std::vector<TongueRow>& rows);
std::vector<TongueRow> tongue_rows(const Table& t);

// Column documentation used by --help.
std::string csv_columns_help(const std::string& command);

}  // namespace sirbif
