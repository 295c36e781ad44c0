#include "sirbif/scenario.hpp"

#include "sirbif/classifier.hpp"
#include "sirbif/errors.hpp"
#include "sirbif/normal_forms.hpp"
#include "sirbif/verification.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

namespace sirbif {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }
bool same(const State3& a, const State3& b) { return same(a.x, b.x) && same(a.y, b.y) && same(a.z, b.z); }

struct CommandInfo {
    std::string name;
    std::set<std::string> settings;
    bool needs_r_alpha = true;
    bool allows_extended_r = true;
};

const std::vector<CommandInfo>& commands()
{
    static const std::vector<CommandInfo> table = {
        {"classify", {}, true, false},
        {"fixed-points", {}, true, true},
        {"simulate", {"seed", "transient", "keep", "max_period"}, true, true},
        {"sweep", {"param", "lo", "hi", "steps", "transient", "keep", "seed_policy", "seed", "max_period"}, true, true},
        {"continue", {"param", "lo", "hi", "start", "switch_branch", "step"}, true, true},
        {"ns-curve", {"r_lo", "r_hi", "points_per_unit", "diagnostics"}, false, true},
        {"tongue", {"n", "m", "r_range", "alpha_range", "grid", "sigma_abs"}, false, true},
        {"verify", {"seed", "only"}, false, true},
    };
    return table;
}

const CommandInfo& command_info(const std::string& name)
{
    for (const auto& c : commands())
        if (c.name == name) return c;
    throw InvalidInput("unknown command '" + name + "'");
}

double finite_number(const json& j, const std::string& what)
{
    if (!j.is_number()) throw InvalidInput(what + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InvalidInput(what + " must be finite");
    return v;
}

long long integer(const json& j, const std::string& what, long long lo, long long hi)
{
    if (!j.is_number_integer() && !j.is_number_unsigned()) throw InvalidInput(what + " must be an integer");
    const auto v = j.get<long long>();
    if (v < lo || v > hi)
        throw InvalidInput(what + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
}

State3 state_of(const json& j, const std::string& what)
{
    if (!j.is_array() || j.size() != 3) throw InvalidInput(what + " must be an array [x, y, z]");
    return {finite_number(j[0], what + "[0]"), finite_number(j[1], what + "[1]"), finite_number(j[2], what + "[2]")};
}

std::pair<double, double> range_of(const json& j, const std::string& what)
{
    if (!j.is_array() || j.size() != 2) throw InvalidInput(what + " must be an array [lo, hi]");
    const double lo = finite_number(j[0], what + "[0]");
    const double hi = finite_number(j[1], what + "[1]");
    if (!(lo < hi)) throw InvalidInput(what + " needs lo < hi");
    return {lo, hi};
}

Params parse_params(const json& j, const CommandInfo& info)
{
    if (!j.is_object()) throw InvalidInput("params must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "N" && it.key() != "beta" && it.key() != "r" && it.key() != "alpha")
            throw InvalidInput("unknown key params." + it.key());
    }
    Params p;
    const auto get = [&](const char* key, bool required) {
        if (!j.contains(key)) {
            if (required) throw InvalidInput(std::string("params.") + key + " is required");
            return kNaN;
        }
        return finite_number(j.at(key), std::string("params.") + key);
    };
    p.N = get("N", true);
    p.beta = get("beta", true);
    p.r = get("r", info.needs_r_alpha);
    p.alpha = get("alpha", info.needs_r_alpha);
    if (!(p.N > 0.0)) throw InvalidInput("params.N must be positive");
    if (!(p.beta > 0.0 && p.beta < 1.0)) throw InvalidInput("params.beta must lie in (0, 1)");
    if (!std::isnan(p.r)) {
        if (!(p.r > 0.0)) throw InvalidInput("params.r must be positive");
        if (!info.allows_extended_r && !(p.r < 1.0)) throw InvalidInput("params.r must lie in (0, 1) for " + info.name);
    }
    if (!std::isnan(p.alpha) && !(p.alpha > 0.0)) throw InvalidInput("params.alpha must be positive");
    return p;
}

void validate_settings(const json& s, const CommandInfo& info)
{
    if (!s.is_object()) throw InvalidInput("settings must be an object");
    for (auto it = s.begin(); it != s.end(); ++it)
        if (!info.settings.count(it.key())) throw InvalidInput("unknown setting '" + it.key() + "' for " + info.name);
}

json params_json(const Params& p)
{
    json j = json::object();
    j["N"] = p.N;
    j["beta"] = p.beta;
    if (!std::isnan(p.r)) j["r"] = p.r;
    if (!std::isnan(p.alpha)) j["alpha"] = p.alpha;
    return j;
}

json cplx_json(cplx c) { return json{{"re", c.real()}, {"im", c.imag()}}; }
json state_json(const State3& s) { return json::array({s.x, s.y, s.z}); }

json report_json(const NormalFormReport& rep)
{
    json j;
    j["kind"] = to_string(rep.kind);
    j["criticality"] = to_string(rep.criticality);
    j["coefficients"] = json::array();
    for (const auto& [name, v] : rep.coefficients)
        j["coefficients"].push_back(json{{"name", name}, {"re", v.real()}, {"im", v.imag()}});
    j["checks"] = json::array();
    for (const auto& c : rep.checks) j["checks"].push_back(json{{"name", c.name}, {"value", c.value}, {"pass", c.pass}});
    j["notes"] = rep.notes;
    j["nondegenerate"] = rep.nondegenerate();
    return j;
}

// Artifacts are staged in memory and written together once the command
// has succeeded.
struct Staging {
    std::vector<std::pair<std::string, std::string>> files;
    void add(std::string name, std::string contents) { files.emplace_back(std::move(name), std::move(contents)); }
};

class Summary {
public:
    explicit Summary(std::ostream* os) : os_(os) {}
    void title(const std::string& t) {
        if (os_) *os_ << t << '\n' << std::string(t.size(), '-') << '\n';
    }
    void row(const std::string& key, const std::string& value) {
        if (os_) *os_ << "  " << std::left << std::setw(28) << key << value << '\n';
    }
    void row(const std::string& key, double value) { row(key, format_number(value)); }
    void line(const std::string& text) {
        if (os_) *os_ << text << '\n';
    }

private:
    std::ostream* os_;
};

IterateOptions iterate_options(const Tolerances& tol, int max_period)
{
    IterateOptions o;
    o.recurrence_tolerance = tol.recurrence;
    o.contraction_tolerance = tol.contraction;
    o.divergence_factor = tol.divergence;
    o.max_period = max_period;
    return o;
}

State3 default_seed(const Params& p)
{
    if (p.alpha > p.beta + p.r) {
        const State3 e2 = endemic_point(p);
        return {e2.x + 1e-3 * p.N, e2.y - 1e-3 * p.N, e2.z};
    }
    return {p.N * (1.0 - 1e-3), 1e-3 * p.N, 0.0};
}

// ---- commands -------------------------------------------------------

void cmd_classify(const Params& p, Staging& out, Summary& sum)
{
    json j;
    j["E1"] = label_string(classify_E1(p));
    j["E2"] = p.alpha > p.beta + p.r ? label_string(classify_E2(p)) : "nonexistent";
    out.add("classify.json", dump_json(j));
    sum.title("classify");
    sum.row("E1", j["E1"].get<std::string>());
    sum.row("E2", j["E2"].get<std::string>());
}

void cmd_fixed_points(const Scenario& sc, const Params& p, Staging& out, Summary& sum)
{
    json list = json::array();
    sum.title("fixed points");
    for (const auto& rec : fixed_points(p)) {
        json e;
        e["which"] = to_string(rec.which);
        e["point"] = state_json(rec.point);
        e["multipliers"] = json::array({cplx_json(rec.multipliers.mu_real), cplx_json(rec.multipliers.t1),
                                        cplx_json(rec.multipliers.t2)});
        if (rec.multipliers.delta) e["discriminant"] = *rec.multipliers.delta;
        e["label"] = rec.topo_type ? json(label_string(*rec.topo_type)) : json(nullptr);
        e["coincident"] = rec.coincident;
        list.push_back(e);
        sum.row(to_string(rec.which), "(" + format_number(rec.point.x) + ", " + format_number(rec.point.y) + ", " +
                                          format_number(rec.point.z) + ")  " +
                                          (rec.topo_type ? label_string(*rec.topo_type) : std::string("unlabelled")));
    }
    out.add("fixed_points.json", dump_json(json{{"scenario", scenario_to_json(sc)}, {"fixed_points", list}}));
}

void cmd_simulate(const Scenario& sc, const Params& p, const Tolerances& tol, Staging& out, Summary& sum)
{
    const json& s = sc.settings;
    const State3 seed = s.contains("seed") ? state_of(s["seed"], "settings.seed") : default_seed(p);
    const auto transient = static_cast<std::size_t>(s.contains("transient") ? integer(s["transient"], "settings.transient", 0, 1'000'000'000) : 10000);
    const auto keep = static_cast<std::size_t>(s.contains("keep") ? integer(s["keep"], "settings.keep", 1, 10'000'000) : 1000);
    const int max_period = static_cast<int>(s.contains("max_period") ? integer(s["max_period"], "settings.max_period", 1, 4096) : 64);

    const OrbitSummary orbit = iterate(p, seed, transient, keep, iterate_options(tol, max_period));

    std::vector<OrbitRow> rows;
    rows.reserve(orbit.samples.size());
    // A diverged orbit stops recording one step before the escape.
    const std::size_t last = orbit.diverged ? orbit.diverged_at - 1 : transient + keep;
    const std::size_t first = last + 1 - orbit.samples.size();
    for (std::size_t i = 0; i < orbit.samples.size(); ++i) rows.push_back({first + i, orbit.samples[i]});
    out.add("orbit.csv", to_csv(orbit_table(rows)));

    json j;
    j["scenario"] = scenario_to_json(sc);
    j["seed"] = state_json(seed);
    j["period_kind"] = to_string(orbit.period.kind);
    j["period"] = orbit.period.period;
    j["recurrence_residual"] = orbit.period.residual;
    j["diverged"] = orbit.diverged;
    if (orbit.diverged) j["diverged_at"] = orbit.diverged_at;
    j["max_norm"] = orbit.max_norm;
    j["contraction_error"] = orbit.contraction_error;
    j["final_state"] = state_json(orbit.final_state);
    if (orbit.rotation) {
        j["rotation_number"] = orbit.rotation->value;
        if (orbit.rotation->lock)
            j["rotation_lock"] = json::array({orbit.rotation->lock->first, orbit.rotation->lock->second});
    }
    out.add("simulate.json", dump_json(j));

    sum.title("simulate");
    sum.row("attractor", to_string(orbit.period.kind) +
                             (orbit.period.kind == PeriodKind::Periodic ? " (period " + std::to_string(orbit.period.period) + ")" : ""));
    if (orbit.rotation) sum.row("rotation number", orbit.rotation->value);
    sum.row("contraction error", orbit.contraction_error);
    sum.row("samples written", std::to_string(rows.size()));
}

void cmd_sweep(const Scenario& sc, const Params& p, const Tolerances& tol, int threads, Staging& out, Summary& sum)
{
    const json& s = sc.settings;
    for (const char* key : {"lo", "hi", "steps"})
        if (!s.contains(key)) throw InvalidInput(std::string("settings.") + key + " is required for sweep");
    const SweepParam which = parse_sweep_param(s.value("param", std::string("alpha")));
    const double lo = finite_number(s["lo"], "settings.lo");
    const double hi = finite_number(s["hi"], "settings.hi");
    if (!(lo < hi)) throw InvalidInput("settings.lo must be below settings.hi");
    const int steps = static_cast<int>(integer(s["steps"], "settings.steps", 1, 1'000'000));

    SweepOptions o;
    if (s.contains("transient")) o.n_transient = static_cast<std::size_t>(integer(s["transient"], "settings.transient", 0, 1'000'000'000));
    if (s.contains("keep")) o.n_keep = static_cast<std::size_t>(integer(s["keep"], "settings.keep", 1, 1'000'000));
    if (s.contains("seed")) o.seed = state_of(s["seed"], "settings.seed");
    const std::string policy = s.value("seed_policy", std::string("inherit"));
    if (policy == "inherit") o.seed_policy = SeedPolicy::Inherit;
    else if (policy == "fixed") o.seed_policy = SeedPolicy::Fixed;
    else throw InvalidInput("settings.seed_policy must be 'inherit' or 'fixed'");
    o.threads = threads;
    o.iterate = iterate_options(tol, static_cast<int>(s.contains("max_period") ? integer(s["max_period"], "settings.max_period", 1, 4096) : 64));

    const auto records = sweep_bifurcation(p, which, lo, hi, steps, o);
    const auto rows = sweep_rows(records);
    out.add("sweep.csv", to_csv(sweep_table(rows)));

    std::map<int, int> periods;
    int failed = 0;
    for (const auto& rec : records) {
        if (!rec.orbit) ++failed;
        else if (rec.orbit->period.kind == PeriodKind::Periodic) ++periods[rec.orbit->period.period];
    }
    sum.title("sweep over " + to_string(which));
    sum.row("points", std::to_string(records.size()));
    for (const auto& [period, count] : periods) sum.row("period " + std::to_string(period), std::to_string(count) + " points");
    if (failed) sum.row("failed points", std::to_string(failed));
    sum.row("rows written", std::to_string(rows.size()));
}

void write_curve(const std::string& stem, const ContinuationCurve& c, Staging& out)
{
    out.add(stem + ".csv", to_csv(curve_table(c)));
    out.add(stem + "_events.csv", to_csv(events_table(c.events)));
}

json curve_meta(const ContinuationCurve& c)
{
    json j;
    j["param"] = to_string(c.active);
    j["points"] = c.points.size();
    j["events"] = c.events.size();
    j["truncated"] = c.truncated;
    j["diagnostics"] = c.diagnostics;
    return j;
}

void cmd_continue(const Scenario& sc, const Params& p, const Tolerances& tol, Staging& out, Summary& sum)
{
    const json& s = sc.settings;
    for (const char* key : {"lo", "hi"})
        if (!s.contains(key)) throw InvalidInput(std::string("settings.") + key + " is required for continue");
    const SweepParam which = parse_sweep_param(s.value("param", std::string("alpha")));
    const double lo = finite_number(s["lo"], "settings.lo");
    const double hi = finite_number(s["hi"], "settings.hi");
    if (!(lo < hi)) throw InvalidInput("settings.lo must be below settings.hi");

    State3 start{p.N, 0.0, 0.0};
    if (s.contains("start")) {
        const json& st = s["start"];
        if (st.is_string()) {
            const auto name = st.get<std::string>();
            if (name == "E2") start = endemic_point(p);
            else if (name != "E1") throw InvalidInput("settings.start must be 'E1', 'E2' or [x, y, z]");
        } else {
            start = state_of(st, "settings.start");
        }
    }
    StepControl ctl;
    ctl.newton_tolerance = tol.newton;
    ctl.event_tolerance = tol.event;
    if (s.contains("step")) {
        const json& st = s["step"];
        if (!st.is_object()) throw InvalidInput("settings.step must be an object");
        for (auto it = st.begin(); it != st.end(); ++it) {
            const auto& k = it.key();
            if (k == "initial") ctl.initial = finite_number(*it, "settings.step.initial");
            else if (k == "min") ctl.min = finite_number(*it, "settings.step.min");
            else if (k == "max") ctl.max = finite_number(*it, "settings.step.max");
            else if (k == "max_points") ctl.max_points = static_cast<int>(integer(*it, "settings.step.max_points", 2, 10'000'000));
            else throw InvalidInput("unknown setting settings.step." + k);
        }
        if (!(ctl.min > 0.0 && ctl.min <= ctl.initial && ctl.initial <= ctl.max))
            throw InvalidInput("settings.step needs 0 < min <= initial <= max");
    }
    const bool do_switch = s.value("switch_branch", true);

    const ContinuationCurve curve = continue_fixed_points(p, which, start, lo, hi, ctl);
    write_curve("curve", curve, out);

    json j;
    j["scenario"] = scenario_to_json(sc);
    j["curve"] = curve_meta(curve);

    sum.title("continuation in " + to_string(which));
    sum.row("points", std::to_string(curve.points.size()));
    for (const auto& ev : curve.events) sum.row(to_string(ev.kind), "at " + to_string(which) + " = " + format_number(
        which == SweepParam::Alpha ? ev.params.alpha : which == SweepParam::R ? ev.params.r
        : which == SweepParam::Beta ? ev.params.beta : ev.params.N));

    if (do_switch) {
        const auto bp = std::find_if(curve.events.begin(), curve.events.end(),
                                     [](const ContinuationEvent& e) { return e.kind == EventKind::BP; });
        if (bp != curve.events.end()) {
            const ContinuationCurve branch = switch_branch(*bp, which, lo, hi, ctl);
            write_curve("branch", branch, out);
            j["branch"] = curve_meta(branch);
            sum.row("switched branch", std::to_string(branch.points.size()) + " points, " +
                                           std::to_string(branch.events.size()) + " events");
        }
    }
    out.add("continue.json", dump_json(j));
}

void cmd_ns_curve(const Scenario& sc, const Params& p, const Tolerances& tol, Staging& out, Summary& sum)
{
    const json& s = sc.settings;
    for (const char* key : {"r_lo", "r_hi"})
        if (!s.contains(key)) throw InvalidInput(std::string("settings.") + key + " is required for ns-curve");
    const double r_lo = finite_number(s["r_lo"], "settings.r_lo");
    const double r_hi = finite_number(s["r_hi"], "settings.r_hi");
    if (!(r_lo > 0.0 && r_lo < r_hi)) throw InvalidInput("ns-curve needs 0 < r_lo < r_hi");
    NsCurveOptions o;
    o.agreement = tol.ns_agreement;
    if (s.contains("points_per_unit"))
        o.points_per_unit = static_cast<int>(integer(s["points_per_unit"], "settings.points_per_unit", 10, 10'000'000));
    const bool diagnostics = s.value("diagnostics", true);

    const ContinuationCurve curve = continue_ns_curve(p.N, p.beta, r_lo, r_hi, o);
    out.add("ns_curve.csv", to_csv(curve_table(curve)));

    json j;
    j["scenario"] = scenario_to_json(sc);
    j["points"] = curve.points.size();
    j["truncated"] = curve.truncated;
    j["max_locus_disagreement"] = curve.max_locus_disagreement;
    j["diagnostics"] = curve.diagnostics;
    j["events"] = json::array();
    sum.title("Neimark-Sacker curve");
    sum.row("points", std::to_string(curve.points.size()));
    sum.row("max locus disagreement", curve.max_locus_disagreement);
    for (const auto& ev : curve.events) {
        json e;
        e["kind"] = to_string(ev.kind);
        e["r"] = ev.params.r;
        e["alpha"] = ev.params.alpha;
        e["state"] = state_json(ev.state);
        e["residual"] = ev.residual;
        e["note"] = ev.note;
        std::string verdict;
        if (diagnostics && (ev.kind == EventKind::R3 || ev.kind == EventKind::R4 || ev.kind == EventKind::CH)) {
            try {
                const NormalFormReport rep = codim2_diagnostics(ev, p.N);
                e["normal_form"] = report_json(rep);
                verdict = rep.nondegenerate() ? "  checks pass" : "  checks FAIL";
            } catch (const std::exception& ex) {
                e["normal_form_error"] = ex.what();
                verdict = "  diagnostics failed";
            }
        }
        j["events"].push_back(e);
        sum.row(to_string(ev.kind), "r = " + format_number(ev.params.r) + ", alpha = " + format_number(ev.params.alpha) + verdict);
    }
    out.add("ns_curve.json", dump_json(j));
}

void cmd_tongue(const Scenario& sc, const Params& p, Staging& out, Summary& sum)
{
    const json& s = sc.settings;
    for (const char* key : {"n", "m"})
        if (!s.contains(key)) throw InvalidInput(std::string("settings.") + key + " is required for tongue");
    const int n = static_cast<int>(integer(s["n"], "settings.n", 1, 1000));
    const int m = static_cast<int>(integer(s["m"], "settings.m", 1, 1000));
    std::optional<double> sigma;
    if (s.contains("sigma_abs")) sigma = finite_number(s["sigma_abs"], "settings.sigma_abs");

    const TongueSpec spec = arnold_tongue(p.N, p.beta, n, m, sigma);

    auto r_range = std::make_pair(spec.r_star * 0.98, spec.r_star * 1.02);
    auto a_range = std::make_pair(spec.alpha_star * 0.98, spec.alpha_star * 1.02);
    if (s.contains("r_range")) r_range = range_of(s["r_range"], "settings.r_range");
    if (s.contains("alpha_range")) a_range = range_of(s["alpha_range"], "settings.alpha_range");
    int nr = 41, na = 41;
    if (s.contains("grid")) {
        const json& g = s["grid"];
        if (!g.is_array() || g.size() != 2) throw InvalidInput("settings.grid must be [n_r, n_alpha]");
        nr = static_cast<int>(integer(g[0], "settings.grid[0]", 2, 100000));
        na = static_cast<int>(integer(g[1], "settings.grid[1]", 2, 100000));
    }

    std::vector<TongueRow> rows;
    rows.reserve(static_cast<std::size_t>(nr) * static_cast<std::size_t>(na));
    int inside = 0;
    for (int i = 0; i < nr; ++i) {
        const double r = r_range.first + (r_range.second - r_range.first) * i / (nr - 1);
        for (int k = 0; k < na; ++k) {
            const double a = a_range.first + (a_range.second - a_range.first) * k / (na - 1);
            TongueRow row{r, a, spec.boundary(r, a)};
            inside += row.boundary.inside;
            rows.push_back(row);
        }
    }
    out.add("tongue_grid.csv", to_csv(tongue_table(rows)));

    json j;
    j["scenario"] = scenario_to_json(sc);
    j["n"] = spec.n;
    j["m"] = spec.m;
    j["r_star"] = spec.r_star;
    j["alpha_star"] = spec.alpha_star;
    j["rho3_0"] = spec.rho3_0;
    j["rho2tilde_0"] = spec.rho2tilde_0;
    j["sigma_abs"] = spec.sigma_abs;
    j["sigma_from_oracle"] = spec.sigma_from_oracle;
    j["grid"] = json{{"r_range", json::array({r_range.first, r_range.second})},
                     {"alpha_range", json::array({a_range.first, a_range.second})},
                     {"shape", json::array({nr, na})},
                     {"inside", inside}};
    out.add("tongue.json", dump_json(j));

    sum.title("Arnold tongue " + std::to_string(n) + ":" + std::to_string(m));
    sum.row("apex r", spec.r_star);
    sum.row("apex alpha", spec.alpha_star);
    sum.row("|sigma|", spec.sigma_abs);
    sum.row("grid points inside", std::to_string(inside) + " of " + std::to_string(rows.size()));
}

int cmd_verify(const Scenario& sc, Staging& out, Summary& sum)
{
    SuiteOptions o;
    const json& s = sc.settings;
    if (s.contains("seed")) o.seed = static_cast<std::uint64_t>(integer(s["seed"], "settings.seed", 0, std::numeric_limits<long long>::max()));
    if (s.contains("only")) {
        if (!s["only"].is_array()) throw InvalidInput("settings.only must be an array of check numbers");
        for (const auto& v : s["only"]) o.only.push_back(static_cast<int>(integer(v, "settings.only[]", 1, 13)));
    }
    const auto checks = run_acceptance_suite(o);
    json list = json::array();
    int failed = 0;
    sum.title("acceptance suite");
    for (const auto& c : checks) {
        failed += !c.pass;
        list.push_back(json{{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}, {"seconds", c.seconds}});
        sum.line(format_check_line(c));
    }
    sum.line(std::to_string(checks.size() - static_cast<std::size_t>(failed)) + " of " + std::to_string(checks.size()) + " checks passed");
    out.add("verify.json", dump_json(json{{"scenario", scenario_to_json(sc)},
                                          {"seed", o.seed},
                                          {"passed", checks.size() - static_cast<std::size_t>(failed)},
                                          {"failed", failed},
                                          {"checks", list}}));
    return failed ? 3 : 0;
}

}  // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& c : commands()) v.push_back(c.name);
        return v;
    }();
    return names;
}

Scenario parse_scenario(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InvalidInput("scenario must be a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.key() != "schema_version" && it.key() != "command" && it.key() != "params" && it.key() != "settings")
            throw InvalidInput("unknown top-level key '" + it.key() + "'");
    }
    if (!doc.contains("schema_version")) throw InvalidInput("schema_version is required");
    Scenario sc;
    sc.schema_version = static_cast<int>(integer(doc["schema_version"], "schema_version", 0, 1'000'000));
    if (sc.schema_version != kSchemaVersion)
        throw InvalidInput("unsupported schema_version " + std::to_string(sc.schema_version) + " (expected " +
                           std::to_string(kSchemaVersion) + ")");
    if (!doc.contains("command") || !doc["command"].is_string()) throw InvalidInput("command must be a string");
    sc.command = doc["command"].get<std::string>();
    const CommandInfo& info = command_info(sc.command);
    if (doc.contains("params")) sc.params = parse_params(doc["params"], info);
    else if (sc.command != "verify") throw InvalidInput("params is required for " + sc.command);
    if (doc.contains("settings")) sc.settings = doc["settings"];
    validate_settings(sc.settings, info);
    return sc;
}

json scenario_to_json(const Scenario& s)
{
    json j;
    j["schema_version"] = s.schema_version;
    j["command"] = s.command;
    if (s.params) j["params"] = params_json(*s.params);
    j["settings"] = s.settings;
    return j;
}

Tolerances parse_tolerance_overrides(const std::string& text, const Tolerances& base)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("tolerance overrides are not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InvalidInput("tolerance overrides must be a JSON object");
    Tolerances t = base;
    const std::map<std::string, double*> slots = {
        {"recurrence", &t.recurrence}, {"contraction", &t.contraction}, {"divergence", &t.divergence},
        {"newton", &t.newton},         {"event", &t.event},             {"ns_agreement", &t.ns_agreement},
    };
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const auto slot = slots.find(it.key());
        if (slot == slots.end()) throw InvalidInput("unknown tolerance '" + it.key() + "'");
        const double v = finite_number(*it, "tolerance " + it.key());
        if (!(v > 0.0)) throw InvalidInput("tolerance " + it.key() + " must be positive");
        *slot->second = v;
    }
    return t;
}

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const InvalidInput*>(&e) || dynamic_cast<const DomainError*>(&e) ||
        dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const json::exception*>(&e))
        return 1;
    return 2;
}

RunResult run(const Scenario& sc, const RunOptions& options)
{
    RunResult result;
    try {
        const CommandInfo& info = command_info(sc.command);
        validate_settings(sc.settings, info);
        if (options.threads < 1) throw InvalidInput("--threads must be at least 1");
        if (sc.command == "verify" && options.tolerance_overrides)
            throw InvalidInput("verify runs at fixed acceptance tolerances; --tolerance-overrides is not accepted");
        if (sc.command != "verify" && !sc.params) throw InvalidInput("params is required for " + sc.command);

        const Tolerances tol = options.tolerance_overrides.value_or(Tolerances{});
        Staging staged;
        Summary sum(options.summary);
        int code = 0;
        const std::string& c = sc.command;
        if (c == "classify") cmd_classify(*sc.params, staged, sum);
        else if (c == "fixed-points") cmd_fixed_points(sc, *sc.params, staged, sum);
        else if (c == "simulate") cmd_simulate(sc, *sc.params, tol, staged, sum);
        else if (c == "sweep") cmd_sweep(sc, *sc.params, tol, options.threads, staged, sum);
        else if (c == "continue") cmd_continue(sc, *sc.params, tol, staged, sum);
        else if (c == "ns-curve") cmd_ns_curve(sc, *sc.params, tol, staged, sum);
        else if (c == "tongue") cmd_tongue(sc, *sc.params, staged, sum);
        else code = cmd_verify(sc, staged, sum);

        std::filesystem::create_directories(options.out_dir);
        for (const auto& [name, contents] : staged.files) {
            const auto path = options.out_dir / name;
            write_atomic(path, contents);
            result.files.push_back(path);
        }
        result.exit_code = code;
        if (code == 3) result.message = "verification suite reported failures";
    } catch (const std::exception& e) {
        result.exit_code = exit_code_for(e);
        result.message = e.what();
        result.files.clear();
    }
    return result;
}

// ---- tables ----------------------------------------------------------

namespace {

std::size_t parse_index(const std::string& text)
{
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &used);
    } catch (const std::exception&) {
        throw InvalidInput("not an index: '" + text + "'");
    }
    if (used != text.size() || text.empty() || text[0] == '-') throw InvalidInput("not an index: '" + text + "'");
    return static_cast<std::size_t>(v);
}

int parse_int(const std::string& text)
{
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(text, &used);
    } catch (const std::exception&) {
        throw InvalidInput("not an integer: '" + text + "'");
    }
    if (used != text.size()) throw InvalidInput("not an integer: '" + text + "'");
    return v;
}

void expect_header(const Table& t, const std::vector<std::string>& header)
{
    if (t.header != header) throw InvalidInput("unexpected CSV header");
}

EventKind parse_event_kind(const std::string& s)
{
    for (EventKind k : {EventKind::BP, EventKind::PD, EventKind::NS, EventKind::R2, EventKind::R3, EventKind::R4, EventKind::CH})
        if (to_string(k) == s) return k;
    throw InvalidInput("unknown event kind '" + s + "'");
}

const std::vector<std::string> kOrbitHeader = {"step", "x", "y", "z"};
const std::vector<std::string> kSweepHeader = {"value", "sample", "x", "y", "z", "period", "kind"};
const std::vector<std::string> kCurveHeader = {"point", "N", "beta", "r", "alpha", "x", "y", "z",
                                               "m1_re", "m1_im", "m2_re", "m2_im", "m3_re", "m3_im"};
const std::vector<std::string> kEventHeader = {"kind", "N", "beta", "r", "alpha", "x", "y", "z", "residual",
                                               "tx", "ty", "tz", "tlambda", "note"};
const std::vector<std::string> kTongueHeader = {"r", "alpha", "varpi1", "varpi2", "t_minus", "t_plus", "inside"};

}  // namespace

bool OrbitRow::operator==(const OrbitRow& o) const { return step == o.step && same(state, o.state); }

Table orbit_table(const std::vector<OrbitRow>& rows)
{
    Table t{kOrbitHeader, {}};
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.step), format_number(r.state.x), format_number(r.state.y), format_number(r.state.z)});
    return t;
}

std::vector<OrbitRow> orbit_rows(const Table& t)
{
    expect_header(t, kOrbitHeader);
    std::vector<OrbitRow> out;
    for (const auto& c : t.rows)
        out.push_back({parse_index(c[0]), {parse_number(c[1]), parse_number(c[2]), parse_number(c[3])}});
    return out;
}

bool SweepRow::operator==(const SweepRow& o) const
{
    return same(value, o.value) && sample == o.sample && same(state, o.state) && period == o.period && kind == o.kind;
}

std::vector<SweepRow> sweep_rows(const std::vector<SweepRecord>& records)
{
    std::vector<SweepRow> rows;
    for (const auto& rec : records) {
        if (!rec.orbit) {
            rows.push_back({rec.value, 0, {kNaN, kNaN, kNaN}, 0, "error"});
            continue;
        }
        const auto& o = *rec.orbit;
        const bool periodic = o.period.kind == PeriodKind::Periodic;
        const std::string kind = to_string(o.period.kind);
        if (o.diverged || o.samples.empty()) {
            rows.push_back({rec.value, 0, o.final_state, 0, kind});
            continue;
        }
        // A periodic orbit contributes one row per distinct point.
        const std::size_t count = periodic ? std::min<std::size_t>(static_cast<std::size_t>(o.period.period), o.samples.size())
                                           : o.samples.size();
        const std::size_t first = o.samples.size() - count;
        for (std::size_t i = 0; i < count; ++i)
            rows.push_back({rec.value, i, o.samples[first + i], periodic ? o.period.period : 0, kind});
    }
    return rows;
}

Table sweep_table(const std::vector<SweepRow>& rows)
{
    Table t{kSweepHeader, {}};
    for (const auto& r : rows)
        t.rows.push_back({format_number(r.value), std::to_string(r.sample), format_number(r.state.x),
                          format_number(r.state.y), format_number(r.state.z), std::to_string(r.period), r.kind});
    return t;
}

std::vector<SweepRow> sweep_rows(const Table& t)
{
    expect_header(t, kSweepHeader);
    std::vector<SweepRow> out;
    for (const auto& c : t.rows)
        out.push_back({parse_number(c[0]), parse_index(c[1]),
                       {parse_number(c[2]), parse_number(c[3]), parse_number(c[4])}, parse_int(c[5]), c[6]});
    return out;
}

Table curve_table(const ContinuationCurve& c)
{
    Table t{kCurveHeader, {}};
    for (const auto& name : c.test_names) t.header.push_back(name);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        const auto& pt = c.points[i];
        std::vector<std::string> row = {std::to_string(i),
                                        format_number(pt.params.N), format_number(pt.params.beta),
                                        format_number(pt.params.r), format_number(pt.params.alpha),
                                        format_number(pt.state.x), format_number(pt.state.y), format_number(pt.state.z)};
        for (const auto& m : pt.multipliers) {
            row.push_back(format_number(m.real()));
            row.push_back(format_number(m.imag()));
        }
        for (std::size_t k = 0; k < c.test_names.size(); ++k)
            row.push_back(k < pt.test_values.size() ? format_number(pt.test_values[k]) : "nan");
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<CurvePoint> curve_points(const Table& t, std::size_t n_tests)
{
    if (t.header.size() != kCurveHeader.size() + n_tests ||
        !std::equal(kCurveHeader.begin(), kCurveHeader.end(), t.header.begin()))
        throw InvalidInput("unexpected curve CSV header");
    std::vector<CurvePoint> out;
    for (const auto& c : t.rows) {
        CurvePoint pt;
        pt.params = {parse_number(c[1]), parse_number(c[2]), parse_number(c[3]), parse_number(c[4])};
        pt.state = {parse_number(c[5]), parse_number(c[6]), parse_number(c[7])};
        for (std::size_t k = 0; k < 3; ++k) pt.multipliers[k] = {parse_number(c[8 + 2 * k]), parse_number(c[9 + 2 * k])};
        for (std::size_t k = 0; k < n_tests; ++k) pt.test_values.push_back(parse_number(c[kCurveHeader.size() + k]));
        out.push_back(std::move(pt));
    }
    return out;
}

Table events_table(const std::vector<ContinuationEvent>& events)
{
    Table t{kEventHeader, {}};
    for (const auto& e : events) {
        t.rows.push_back({to_string(e.kind), format_number(e.params.N), format_number(e.params.beta),
                          format_number(e.params.r), format_number(e.params.alpha), format_number(e.state.x),
                          format_number(e.state.y), format_number(e.state.z), format_number(e.residual),
                          format_number(e.tangent[0]), format_number(e.tangent[1]), format_number(e.tangent[2]),
                          format_number(e.tangent[3]), e.note});
    }
    return t;
}

std::vector<ContinuationEvent> curve_events(const Table& t)
{
    expect_header(t, kEventHeader);
    std::vector<ContinuationEvent> out;
    for (const auto& c : t.rows) {
        ContinuationEvent e;
        e.kind = parse_event_kind(c[0]);
        e.params = {parse_number(c[1]), parse_number(c[2]), parse_number(c[3]), parse_number(c[4])};
        e.state = {parse_number(c[5]), parse_number(c[6]), parse_number(c[7])};
        e.residual = parse_number(c[8]);
        for (std::size_t k = 0; k < 4; ++k) e.tangent[k] = parse_number(c[9 + k]);
        e.note = c[13];
        out.push_back(std::move(e));
    }
    return out;
}

bool TongueRow::operator==(const TongueRow& o) const
{
    return same(r, o.r) && same(alpha, o.alpha) && same(boundary.varpi1, o.boundary.varpi1) &&
           same(boundary.varpi2, o.boundary.varpi2) && same(boundary.t_minus, o.boundary.t_minus) &&
           same(boundary.t_plus, o.boundary.t_plus) && boundary.inside == o.boundary.inside;
}

Table tongue_table(const std::vector<TongueRow>& rows)
{
    Table t{kTongueHeader, {}};
    for (const auto& r : rows)
        t.rows.push_back({format_number(r.r), format_number(r.alpha), format_number(r.boundary.varpi1),
                          format_number(r.boundary.varpi2), format_number(r.boundary.t_minus),
                          format_number(r.boundary.t_plus), r.boundary.inside ? "1" : "0"});
    return t;
}

std::vector<TongueRow> tongue_rows(const Table& t)
{
    expect_header(t, kTongueHeader);
    std::vector<TongueRow> out;
    for (const auto& c : t.rows) {
        if (c[6] != "0" && c[6] != "1") throw InvalidInput("inside must be 0 or 1");
        TongueRow row{parse_number(c[0]), parse_number(c[1]), {}};
        row.boundary = {parse_number(c[2]), parse_number(c[3]), parse_number(c[4]), parse_number(c[5]), c[6] == "1"};
        out.push_back(row);
    }
    return out;
}

std::string csv_columns_help(const std::string& command)
{
    if (command == "classify") return "classify.json: {\"E1\": label, \"E2\": label or \"nonexistent\"}";
    if (command == "fixed-points") return "fixed_points.json: point, multipliers (1-beta, t1, t2), discriminant, label";
    if (command == "simulate")
        return "orbit.csv columns: step,x,y,z (the kept tail of the orbit)\n"
               "simulate.json: period verdict, rotation number, contraction error";
    if (command == "sweep")
        return "sweep.csv columns: value,sample,x,y,z,period,kind\n"
               "  one row per kept sample; periodic points list each cycle point once;\n"
               "  period is 0 unless kind is periodic; failed points have kind error";
    if (command == "continue")
        return "curve.csv columns: point,N,beta,r,alpha,x,y,z,m1_re,m1_im,m2_re,m2_im,m3_re,m3_im,det(J-I),det(J+I),t1*t2-1\n"
               "curve_events.csv columns: kind,N,beta,r,alpha,x,y,z,residual,tx,ty,tz,tlambda,note\n"
               "branch.csv / branch_events.csv: same layouts for the branch switched at the first BP";
    if (command == "ns-curve")
        return "ns_curve.csv columns: point,N,beta,r,alpha,x,y,z,m1_re,m1_im,m2_re,m2_im,m3_re,m3_im,t1+t2,first_lyapunov,alpha_generic\n"
               "ns_curve.json: R2/R3/R4/CH events with normal-form diagnostics";
    if (command == "tongue")
        return "tongue_grid.csv columns: r,alpha,varpi1,varpi2,t_minus,t_plus,inside\n"
               "tongue.json: apex, rho3_0, rho2tilde_0, |sigma|";
    if (command == "verify") return "verify.json: one entry per acceptance check (id, name, pass, detail, seconds)";
    throw InvalidInput("unknown command '" + command + "'");
}

}  // namespace sirbif
