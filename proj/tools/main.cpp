// sirbif: command-line runner for the discrete SIR bifurcation toolkit.
//
//   sirbif <command> --scenario run.json --out results/ [--threads 4]
//                    [--tolerance-overrides tol.json]
//
// Exit status: 0 success, 1 invalid input, 2 numerical failure,
// 3 acceptance checks failed (verify only).

#include "sirbif/errors.hpp"
#include "sirbif/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

struct Flags {
    std::string scenario;
    std::string out = ".";
    int threads = 1;
    std::string overrides;
};

int run_command(const std::string& command, const Flags& f)
{
    using namespace sirbif;
    Scenario sc;
    RunOptions opts;
    try {
        if (f.scenario.empty()) {
            if (command != "verify") throw InvalidInput("--scenario is required for " + command);
            sc.command = "verify";
        } else {
            sc = parse_scenario(read_file(f.scenario));
            if (sc.command != command)
                throw InvalidInput("scenario command '" + sc.command + "' does not match subcommand '" + command + "'");
        }
        if (!f.overrides.empty()) opts.tolerance_overrides = parse_tolerance_overrides(read_file(f.overrides));
    } catch (const std::exception& e) {
        std::cerr << "sirbif: " << e.what() << '\n';
        return exit_code_for(e);
    }
    opts.out_dir = f.out;
    opts.threads = f.threads;
    opts.summary = &std::cout;

    const RunResult res = run(sc, opts);
    if (res.exit_code != 0) std::cerr << "sirbif: " << res.message << '\n';
    for (const auto& p : res.files) std::cout << "wrote " << p.string() << '\n';
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bifurcation analysis of the discrete-time SIR map"};
    app.require_subcommand(1);
    app.footer("Exit status: 0 success, 1 invalid input, 2 numerical failure, 3 verification failure.");

    const std::map<std::string, std::string> about = {
        {"classify", "Topological type of E1 and E2"},
        {"fixed-points", "Fixed points with multipliers and labels"},
        {"simulate", "Iterate one orbit and classify its attractor"},
        {"sweep", "Bifurcation diagram over one parameter"},
        {"continue", "Pseudo-arclength continuation of fixed points"},
        {"ns-curve", "Neimark-Sacker curve with codimension-two points"},
        {"tongue", "Arnold tongue boundary and membership grid"},
        {"verify", "Run the acceptance checks"},
    };

    Flags flags;
    std::string chosen;
    for (const auto& name : sirbif::command_names()) {
        auto* sub = app.add_subcommand(name, about.at(name));
        sub->add_option("--scenario", flags.scenario, "Scenario JSON file")->check(CLI::ExistingFile);
        sub->add_option("--out", flags.out, "Output directory (created if missing)")->capture_default_str();
        sub->add_option("--threads", flags.threads, "Worker threads for independent sweep points")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--tolerance-overrides", flags.overrides, "JSON object of tolerance overrides")
            ->check(CLI::ExistingFile);
        sub->footer(sirbif::csv_columns_help(name));
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return run_command(chosen, flags);
}
