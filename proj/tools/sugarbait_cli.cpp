// sugarbait command-line front end.
//
//   sugarbait <verb> --scenario FILE [--out DIR] [--seed N] [--runs N] [--dt X] [--format csv|svg|both]
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.

#include "sugarbait/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <stdexcept>

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

} // namespace

int main(int argc, char** argv)
{
    using namespace sugarbait;

    CLI::App app{"Malaria transmission with attractive sugar baits"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string scenario_path;
    std::string out_dir = ".";
    std::string format = "both";
    std::optional<std::uint64_t> seed;
    std::optional<long> runs;
    std::optional<double> dt;

    app.add_option("--scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "master RNG seed");
    app.add_option("--runs", runs, "number of stochastic runs")->check(CLI::PositiveNumber);
    app.add_option("--dt", dt, "time step (days)")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "svg", "both"}));

    const char* verbs[][2] = {
        {"r0", "basic reproductive number"},
        {"sweep", "R0 over a parameter grid"},
        {"integrate", "integrate the delay differential system"},
        {"simulate", "stochastic individual-based ensemble"},
        {"allocate", "greedy targeted bait allocation"},
        {"stability", "disease-free equilibrium stability probe"},
    };
    for (const auto& verb : verbs)
        app.add_subcommand(verb[0], verb[1]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    CommandOptions options;
    options.out_dir = out_dir;
    options.format = format == "csv" ? OutputFormat::Csv : format == "svg" ? OutputFormat::Svg : OutputFormat::Both;
    options.seed = seed;
    options.runs = runs;
    options.dt = dt;

    const std::string verb = app.get_subcommands().front()->get_name();
    try {
        const Scenario scenario = with_overrides(load_scenario(scenario_path), options);
        if (verb == "r0")
            cmd_r0(scenario, std::cout);
        else if (verb == "sweep")
            cmd_sweep(scenario, options, std::cout);
        else if (verb == "integrate")
            cmd_integrate(scenario, options, std::cout);
        else if (verb == "simulate")
            cmd_simulate(scenario, options, std::cout);
        else if (verb == "allocate")
            cmd_allocate(scenario, options, std::cout);
        else
            cmd_stability(scenario, std::cout);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
