#pragma once

#include "sugarbait/analytics.hpp"
#include "sugarbait/dde.hpp"
#include "sugarbait/scenario.hpp"
#include "sugarbait/stochastic.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sugarbait {

enum class OutputFormat { Csv, Svg, Both };

struct CommandOptions {
    std::filesystem::path out_dir = ".";
    OutputFormat format = OutputFormat::Both;
    std::optional<std::uint64_t> seed;
    std::optional<long> runs;
    std::optional<double> dt;
};

/// Folds --seed/--runs/--dt into the scenario.
Scenario with_overrides(Scenario scenario, const CommandOptions& options);

/// R0 of the scenario as configured (targeted baits use the greedy allocation).
R0Result scenario_r0(const Scenario& scenario, const AttractivenessProfile& profile);

R0Result cmd_r0(const Scenario& scenario, std::ostream& report);

struct SweepSeries {
    std::string label;
    std::vector<double> values;
    std::vector<R0Result> results;
    std::optional<double> crossing; // first grid value where R0 drops to 1
};

struct SweepResult {
    std::string variable;
    std::vector<SweepSeries> series;
    std::vector<std::filesystem::path> written;
};

SweepResult cmd_sweep(const Scenario& scenario, const CommandOptions& options, std::ostream& report);

/// DDE run for the scenario, recorded at integrate.record_interval.
Trajectory scenario_trajectory(const Scenario& scenario, const IntegrationOptions& options);

Trajectory cmd_integrate(const Scenario& scenario, const CommandOptions& options, std::ostream& report);

struct SimulateResult {
    MeanTrajectory ensemble;
    Trajectory deterministic;
    double max_deviation = 0.0;         // mean i_h vs DDE i_h
    double max_takeoff_deviation = 0.0; // same, over runs that took off
    std::vector<std::string> warnings;
};

SimulateResult cmd_simulate(const Scenario& scenario, const CommandOptions& options, std::ostream& report);

struct AllocateResult {
    BaitAllocation allocation;
    R0Result targeted;
    R0Result uniform;
    std::optional<BruteForceResult> oracle;
};

AllocateResult cmd_allocate(const Scenario& scenario, const CommandOptions& options, std::ostream& report);

StabilityVerdict cmd_stability(const Scenario& scenario, std::ostream& report);

} // namespace sugarbait
