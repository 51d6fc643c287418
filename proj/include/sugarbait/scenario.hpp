#pragma once

#include "sugarbait/allocation.hpp"
#include "sugarbait/analytics.hpp"
#include "sugarbait/params.hpp"
#include "sugarbait/profile.hpp"
#include "sugarbait/stochastic.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sugarbait {

enum class MixingMode { Homogeneous, Heterogeneous };
enum class ProfileKind { SingleClass, PowerLaw, Poisson, PoissonMatched, Table };
enum class BaitMode { Uniform, Targeted };
enum class ConstraintRule { Proportional, Explicit };

struct ProfileSpec {
    ProfileKind kind = ProfileKind::SingleClass;
    PowerLawSpec power_law;
    double poisson_rate = 2.0;
    long poisson_classes = 100;
    /// Target mean for PoissonMatched; unset means "match the power-law spec".
    std::optional<double> target_k_mean;
    std::filesystem::path table_path;
    /// Draw host classes i.i.d. from the power law instead of discretizing it.
    std::optional<std::uint64_t> sample_seed;
};

struct BaitSpec {
    BaitMode mode = BaitMode::Uniform;
    ConstraintRule rule = ConstraintRule::Proportional;
    std::vector<long> constraints;
    std::optional<long> budget; // defaults to round(N x)
};

struct SweepSpec {
    std::string variable = "bait_density";
    std::vector<double> grid;
    std::string series_variable;
    std::vector<double> series_values;
    /// Any of: base, homogeneous, uniform, targeted, poisson_matched.
    std::vector<std::string> variants{"base"};
};

struct IntegrateSpec {
    double dt = 0.01;
    double t_end = 1000.0;
    double record_interval = 1.0;
    std::optional<double> initial_i_h; // homogeneous; defaults to initial infected hosts / N
    double initial_i_m = 0.0;
    double initial_r_m = 0.0;
};

struct Scenario {
    std::string name;
    ModelParams params;
    MixingMode mode = MixingMode::Homogeneous;
    ProfileSpec profile;
    BaitSpec bait;
    SimConfig sim;
    IntegrateSpec integrate;
    std::optional<SweepSpec> sweep;
};

/// Parse failure carrying the 1-based line of the offending entry (0 when not line-specific).
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Flat "section.key = value" text; '#' starts a comment. Relative file paths
/// resolve against `base_dir`.
Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Sets a parameter by its key name (the part after "params."). Returns false for unknown keys.
bool set_parameter(ModelParams& params, const std::string& key, double value);
double get_parameter(const ModelParams& params, const std::string& key);

/// Profile for the scenario; single class k = 1 in homogeneous mode.
AttractivenessProfile build_profile(const Scenario& scenario);

/// Capacities for targeted baits (proportional rule or the explicit list).
std::vector<long> build_constraints(const Scenario& scenario, const AttractivenessProfile& profile);
long bait_budget(const Scenario& scenario);
/// Greedy allocation for targeted scenarios.
BaitAllocation build_allocation(const Scenario& scenario, const AttractivenessProfile& profile);

BaitPlacement build_bait_placement(const Scenario& scenario, const AttractivenessProfile& profile);

} // namespace sugarbait
