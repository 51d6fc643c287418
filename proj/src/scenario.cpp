#include "sugarbait/scenario.hpp"

#include "sugarbait/textio.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

namespace sugarbait {

ScenarioError::ScenarioError(std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "scenario line " + std::to_string(line) + ": " + message : "scenario: " + message)
    , line_(line)
{
}

namespace {

struct ParamField {
    double ModelParams::*real = nullptr;
    long ModelParams::*count = nullptr;
};

const std::map<std::string, ParamField>& param_fields()
{
    static const std::map<std::string, ParamField> fields = {
        {"n_hosts", {nullptr, &ModelParams::n_hosts}},
        {"n_mosquitoes", {nullptr, &ModelParams::n_mosquitoes}},
        {"bite_rate", {&ModelParams::bite_rate, nullptr}},
        {"p_infect_human", {&ModelParams::p_infect_human, nullptr}},
        {"p_infect_mosquito", {&ModelParams::p_infect_mosquito, nullptr}},
        {"mosquito_density", {&ModelParams::mosquito_density, nullptr}},
        {"bait_density", {&ModelParams::bait_density, nullptr}},
        {"blood_preference", {&ModelParams::blood_preference, nullptr}},
        {"sugar_preference", {&ModelParams::sugar_preference, nullptr}},
        {"incubation_days", {&ModelParams::incubation_days, nullptr}},
        {"efficacy", {&ModelParams::efficacy, nullptr}},
        {"reversion_rate", {&ModelParams::reversion_rate, nullptr}},
        {"recovery_rate", {&ModelParams::recovery_rate, nullptr}},
        {"turnover_rate", {&ModelParams::turnover_rate, nullptr}},
    };
    return fields;
}

double to_number(const std::string& text, std::size_t line, const std::string& key)
{
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw ScenarioError(line, key + ": expected a number, got '" + text + "'");
    return value;
}

long to_count(const std::string& text, std::size_t line, const std::string& key)
{
    const double v = to_number(text, line, key);
    if (std::floor(v) != v)
        throw ScenarioError(line, key + ": expected an integer, got '" + text + "'");
    return static_cast<long>(v);
}

std::vector<double> to_list(const std::string& text, std::size_t line, const std::string& key)
{
    std::vector<double> values;
    for (const auto& field : split_trimmed(text, ',')) {
        if (field.empty())
            throw ScenarioError(line, key + ": empty list entry");
        values.push_back(to_number(field, line, key));
    }
    return values;
}

/// "start:stop:points" or an explicit comma list.
std::vector<double> to_grid(const std::string& text, std::size_t line, const std::string& key)
{
    if (text.find(':') == std::string::npos)
        return to_list(text, line, key);
    const auto parts = split_trimmed(text, ':');
    if (parts.size() != 3)
        throw ScenarioError(line, key + ": grid must be start:stop:points");
    const double start = to_number(parts[0], line, key);
    const double stop = to_number(parts[1], line, key);
    const long points = to_count(parts[2], line, key);
    if (points < 1)
        throw ScenarioError(line, key + ": grid needs at least one point");
    std::vector<double> grid;
    for (long i = 0; i < points; ++i)
        grid.push_back(points == 1 ? start
                                   : start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1));
    return grid;
}

template <class Enum>
Enum to_enum(const std::string& text, std::size_t line, const std::string& key,
             const std::map<std::string, Enum>& names)
{
    const auto it = names.find(text);
    if (it == names.end()) {
        std::string allowed;
        for (const auto& [name, value] : names)
            allowed += (allowed.empty() ? "" : ", ") + name;
        throw ScenarioError(line, key + ": unknown value '" + text + "' (expected one of " + allowed + ")");
    }
    return it->second;
}

} // namespace

bool set_parameter(ModelParams& params, const std::string& key, double value)
{
    const auto it = param_fields().find(key);
    if (it == param_fields().end())
        return false;
    if (it->second.real)
        params.*(it->second.real) = value;
    else
        params.*(it->second.count) = std::lround(value);
    if (key == "blood_preference")
        params.sugar_preference = 1.0 - value;
    if (key == "n_hosts" || key == "n_mosquitoes")
        params.mosquito_density = static_cast<double>(params.n_mosquitoes) / static_cast<double>(params.n_hosts);
    if (key == "mosquito_density")
        params.n_mosquitoes = std::lround(value * static_cast<double>(params.n_hosts));
    return true;
}

double get_parameter(const ModelParams& params, const std::string& key)
{
    const auto it = param_fields().find(key);
    if (it == param_fields().end())
        throw std::invalid_argument("unknown parameter '" + key + "'");
    return it->second.real ? params.*(it->second.real) : static_cast<double>(params.*(it->second.count));
}

Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir)
{
    Scenario sc;
    sc.params = default_params();

    std::map<std::string, std::pair<std::string, std::size_t>> entries;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (const auto hash = text.find('#'); hash != std::string::npos)
            text.erase(hash);
        text = trim(text);
        if (text.empty())
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ScenarioError(line, "expected 'key = value'");
        const auto key = trim(text.substr(0, eq));
        const auto value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ScenarioError(line, "expected 'key = value'");
        if (entries.count(key))
            throw ScenarioError(line, "duplicate key '" + key + "' (first set on line "
                                          + std::to_string(entries[key].second) + ")");
        entries[key] = {value, line};
    }

    // populations first so that densities given alongside them stay consistent
    bool have_density = entries.count("params.mosquito_density") > 0;
    bool have_mosquitoes = entries.count("params.n_mosquitoes") > 0;
    bool have_q = entries.count("params.sugar_preference") > 0;
    auto& p = sc.params;
    for (const char* key : {"params.n_hosts", "params.n_mosquitoes"}) {
        if (const auto it = entries.find(key); it != entries.end()) {
            const long v = to_count(it->second.first, it->second.second, key);
            if (std::string(key) == "params.n_hosts")
                p.n_hosts = v;
            else
                p.n_mosquitoes = v;
        }
    }
    if (!have_density)
        p.mosquito_density = p.n_hosts > 0 ? static_cast<double>(p.n_mosquitoes) / static_cast<double>(p.n_hosts) : 0.0;

    for (const auto& [key, entry] : entries) {
        const auto& [value, ln] = entry;
        const auto dot = key.find('.');
        const auto section = dot == std::string::npos ? std::string() : key.substr(0, dot);
        const auto name = dot == std::string::npos ? key : key.substr(dot + 1);

        if (key == "name") {
            sc.name = value;
        } else if (key == "mode") {
            sc.mode = to_enum<MixingMode>(value, ln, key,
                                          {{"homogeneous", MixingMode::Homogeneous},
                                           {"heterogeneous", MixingMode::Heterogeneous}});
        } else if (section == "params") {
            if (name == "n_hosts" || name == "n_mosquitoes")
                continue;
            const auto it = param_fields().find(name);
            if (it == param_fields().end())
                throw ScenarioError(ln, "unknown parameter '" + key + "'");
            p.*(it->second.real) = to_number(value, ln, key);
        } else if (section == "profile") {
            auto& prof = sc.profile;
            if (name == "kind")
                prof.kind = to_enum<ProfileKind>(value, ln, key,
                                                 {{"single", ProfileKind::SingleClass},
                                                  {"power_law", ProfileKind::PowerLaw},
                                                  {"poisson", ProfileKind::Poisson},
                                                  {"poisson_matched", ProfileKind::PoissonMatched},
                                                  {"table", ProfileKind::Table}});
            else if (name == "exponent")
                prof.power_law.exponent = to_number(value, ln, key);
            else if (name == "k_min")
                prof.power_law.k_min = to_number(value, ln, key);
            else if (name == "k_max")
                prof.power_law.k_max = to_number(value, ln, key);
            else if (name == "n_classes")
                prof.power_law.n_classes = to_count(value, ln, key);
            else if (name == "poisson_rate")
                prof.poisson_rate = to_number(value, ln, key);
            else if (name == "poisson_classes")
                prof.poisson_classes = to_count(value, ln, key);
            else if (name == "target_k_mean")
                prof.target_k_mean = to_number(value, ln, key);
            else if (name == "file")
                prof.table_path = base_dir / value;
            else if (name == "sample_seed")
                prof.sample_seed = static_cast<std::uint64_t>(to_count(value, ln, key));
            else
                throw ScenarioError(ln, "unknown key '" + key + "'");
        } else if (section == "bait") {
            if (name == "mode")
                sc.bait.mode = to_enum<BaitMode>(value, ln, key,
                                                 {{"uniform", BaitMode::Uniform}, {"targeted", BaitMode::Targeted}});
            else if (name == "rule")
                sc.bait.rule = to_enum<ConstraintRule>(value, ln, key,
                                                       {{"proportional", ConstraintRule::Proportional},
                                                        {"explicit", ConstraintRule::Explicit}});
            else if (name == "constraints") {
                sc.bait.constraints.clear();
                for (double v : to_list(value, ln, key)) {
                    if (v < 0 || std::floor(v) != v)
                        throw ScenarioError(ln, key + ": constraints must be nonnegative integers");
                    sc.bait.constraints.push_back(static_cast<long>(v));
                }
            } else if (name == "budget")
                sc.bait.budget = to_count(value, ln, key);
            else
                throw ScenarioError(ln, "unknown key '" + key + "'");
        } else if (section == "sim") {
            auto& sim = sc.sim;
            if (name == "dt")
                sim.dt = to_number(value, ln, key);
            else if (name == "t_end")
                sim.t_end = to_number(value, ln, key);
            else if (name == "runs")
                sim.n_runs = to_count(value, ln, key);
            else if (name == "seed")
                sim.rng_seed = static_cast<std::uint64_t>(std::stoull(value));
            else if (name == "initial_infected_hosts")
                sim.initial_infected_hosts = to_count(value, ln, key);
            else if (name == "initial_class")
                sim.initial_class = static_cast<std::size_t>(to_count(value, ln, key));
            else if (name == "output_interval")
                sim.output_interval = to_number(value, ln, key);
            else if (name == "workers")
                sim.workers = static_cast<unsigned>(to_count(value, ln, key));
            else
                throw ScenarioError(ln, "unknown key '" + key + "'");
        } else if (section == "integrate") {
            auto& ig = sc.integrate;
            if (name == "dt")
                ig.dt = to_number(value, ln, key);
            else if (name == "t_end")
                ig.t_end = to_number(value, ln, key);
            else if (name == "record_interval")
                ig.record_interval = to_number(value, ln, key);
            else if (name == "initial_i_h")
                ig.initial_i_h = to_number(value, ln, key);
            else if (name == "initial_i_m")
                ig.initial_i_m = to_number(value, ln, key);
            else if (name == "initial_r_m")
                ig.initial_r_m = to_number(value, ln, key);
            else
                throw ScenarioError(ln, "unknown key '" + key + "'");
        } else if (section == "sweep") {
            if (!sc.sweep)
                sc.sweep.emplace();
            auto& sw = *sc.sweep;
            if (name == "variable") {
                if (!param_fields().count(value))
                    throw ScenarioError(ln, key + ": unknown parameter '" + value + "'");
                sw.variable = value;
            } else if (name == "grid") {
                sw.grid = to_grid(value, ln, key);
            } else if (name == "series_variable") {
                if (!param_fields().count(value))
                    throw ScenarioError(ln, key + ": unknown parameter '" + value + "'");
                sw.series_variable = value;
            } else if (name == "series_values") {
                sw.series_values = to_list(value, ln, key);
            } else if (name == "variants") {
                sw.variants = split_trimmed(value, ',');
                for (const auto& v : sw.variants) {
                    if (v != "base" && v != "homogeneous" && v != "uniform" && v != "targeted" && v != "poisson_matched")
                        throw ScenarioError(ln, key + ": unknown variant '" + v + "'");
                }
            } else {
                throw ScenarioError(ln, "unknown key '" + key + "'");
            }
        } else {
            throw ScenarioError(ln, "unknown key '" + key + "'");
        }
    }

    if (!have_q)
        p.sugar_preference = 1.0 - p.blood_preference;
    if (have_density && !have_mosquitoes)
        p.n_mosquitoes = std::lround(p.mosquito_density * static_cast<double>(p.n_hosts));

    if (sc.sweep) {
        if (sc.sweep->grid.empty())
            throw ScenarioError(0, "sweep.grid is empty");
        if (!sc.sweep->series_variable.empty() && sc.sweep->series_values.empty())
            throw ScenarioError(0, "sweep.series_variable given without sweep.series_values");
    }
    if (sc.mode == MixingMode::Homogeneous && sc.bait.mode == BaitMode::Targeted)
        throw ScenarioError(0, "targeted baits need heterogeneous mode");
    if (sc.profile.kind == ProfileKind::Table && !std::filesystem::exists(sc.profile.table_path))
        throw ScenarioError(entries["profile.file"].second, "profile table not found: " + sc.profile.table_path.string());
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ScenarioError(0, "cannot open " + path.string());
    auto sc = parse_scenario(in, path.parent_path());
    if (sc.name.empty())
        sc.name = path.stem().string();
    return sc;
}

AttractivenessProfile build_profile(const Scenario& scenario)
{
    const long n = scenario.params.n_hosts;
    if (scenario.mode == MixingMode::Homogeneous)
        return single_class_profile(n);

    const auto& spec = scenario.profile;
    switch (spec.kind) {
    case ProfileKind::SingleClass:
        return single_class_profile(n);
    case ProfileKind::PowerLaw:
        return spec.sample_seed ? sample_power_law_profile(spec.power_law, n, *spec.sample_seed)
                                : power_law_profile(spec.power_law, n);
    case ProfileKind::Poisson:
        return poisson_profile(spec.poisson_rate, spec.poisson_classes, n);
    case ProfileKind::PoissonMatched: {
        const double target = spec.target_k_mean.value_or(power_law_profile(spec.power_law, n).k_mean());
        return poisson_profile_matched(target, spec.poisson_classes, n);
    }
    case ProfileKind::Table: {
        auto profile = read_profile_file(spec.table_path.string());
        if (profile.n_hosts() != n)
            throw std::invalid_argument("profile table holds " + std::to_string(profile.n_hosts())
                                        + " hosts but params.n_hosts = " + std::to_string(n));
        return profile;
    }
    }
    throw std::invalid_argument("unknown profile kind");
}

long bait_budget(const Scenario& scenario)
{
    return scenario.bait.budget.value_or(
        std::lround(static_cast<double>(scenario.params.n_hosts) * scenario.params.bait_density));
}

std::vector<long> build_constraints(const Scenario& scenario, const AttractivenessProfile& profile)
{
    if (scenario.bait.rule == ConstraintRule::Proportional)
        return proportional_constraints(profile, scenario.params.bait_density);
    if (scenario.bait.constraints.size() != profile.size())
        throw std::invalid_argument("bait.constraints lists " + std::to_string(scenario.bait.constraints.size())
                                    + " classes but the profile has " + std::to_string(profile.size()));
    return scenario.bait.constraints;
}

BaitAllocation build_allocation(const Scenario& scenario, const AttractivenessProfile& profile)
{
    return greedy_allocate(profile, build_constraints(scenario, profile), bait_budget(scenario));
}

BaitPlacement build_bait_placement(const Scenario& scenario, const AttractivenessProfile& profile)
{
    if (scenario.bait.mode == BaitMode::Targeted)
        return BaitPlacement::targeted(profile, build_allocation(scenario, profile));
    return BaitPlacement::uniform(scenario.params);
}

} // namespace sugarbait
