#include "sugarbait/stochastic.hpp"

#include "sugarbait/parallel.hpp"
#include "sugarbait/textio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sugarbait {

std::string to_string(MosquitoStatus status)
{
    switch (status) {
    case MosquitoStatus::Susceptible:
        return "susceptible";
    case MosquitoStatus::Exposed:
        return "exposed";
    case MosquitoStatus::Infectious:
        return "infectious";
    case MosquitoStatus::Removed:
        return "removed";
    }
    return "unknown";
}

double MosquitoAgent::days_remaining(long current_step, double dt) const
{
    if (status != MosquitoStatus::Exposed)
        return 0.0;
    return static_cast<double>(infectious_step - current_step + 1) * dt;
}

long HostPopulation::total_infected() const
{
    return std::accumulate(infected.begin(), infected.end(), 0L);
}

long HostPopulation::total() const
{
    return std::accumulate(class_size.begin(), class_size.end(), 0L);
}

BaitPlacement BaitPlacement::uniform(const ModelParams& params)
{
    return {static_cast<double>(params.n_hosts) * params.bait_density};
}

BaitPlacement BaitPlacement::targeted(const AttractivenessProfile& profile, const BaitAllocation& alloc)
{
    return {allocation_objective(profile, alloc.baits_by_class)};
}

StepProbabilities step_probabilities(const ModelParams& params, double dt)
{
    return {params.bite_rate * dt, params.recovery_rate * dt, params.turnover_rate * dt, params.reversion_rate * dt};
}

namespace {

long steps_for(double span, double dt, const char* what)
{
    const double ratio = span / dt;
    const double steps = std::round(ratio);
    if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, steps))
        throw std::invalid_argument(std::string(what) + " is not a multiple of dt");
    return static_cast<long>(steps);
}

} // namespace

std::vector<std::string> check_sim_config(const SimConfig& config, const ModelParams& params)
{
    if (!(config.dt > 0.0) || !std::isfinite(config.dt))
        throw std::invalid_argument("simulation dt must be positive");
    if (!(config.t_end >= 0.0))
        throw std::invalid_argument("simulation t_end must be nonnegative");
    if (config.n_runs < 1)
        throw std::invalid_argument("n_runs must be at least 1");
    if (config.initial_infected_hosts < 0)
        throw std::invalid_argument("initial_infected_hosts must be nonnegative");
    if (!(config.output_interval > 0.0))
        throw std::invalid_argument("output_interval must be positive");

    const auto probs = step_probabilities(params, config.dt);
    const std::pair<const char*, double> checks[] = {
        {"bite_rate*dt", probs.meal},
        {"recovery_rate*dt", probs.recovery},
        {"turnover_rate*dt", probs.death},
        {"reversion_rate*dt", probs.reversion},
    };
    std::vector<std::string> warnings;
    for (const auto& [name, value] : checks) {
        if (!(value < 1.0))
            throw std::invalid_argument(std::string("per-step probability ") + name + " = " + format_double(value)
                                        + " must be < 1; reduce dt");
        if (value >= 0.1)
            warnings.push_back(std::string("per-step probability ") + name + " = " + format_double(value)
                               + " >= 0.1; discretization bias may be noticeable");
    }
    return warnings;
}

std::vector<double> meal_target_probabilities(const ModelParams& params, const AttractivenessProfile& profile,
                                              const BaitPlacement& baits)
{
    std::vector<double> weights;
    weights.reserve(profile.size() + 1);
    for (const auto& c : profile.classes())
        weights.push_back(params.blood_preference * c.k * static_cast<double>(c.count));
    weights.push_back(params.sugar_preference * baits.total_weight);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (total > 0.0) {
        for (auto& w : weights)
            w /= total;
    }
    return weights;
}

World::World(const ModelParams& params, const AttractivenessProfile& profile, const BaitPlacement& baits,
             const SimConfig& config, std::uint64_t seed)
    : params_(params)
    , dt_(config.dt)
    , rng_(seed)
{
    require_valid(params);
    check_sim_config(config, params);
    if (profile.n_hosts() != params.n_hosts)
        throw std::invalid_argument("profile host count differs from n_hosts");
    if (!(baits.total_weight >= 0.0))
        throw std::invalid_argument("bait weight must be >= 0");

    delay_steps_ = steps_for(params.incubation_days, dt_, "incubation period");
    if (delay_steps_ < 1)
        throw std::invalid_argument("dt must not exceed the incubation period");

    const auto probs = step_probabilities(params, dt_);
    meal_prob_ = probs.meal;
    death_prob_ = probs.death;
    recovery_prob_ = probs.recovery;
    const double active_event = 1.0 - (1.0 - probs.death) * (1.0 - probs.meal);
    const double removed_event = 1.0 - (1.0 - probs.death) * (1.0 - probs.reversion);
    death_share_active_ = probs.death / active_event;
    death_share_removed_ = probs.death / removed_event;
    wait_active_ = std::geometric_distribution<long>(active_event);
    wait_removed_ = std::geometric_distribution<long>(removed_event);

    double running = 0.0;
    for (const auto& c : profile.classes()) {
        running += params.blood_preference * c.k * static_cast<double>(c.count);
        cumulative_host_weight_.push_back(running);
        hosts_.class_size.push_back(c.count);
    }
    bait_weight_ = params.sugar_preference * baits.total_weight;
    total_weight_ = running + bait_weight_;

    hosts_.infected.assign(profile.size(), 0);
    if (config.initial_infected_hosts > 0) {
        const std::size_t cls = config.initial_class.value_or(profile.highest_populated_class());
        if (cls >= profile.size())
            throw std::out_of_range("initial infection class out of range");
        if (config.initial_infected_hosts > profile[cls].count)
            throw std::invalid_argument("initial infected hosts exceed the population of class " + std::to_string(cls));
        hosts_.infected[cls] = config.initial_infected_hosts;
    }

    mosquitoes_.resize(static_cast<std::size_t>(params.n_mosquitoes));
    status_counts_[static_cast<std::size_t>(MosquitoStatus::Susceptible)] = params.n_mosquitoes;
    for (std::uint32_t id = 0; id < mosquitoes_.size(); ++id)
        schedule(id, 0);
}

double World::uniform()
{
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

void World::schedule(std::uint32_t id, long from_step)
{
    auto& mosquito = mosquitoes_[id];
    const long wait = mosquito.status == MosquitoStatus::Removed ? wait_removed_(rng_) : wait_active_(rng_);
    mosquito.next_event_step = from_step + wait;
    pending_.emplace(mosquito.next_event_step, id);
}

void World::transition(MosquitoAgent& mosquito, MosquitoStatus to)
{
    const auto from = static_cast<std::size_t>(mosquito.status);
    const auto dest = static_cast<std::size_t>(to);
    ++events_.transitions[from][dest];
    --status_counts_[from];
    ++status_counts_[dest];
    mosquito.status = to;
    if (to != MosquitoStatus::Exposed)
        mosquito.infectious_step = -1;
}

void World::process(std::uint32_t id)
{
    auto& mosquito = mosquitoes_[id];
    const double u = uniform();
    if (mosquito.status == MosquitoStatus::Removed) {
        if (u < death_share_removed_) {
            ++events_.deaths;
            transition(mosquito, MosquitoStatus::Susceptible);
        } else {
            transition(mosquito, MosquitoStatus::Susceptible);
            if (uniform() < meal_prob_)
                meal(id);
        }
    } else if (u < death_share_active_) {
        // the newborn replacement starts susceptible; a pending incubation is lost
        ++events_.deaths;
        if (mosquito.status != MosquitoStatus::Susceptible)
            transition(mosquito, MosquitoStatus::Susceptible);
    } else {
        meal(id);
    }
    schedule(id, step_ + 1);
}

void World::meal(std::uint32_t id)
{
    if (total_weight_ <= 0.0)
        return;
    auto& mosquito = mosquitoes_[id];
    ++events_.meals;

    const double v = uniform() * total_weight_;
    if (v < bait_weight_) {
        ++events_.bait_meals;
        const bool protectable =
            mosquito.status == MosquitoStatus::Susceptible || mosquito.status == MosquitoStatus::Exposed;
        if (protectable && uniform() < params_.efficacy) {
            if (mosquito.status == MosquitoStatus::Exposed)
                ++events_.exposed_removed_by_bait;
            transition(mosquito, MosquitoStatus::Removed);
        }
        return;
    }

    const auto it = std::upper_bound(cumulative_host_weight_.begin(), cumulative_host_weight_.end(), v - bait_weight_);
    const auto cls = std::min(static_cast<std::size_t>(it - cumulative_host_weight_.begin()),
                              cumulative_host_weight_.size() - 1);
    const double size = static_cast<double>(hosts_.class_size[cls]);
    const bool host_infected = uniform() * size < static_cast<double>(hosts_.infected[cls]);

    if (mosquito.status == MosquitoStatus::Susceptible && host_infected) {
        if (uniform() < params_.p_infect_mosquito) {
            transition(mosquito, MosquitoStatus::Exposed);
            mosquito.infectious_step = step_ + delay_steps_ - 1;
            incubations_.emplace(mosquito.infectious_step, id);
        }
    } else if (mosquito.status == MosquitoStatus::Infectious && !host_infected) {
        if (uniform() < params_.p_infect_human) {
            ++hosts_.infected[cls];
            ++events_.host_infections;
        }
    }
}

void World::step()
{
    while (!pending_.empty() && pending_.top().first == step_) {
        const auto id = pending_.top().second;
        pending_.pop();
        if (mosquitoes_[id].next_event_step == step_)
            process(id);
    }

    while (!incubations_.empty() && incubations_.top().first == step_) {
        const auto id = incubations_.top().second;
        incubations_.pop();
        auto& mosquito = mosquitoes_[id];
        if (mosquito.status == MosquitoStatus::Exposed && mosquito.infectious_step == step_)
            transition(mosquito, MosquitoStatus::Infectious);
    }

    for (std::size_t cls = 0; cls < hosts_.infected.size(); ++cls) {
        if (hosts_.infected[cls] == 0)
            continue;
        std::binomial_distribution<long> recover(hosts_.infected[cls], recovery_prob_);
        const long n = recover(rng_);
        hosts_.infected[cls] -= n;
        events_.recoveries += n;
    }
    ++step_;
}

bool World::disease_free() const
{
    return hosts_.total_infected() == 0 && count(MosquitoStatus::Exposed) == 0
           && count(MosquitoStatus::Infectious) == 0;
}

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run_index)
{
    // splitmix64 finalizer over the master seed offset by the run index
    std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(run_index) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

SimulationRun run(const SimConfig& config, const ModelParams& params, const AttractivenessProfile& profile,
                  const BaitPlacement& baits, std::uint64_t seed)
{
    World world(params, profile, baits, config, seed);
    const long steps = static_cast<long>(std::round(config.t_end / config.dt));
    const long stride = std::max(1L, steps_for(config.output_interval, config.dt, "output interval"));

    SimulationRun out;
    out.seed = seed;
    auto& traj = out.trajectory;
    traj.dt = config.dt;
    traj.columns = {"i_h", "i_m", "r_m", "e_m"};
    const double n_hosts = static_cast<double>(params.n_hosts);
    const double n_mosq = static_cast<double>(params.n_mosquitoes);
    auto snapshot = [&] {
        return std::vector<double>{static_cast<double>(world.hosts().total_infected()) / n_hosts,
                                   static_cast<double>(world.count(MosquitoStatus::Infectious)) / n_mosq,
                                   static_cast<double>(world.count(MosquitoStatus::Removed)) / n_mosq,
                                   static_cast<double>(world.count(MosquitoStatus::Exposed)) / n_mosq};
    };

    traj.times.push_back(0.0);
    traj.states.push_back(snapshot());
    for (long n = 0; n < steps; ++n) {
        world.step();
        if ((n + 1) % stride == 0) {
            traj.times.push_back(static_cast<double>(n + 1) * config.dt);
            traj.states.push_back(snapshot());
        }
    }
    traj.final_state = snapshot();
    traj.final_time = static_cast<double>(steps) * config.dt;
    out.events = world.events();
    out.extinct = world.disease_free();
    return out;
}

SimulationRun run(const SimConfig& config, const ModelParams& params, const AttractivenessProfile& profile,
                  const BaitPlacement& baits)
{
    return run(config, params, profile, baits, config.rng_seed);
}

SimulationRun run_homogeneous(const SimConfig& config, const ModelParams& params)
{
    return run(config, params, single_class_profile(params.n_hosts), BaitPlacement::uniform(params));
}

namespace {

std::vector<double> column_of(const MeanTrajectory& m, const std::vector<std::vector<double>>& data,
                              const std::string& name)
{
    const auto it = std::find(m.columns.begin(), m.columns.end(), name);
    if (it == m.columns.end())
        throw std::out_of_range("mean trajectory has no column '" + name + "'");
    const auto idx = static_cast<std::size_t>(it - m.columns.begin());
    std::vector<double> out;
    out.reserve(data.size());
    for (const auto& row : data)
        out.push_back(row[idx]);
    return out;
}

} // namespace

std::vector<double> MeanTrajectory::mean_series(const std::string& name) const
{
    return column_of(*this, mean, name);
}

std::vector<double> MeanTrajectory::takeoff_series(const std::string& name) const
{
    return column_of(*this, takeoff_mean, name);
}

MeanTrajectory run_ensemble(const SimConfig& config, const ModelParams& params, const AttractivenessProfile& profile,
                            const BaitPlacement& baits)
{
    check_sim_config(config, params);
    const auto n_runs = static_cast<std::size_t>(config.n_runs);
    std::vector<SimulationRun> runs(n_runs);
    parallel_for(n_runs, config.workers, [&](std::size_t i) {
        runs[i] = run(config, params, profile, baits, run_seed(config.rng_seed, i));
    });

    MeanTrajectory out;
    out.master_seed = config.rng_seed;
    out.n_runs = config.n_runs;
    out.columns = runs.front().trajectory.columns;
    out.times = runs.front().trajectory.times;

    std::vector<std::size_t> took_off;
    for (std::size_t i = 0; i < n_runs; ++i) {
        if (!runs[i].extinct)
            took_off.push_back(i);
    }
    out.takeoff_runs = static_cast<long>(took_off.size());

    const std::size_t rows = out.times.size();
    const std::size_t cols = out.columns.size();
    out.mean.assign(rows, std::vector<double>(cols, 0.0));
    out.stddev.assign(rows, std::vector<double>(cols, 0.0));
    if (!took_off.empty())
        out.takeoff_mean.assign(rows, std::vector<double>(cols, 0.0));

    std::vector<double> values(n_runs);
    std::vector<double> subset(took_off.size());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            for (std::size_t i = 0; i < n_runs; ++i)
                values[i] = runs[i].trajectory.states[r][c];
            const double mean = pairwise_sum(values.begin(), values.end()) / static_cast<double>(n_runs);
            for (auto& v : values)
                v = (v - mean) * (v - mean);
            out.mean[r][c] = mean;
            out.stddev[r][c] = std::sqrt(pairwise_sum(values.begin(), values.end()) / static_cast<double>(n_runs));
            if (!took_off.empty()) {
                for (std::size_t j = 0; j < took_off.size(); ++j)
                    subset[j] = runs[took_off[j]].trajectory.states[r][c];
                out.takeoff_mean[r][c] = pairwise_sum(subset.begin(), subset.end()) / static_cast<double>(subset.size());
            }
        }
    }
    return out;
}

void write_mean_trajectory_csv(std::ostream& out, const MeanTrajectory& mean)
{
    CsvTable table;
    table.comments.push_back(" master_seed " + std::to_string(mean.master_seed));
    table.comments.push_back(" runs " + std::to_string(mean.n_runs) + " takeoff_runs " + std::to_string(mean.takeoff_runs));
    table.header.push_back("time");
    for (const auto& c : mean.columns)
        table.header.push_back(c + "_mean");
    for (const auto& c : mean.columns)
        table.header.push_back(c + "_std");
    for (std::size_t r = 0; r < mean.times.size(); ++r) {
        std::vector<double> row{mean.times[r]};
        row.insert(row.end(), mean.mean[r].begin(), mean.mean[r].end());
        row.insert(row.end(), mean.stddev[r].begin(), mean.stddev[r].end());
        table.rows.push_back(std::move(row));
    }
    write_csv(out, table);
}

MeanTrajectory read_mean_trajectory_csv(std::istream& in)
{
    const auto table = read_csv(in);
    if (table.header.empty() || table.header.front() != "time" || table.header.size() % 2 != 1)
        throw std::invalid_argument("not a mean-trajectory CSV");
    MeanTrajectory out;
    const std::size_t cols = (table.header.size() - 1) / 2;
    for (std::size_t c = 0; c < cols; ++c) {
        const auto& name = table.header[1 + c];
        if (name.size() < 5 || name.substr(name.size() - 5) != "_mean")
            throw std::invalid_argument("mean-trajectory column '" + name + "' lacks the _mean suffix");
        out.columns.push_back(name.substr(0, name.size() - 5));
    }
    for (const auto& row : table.rows) {
        out.times.push_back(row[0]);
        out.mean.emplace_back(row.begin() + 1, row.begin() + 1 + static_cast<std::ptrdiff_t>(cols));
        out.stddev.emplace_back(row.begin() + 1 + static_cast<std::ptrdiff_t>(cols), row.end());
    }
    for (const auto& c : table.comments) {
        std::istringstream fields(c);
        std::string key;
        while (fields >> key) {
            if (key == "master_seed")
                fields >> out.master_seed;
            else if (key == "runs")
                fields >> out.n_runs;
            else if (key == "takeoff_runs")
                fields >> out.takeoff_runs;
        }
    }
    return out;
}

} // namespace sugarbait
