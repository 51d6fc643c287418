#pragma once

#include "sugarbait/allocation.hpp"
#include "sugarbait/dde.hpp"
#include "sugarbait/params.hpp"
#include "sugarbait/profile.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

namespace sugarbait {

enum class MosquitoStatus : std::uint8_t { Susceptible = 0, Exposed = 1, Infectious = 2, Removed = 3 };

inline constexpr std::size_t kMosquitoStatusCount = 4;

std::string to_string(MosquitoStatus status);

struct MosquitoAgent {
    MosquitoStatus status = MosquitoStatus::Susceptible;
    /// For Exposed mosquitoes: the step at whose end the incubation timer runs out.
    long infectious_step = -1;
    /// Next step in which this mosquito dies, reverts or feeds.
    long next_event_step = 0;

    /// Incubation time left at the start of `current_step`.
    double days_remaining(long current_step, double dt) const;
};

struct HostPopulation {
    std::vector<long> class_size;
    std::vector<long> infected;

    long total_infected() const;
    long total() const;
};

/// Where the baits sit. Uniform baits weigh N x in the meal lottery; targeted
/// baits weigh sum_i k_i B_i.
struct BaitPlacement {
    double total_weight = 0.0;

    static BaitPlacement uniform(const ModelParams& params);
    static BaitPlacement targeted(const AttractivenessProfile& profile, const BaitAllocation& alloc);
};

struct SimConfig {
    double dt = 0.01;
    double t_end = 500.0;
    long n_runs = 1;
    std::uint64_t rng_seed = 1;
    long initial_infected_hosts = 1;
    /// Class receiving the initial infections; defaults to the highest-k populated class.
    std::optional<std::size_t> initial_class;
    double output_interval = 1.0;
    /// Worker threads for ensembles; 0 uses every hardware thread.
    unsigned workers = 0;
};

/// Per-step event probabilities a dt, mu dt, delta dt, theta dt.
struct StepProbabilities {
    double meal = 0.0;
    double recovery = 0.0;
    double death = 0.0;
    double reversion = 0.0;
};

StepProbabilities step_probabilities(const ModelParams& params, double dt);

/// Throws std::invalid_argument when any per-step probability reaches 1 or the
/// config is malformed; returns warnings for probabilities of 0.1 or more.
std::vector<std::string> check_sim_config(const SimConfig& config, const ModelParams& params);

/// Probability that a meal goes to each host class (first entries) or to a bait (last entry).
std::vector<double> meal_target_probabilities(const ModelParams& params, const AttractivenessProfile& profile,
                                              const BaitPlacement& baits);

struct EventCounts {
    long meals = 0;
    long bait_meals = 0;
    long deaths = 0;
    long host_infections = 0;
    long recoveries = 0;
    /// transitions[from][to] between mosquito statuses
    std::array<std::array<long, kMosquitoStatusCount>, kMosquitoStatusCount> transitions{};
    long exposed_removed_by_bait = 0;
};

/// One realization of the per-mosquito model. Within a step the order is
/// death, reversion, meal, incubation timer, host recovery. Mosquito events
/// are drawn as geometric waiting times over steps, which has the same law
/// as an independent Bernoulli trial in every step.
class World {
public:
    World(const ModelParams& params, const AttractivenessProfile& profile, const BaitPlacement& baits,
          const SimConfig& config, std::uint64_t seed);

    /// Advances time by one dt.
    void step();

    long step_index() const { return step_; }
    double time() const { return static_cast<double>(step_) * dt_; }

    long count(MosquitoStatus status) const { return status_counts_[static_cast<std::size_t>(status)]; }
    long mosquito_total() const { return static_cast<long>(mosquitoes_.size()); }
    const std::vector<MosquitoAgent>& mosquitoes() const { return mosquitoes_; }
    const HostPopulation& hosts() const { return hosts_; }
    const EventCounts& events() const { return events_; }

    bool disease_free() const;

private:
    using Scheduled = std::pair<long, std::uint32_t>;
    using Queue = std::priority_queue<Scheduled, std::vector<Scheduled>, std::greater<>>;

    double uniform();
    void schedule(std::uint32_t id, long from_step);
    void process(std::uint32_t id);
    void meal(std::uint32_t id);
    void transition(MosquitoAgent& mosquito, MosquitoStatus to);

    ModelParams params_;
    double dt_;
    long delay_steps_;
    double meal_prob_;
    double death_prob_;
    double recovery_prob_;
    double death_share_active_;  // P(death | event) for non-removed mosquitoes
    double death_share_removed_; // P(death | event) for removed mosquitoes
    std::geometric_distribution<long> wait_active_;
    std::geometric_distribution<long> wait_removed_;
    std::vector<double> cumulative_host_weight_;
    double bait_weight_;
    double total_weight_;

    std::mt19937_64 rng_;
    long step_ = 0;
    std::vector<MosquitoAgent> mosquitoes_;
    HostPopulation hosts_;
    std::array<long, kMosquitoStatusCount> status_counts_{};
    EventCounts events_;
    Queue pending_;
    Queue incubations_;
};

struct SimulationRun {
    Trajectory trajectory; // columns i_h, i_m, r_m, e_m
    EventCounts events;
    bool extinct = false;  // no infected hosts and no exposed or infectious mosquitoes at t_end
    std::uint64_t seed = 0;
};

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run_index);

SimulationRun run(const SimConfig& config, const ModelParams& params, const AttractivenessProfile& profile,
                  const BaitPlacement& baits);
SimulationRun run(const SimConfig& config, const ModelParams& params, const AttractivenessProfile& profile,
                  const BaitPlacement& baits, std::uint64_t seed);
/// Homogeneous mixing is the single class k = 1 with uniform baits.
SimulationRun run_homogeneous(const SimConfig& config, const ModelParams& params);

struct MeanTrajectory {
    std::vector<std::string> columns;
    std::vector<double> times;
    std::vector<std::vector<double>> mean;
    std::vector<std::vector<double>> stddev; // population standard deviation across runs
    /// Pointwise mean over runs that did not go extinct (empty if none took off).
    std::vector<std::vector<double>> takeoff_mean;
    long n_runs = 0;
    long takeoff_runs = 0;
    std::uint64_t master_seed = 0;

    std::vector<double> mean_series(const std::string& name) const;
    std::vector<double> takeoff_series(const std::string& name) const;
};

/// Runs config.n_runs independent realizations (seeds from run_seed) and
/// reduces them in run order, so the result is independent of worker count.
MeanTrajectory run_ensemble(const SimConfig& config, const ModelParams& params, const AttractivenessProfile& profile,
                            const BaitPlacement& baits);

void write_mean_trajectory_csv(std::ostream& out, const MeanTrajectory& mean);
MeanTrajectory read_mean_trajectory_csv(std::istream& in);

} // namespace sugarbait
