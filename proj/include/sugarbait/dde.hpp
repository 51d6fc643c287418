#pragma once

#include "sugarbait/allocation.hpp"
#include "sugarbait/params.hpp"
#include "sugarbait/profile.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sugarbait {

/// Proportions of the homogeneous model: infected hosts, infectious and removed mosquitoes.
struct HomogeneousState {
    double i_h = 0.0;
    double i_m = 0.0;
    double r_m = 0.0;
};

struct HeterogeneousState {
    std::vector<double> i_h_by_class; // I_h^i / N_i
    double i_m = 0.0;
    double r_m = 0.0;
    double phi = 0.0;                 // sum_i k_i I_h^i / N
};

/// sum_i k_i P(i) i_h^i
double attractiveness_weighted_infection(const AttractivenessProfile& profile, std::span<const double> i_h_by_class);

/// Fills in phi from the class proportions.
HeterogeneousState make_heterogeneous_state(const AttractivenessProfile& profile, std::vector<double> i_h_by_class,
                                            double i_m, double r_m);

/// `count` infected hosts placed in class `cls`, everything else clear.
HeterogeneousState seeded_heterogeneous_state(const AttractivenessProfile& profile, std::size_t cls, long count);

struct Trajectory {
    double dt = 0.0;
    std::vector<std::string> columns;
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<double> final_state;
    double final_time = 0.0;
    bool steady_state_reached = false;
    std::size_t clamp_events = 0;

    std::size_t column(const std::string& name) const;
    std::vector<double> series(const std::string& name) const;
};

struct IntegrationOptions {
    double dt = 0.01;
    double t_end = 1000.0;
    /// Spacing of recorded samples; 0 records every step. Must be a multiple of dt.
    double record_interval = 0.0;
    double steady_window = 100.0;
    double steady_tol = 1e-8;
};

/// Right-hand side of the homogeneous proportion system given the current
/// state and the state one incubation period earlier.
HomogeneousState homogeneous_rhs(const ModelParams& params, const HomogeneousState& now,
                                 const HomogeneousState& delayed);

/// Proportion form of the homogeneous DDE, forward Euler, constant history on [-tau, 0].
/// Components are clamped to [0, 1] (and i_m + r_m <= 1) after every step; clamped
/// steps are counted in Trajectory::clamp_events.
Trajectory integrate_homogeneous(const ModelParams& params, const HomogeneousState& init,
                                 const IntegrationOptions& options);

/// Per-class heterogeneous system with uniformly placed baits (weight x from params).
Trajectory integrate_heterogeneous(const ModelParams& params, const AttractivenessProfile& profile,
                                   const HeterogeneousState& init, const IntegrationOptions& options);

/// Per-class heterogeneous system with targeted baits (weight y from the allocation).
Trajectory integrate_heterogeneous(const ModelParams& params, const AttractivenessProfile& profile,
                                   const BaitAllocation& alloc, const HeterogeneousState& init,
                                   const IntegrationOptions& options);

/// Same system with an explicit attractiveness-weighted bait density.
Trajectory integrate_heterogeneous_weighted(const ModelParams& params, const AttractivenessProfile& profile,
                                            double bait_weight, const HeterogeneousState& init,
                                            const IntegrationOptions& options);

/// True iff every recorded component varies by less than `tol` over the trailing window.
bool detect_steady_state(const Trajectory& traj, double window = 100.0, double tol = 1e-8);

/// Largest |central-difference phi' - (a b m p i_m (khat - sum k_i^2 P(i) i_h^i) / (p kbar + q w) - mu phi)|
/// over the interior samples of a per-step heterogeneous trajectory.
double phi_equation_residual(const ModelParams& params, const AttractivenessProfile& profile, double bait_weight,
                             const Trajectory& traj);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& comments = {});
Trajectory read_trajectory_csv(std::istream& in);

} // namespace sugarbait
