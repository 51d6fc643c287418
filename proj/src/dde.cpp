#include "sugarbait/dde.hpp"

#include "sugarbait/textio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sugarbait {

double attractiveness_weighted_infection(const AttractivenessProfile& profile, std::span<const double> i_h_by_class)
{
    if (i_h_by_class.size() != profile.size())
        throw std::invalid_argument("class state dimension differs from profile");
    double phi = 0.0;
    for (std::size_t i = 0; i < i_h_by_class.size(); ++i)
        phi += profile[i].k * profile.share(i) * i_h_by_class[i];
    return phi;
}

HeterogeneousState make_heterogeneous_state(const AttractivenessProfile& profile, std::vector<double> i_h_by_class,
                                            double i_m, double r_m)
{
    HeterogeneousState state;
    state.phi = attractiveness_weighted_infection(profile, i_h_by_class);
    state.i_h_by_class = std::move(i_h_by_class);
    state.i_m = i_m;
    state.r_m = r_m;
    return state;
}

HeterogeneousState seeded_heterogeneous_state(const AttractivenessProfile& profile, std::size_t cls, long count)
{
    if (cls >= profile.size())
        throw std::out_of_range("seed class out of range");
    if (count < 0 || count > profile[cls].count)
        throw std::invalid_argument("seed count exceeds the class population");
    std::vector<double> i_h(profile.size(), 0.0);
    if (count > 0)
        i_h[cls] = static_cast<double>(count) / static_cast<double>(profile[cls].count);
    return make_heterogeneous_state(profile, std::move(i_h), 0.0, 0.0);
}

std::size_t Trajectory::column(const std::string& name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
        throw std::out_of_range("trajectory has no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> Trajectory::series(const std::string& name) const
{
    const auto idx = column(name);
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states)
        out.push_back(s[idx]);
    return out;
}

namespace {

long grid_steps(double span, double dt, const char* what)
{
    const double ratio = span / dt;
    const double steps = std::round(ratio);
    if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, steps))
        throw std::invalid_argument(std::string(what) + " is not a multiple of dt");
    return static_cast<long>(steps);
}

struct StepGrid {
    long steps = 0;
    long delay_steps = 0;
    long stride = 1;
};

StepGrid make_grid(const ModelParams& params, const IntegrationOptions& options)
{
    if (!(options.dt > 0.0) || !std::isfinite(options.dt))
        throw std::invalid_argument("dt must be positive");
    if (!(options.t_end >= 0.0) || !std::isfinite(options.t_end))
        throw std::invalid_argument("t_end must be nonnegative");

    // tau = 0 is accepted here as the no-delay (ODE) limit
    auto report = validate(params);
    if (params.incubation_days == 0.0)
        std::erase_if(report.violations, [](const Violation& v) { return v.field == "incubation_days"; });
    if (!report.ok())
        throw std::invalid_argument("invalid model parameters: " + report.to_string());

    StepGrid grid;
    if (params.incubation_days > 0.0) {
        if (options.dt >= params.incubation_days)
            throw std::invalid_argument("dt must be smaller than the incubation period");
        grid.delay_steps = grid_steps(params.incubation_days, options.dt, "incubation period");
    }
    grid.steps = static_cast<long>(std::round(options.t_end / options.dt));
    if (options.record_interval > 0.0)
        grid.stride = std::max(1L, grid_steps(options.record_interval, options.dt, "record interval"));
    return grid;
}

void check_proportion(double v, const char* what)
{
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw std::invalid_argument(std::string(what) + " must be a proportion in [0,1]");
}

bool clamp_unit(double& v)
{
    if (v < 0.0) {
        v = 0.0;
        return true;
    }
    if (v > 1.0) {
        v = 1.0;
        return true;
    }
    return false;
}

void require_finite(double v)
{
    if (!std::isfinite(v))
        throw std::runtime_error("non-finite state encountered during integration");
}

void finish(Trajectory& traj, const IntegrationOptions& options)
{
    const double span = traj.times.empty() ? 0.0 : traj.times.back() - traj.times.front();
    traj.steady_state_reached = span >= options.steady_window
                                && detect_steady_state(traj, options.steady_window, options.steady_tol);
}

} // namespace

HomogeneousState homogeneous_rhs(const ModelParams& params, const HomogeneousState& now,
                                 const HomogeneousState& delayed)
{
    const double a = params.bite_rate;
    const double p = params.blood_preference;
    const double q = params.sugar_preference;
    const double x = params.bait_density;
    const double meal_weight = p + q * x;
    const double survival =
        std::exp(-(params.turnover_rate + a * params.efficacy * q * x / meal_weight) * params.incubation_days);

    const double host_coef = a * params.p_infect_human * params.mosquito_density * p / meal_weight;
    const double vector_coef = a * params.p_infect_mosquito * p * survival / meal_weight;
    const double bait_coef = a * params.efficacy * q * x / meal_weight;

    HomogeneousState rate;
    rate.i_h = host_coef * (1.0 - now.i_h) * now.i_m - params.recovery_rate * now.i_h;
    rate.i_m = vector_coef * (1.0 - delayed.i_m - delayed.r_m) * delayed.i_h - params.turnover_rate * now.i_m;
    rate.r_m = bait_coef * (1.0 - now.i_m - now.r_m) - (params.reversion_rate + params.turnover_rate) * now.r_m;
    return rate;
}

Trajectory integrate_homogeneous(const ModelParams& params, const HomogeneousState& init,
                                 const IntegrationOptions& options)
{
    const auto grid = make_grid(params, options);
    check_proportion(init.i_h, "initial i_h");
    check_proportion(init.i_m, "initial i_m");
    check_proportion(init.r_m, "initial r_m");
    if (init.i_m + init.r_m > 1.0)
        throw std::invalid_argument("initial i_m + r_m exceeds 1");

    Trajectory traj;
    traj.dt = options.dt;
    traj.columns = {"i_h", "i_m", "r_m"};
    const auto record = [&](double t, const HomogeneousState& s) {
        traj.times.push_back(t);
        traj.states.push_back({s.i_h, s.i_m, s.r_m});
    };

    std::vector<HomogeneousState> history(static_cast<std::size_t>(grid.delay_steps), init);
    HomogeneousState current = init;
    record(0.0, current);

    for (long n = 0; n < grid.steps; ++n) {
        HomogeneousState delayed = current;
        if (grid.delay_steps > 0) {
            auto& slot = history[static_cast<std::size_t>(n % grid.delay_steps)];
            delayed = slot;
            slot = current;
        }
        const auto rate = homogeneous_rhs(params, current, delayed);
        HomogeneousState next{current.i_h + options.dt * rate.i_h, current.i_m + options.dt * rate.i_m,
                              current.r_m + options.dt * rate.r_m};
        require_finite(next.i_h);
        require_finite(next.i_m);
        require_finite(next.r_m);

        bool clamped = clamp_unit(next.i_h);
        clamped |= clamp_unit(next.i_m);
        clamped |= clamp_unit(next.r_m);
        if (next.i_m + next.r_m > 1.0) {
            next.r_m = 1.0 - next.i_m;
            clamped = true;
        }
        traj.clamp_events += clamped ? 1 : 0;
        current = next;

        if ((n + 1) % grid.stride == 0)
            record(static_cast<double>(n + 1) * options.dt, current);
    }

    traj.final_state = {current.i_h, current.i_m, current.r_m};
    traj.final_time = static_cast<double>(grid.steps) * options.dt;
    finish(traj, options);
    return traj;
}

Trajectory integrate_heterogeneous_weighted(const ModelParams& params, const AttractivenessProfile& profile,
                                            double bait_weight, const HeterogeneousState& init,
                                            const IntegrationOptions& options)
{
    const auto grid = make_grid(params, options);
    const std::size_t classes = profile.size();
    if (init.i_h_by_class.size() != classes)
        throw std::invalid_argument("initial state has " + std::to_string(init.i_h_by_class.size())
                                    + " classes but profile has " + std::to_string(classes));
    for (double v : init.i_h_by_class)
        check_proportion(v, "initial i_h");
    check_proportion(init.i_m, "initial i_m");
    check_proportion(init.r_m, "initial r_m");
    if (init.i_m + init.r_m > 1.0)
        throw std::invalid_argument("initial i_m + r_m exceeds 1");
    if (!(bait_weight >= 0.0))
        throw std::invalid_argument("bait weight must be >= 0");

    const double a = params.bite_rate;
    const double p = params.blood_preference;
    const double q = params.sugar_preference;
    const double k_mean = profile.k_mean();
    const double meal_weight = p * k_mean + q * bait_weight;
    const double survival =
        std::exp(-(params.turnover_rate + a * params.efficacy * q * bait_weight / meal_weight) * params.incubation_days);
    const double host_coef = a * params.p_infect_human * params.mosquito_density * p / meal_weight;
    const double vector_coef = a * params.p_infect_mosquito * p * survival / meal_weight;
    const double bait_coef = a * params.efficacy * q * bait_weight / meal_weight;
    const double mu = params.recovery_rate;
    const double delta = params.turnover_rate;
    const double theta = params.reversion_rate;

    std::vector<double> weights(classes);
    for (std::size_t i = 0; i < classes; ++i)
        weights[i] = profile[i].k * profile.share(i);

    Trajectory traj;
    traj.dt = options.dt;
    for (std::size_t i = 0; i < classes; ++i)
        traj.columns.push_back("i_h[" + std::to_string(i) + "]");
    traj.columns.insert(traj.columns.end(), {"i_m", "r_m", "phi", "i_h_total"});

    std::vector<double> i_h = init.i_h_by_class;
    double i_m = init.i_m;
    double r_m = init.r_m;
    auto weighted = [&] {
        double phi = 0.0;
        for (std::size_t i = 0; i < classes; ++i)
            phi += weights[i] * i_h[i];
        return phi;
    };
    auto record = [&](double t, double phi) {
        std::vector<double> row(i_h);
        double total = 0.0;
        for (std::size_t i = 0; i < classes; ++i)
            total += profile.share(i) * i_h[i];
        row.insert(row.end(), {i_m, r_m, phi, total});
        traj.times.push_back(t);
        traj.states.push_back(std::move(row));
    };

    struct Delayed {
        double phi, i_m, r_m;
    };
    double phi = weighted();
    std::vector<Delayed> history(static_cast<std::size_t>(grid.delay_steps), Delayed{phi, i_m, r_m});
    record(0.0, phi);

    std::vector<double> next_h(classes);
    for (long n = 0; n < grid.steps; ++n) {
        Delayed delayed{phi, i_m, r_m};
        if (grid.delay_steps > 0) {
            auto& slot = history[static_cast<std::size_t>(n % grid.delay_steps)];
            delayed = slot;
            slot = Delayed{phi, i_m, r_m};
        }

        bool clamped = false;
        for (std::size_t i = 0; i < classes; ++i) {
            const double rate = host_coef * profile[i].k * (1.0 - i_h[i]) * i_m - mu * i_h[i];
            next_h[i] = i_h[i] + options.dt * rate;
            require_finite(next_h[i]);
            clamped |= clamp_unit(next_h[i]);
        }
        const double rate_m = vector_coef * (1.0 - delayed.i_m - delayed.r_m) * delayed.phi - delta * i_m;
        const double rate_r = bait_coef * (1.0 - i_m - r_m) - (theta + delta) * r_m;
        double next_m = i_m + options.dt * rate_m;
        double next_r = r_m + options.dt * rate_r;
        require_finite(next_m);
        require_finite(next_r);
        clamped |= clamp_unit(next_m);
        clamped |= clamp_unit(next_r);
        if (next_m + next_r > 1.0) {
            next_r = 1.0 - next_m;
            clamped = true;
        }
        traj.clamp_events += clamped ? 1 : 0;

        i_h.swap(next_h);
        i_m = next_m;
        r_m = next_r;
        phi = weighted();

        if ((n + 1) % grid.stride == 0)
            record(static_cast<double>(n + 1) * options.dt, phi);
    }

    traj.final_state = i_h;
    double total = 0.0;
    for (std::size_t i = 0; i < classes; ++i)
        total += profile.share(i) * i_h[i];
    traj.final_state.insert(traj.final_state.end(), {i_m, r_m, phi, total});
    traj.final_time = static_cast<double>(grid.steps) * options.dt;
    finish(traj, options);
    return traj;
}

Trajectory integrate_heterogeneous(const ModelParams& params, const AttractivenessProfile& profile,
                                   const HeterogeneousState& init, const IntegrationOptions& options)
{
    return integrate_heterogeneous_weighted(params, profile, params.bait_density, init, options);
}

Trajectory integrate_heterogeneous(const ModelParams& params, const AttractivenessProfile& profile,
                                   const BaitAllocation& alloc, const HeterogeneousState& init,
                                   const IntegrationOptions& options)
{
    if (alloc.baits_by_class.size() != profile.size())
        throw std::invalid_argument("allocation class count differs from profile");
    return integrate_heterogeneous_weighted(params, profile, alloc.effective_y, init, options);
}

bool detect_steady_state(const Trajectory& traj, double window, double tol)
{
    if (traj.times.empty())
        throw std::invalid_argument("empty trajectory");
    const double t_last = traj.times.back();
    if (window > t_last - traj.times.front() + 1e-12)
        throw std::invalid_argument("steady-state window exceeds the trajectory span");

    const double t_from = t_last - window - 1e-9 * std::max(1.0, window);
    const auto first = std::lower_bound(traj.times.begin(), traj.times.end(), t_from);
    const auto begin = static_cast<std::size_t>(first - traj.times.begin());
    const std::size_t dims = traj.states.front().size();
    for (std::size_t d = 0; d < dims; ++d) {
        double lo = traj.states[begin][d];
        double hi = lo;
        for (std::size_t j = begin; j < traj.states.size(); ++j) {
            lo = std::min(lo, traj.states[j][d]);
            hi = std::max(hi, traj.states[j][d]);
        }
        if (!(hi - lo < tol))
            return false;
    }
    return true;
}

double phi_equation_residual(const ModelParams& params, const AttractivenessProfile& profile, double bait_weight,
                             const Trajectory& traj)
{
    const std::size_t classes = profile.size();
    if (traj.columns.size() != classes + 4)
        throw std::invalid_argument("not a heterogeneous trajectory for this profile");
    if (traj.states.size() < 3)
        throw std::invalid_argument("trajectory too short for a central difference");

    const double p = params.blood_preference;
    const double coef = params.bite_rate * params.p_infect_human * params.mosquito_density * p
                        / (p * profile.k_mean() + params.sugar_preference * bait_weight);
    const std::size_t im_col = classes;
    const std::size_t phi_col = classes + 2;

    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < traj.states.size(); ++j) {
        const auto& s = traj.states[j];
        double second = 0.0;
        for (std::size_t i = 0; i < classes; ++i)
            second += profile[i].k * profile[i].k * profile.share(i) * s[i];
        const double rhs = coef * s[im_col] * (profile.k_second() - second) - params.recovery_rate * s[phi_col];
        const double slope =
            (traj.states[j + 1][phi_col] - traj.states[j - 1][phi_col]) / (traj.times[j + 1] - traj.times[j - 1]);
        worst = std::max(worst, std::abs(slope - rhs));
    }
    return worst;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& comments)
{
    CsvTable table;
    table.comments = comments;
    table.comments.push_back(" dt " + format_double(traj.dt) + " clamp_events " + std::to_string(traj.clamp_events)
                             + " steady_state " + (traj.steady_state_reached ? "1" : "0"));
    table.header.push_back("time");
    table.header.insert(table.header.end(), traj.columns.begin(), traj.columns.end());
    table.rows.reserve(traj.states.size());
    for (std::size_t j = 0; j < traj.states.size(); ++j) {
        std::vector<double> row{traj.times[j]};
        row.insert(row.end(), traj.states[j].begin(), traj.states[j].end());
        table.rows.push_back(std::move(row));
    }
    write_csv(out, table);
}

Trajectory read_trajectory_csv(std::istream& in)
{
    const auto table = read_csv(in);
    if (table.header.empty() || table.header.front() != "time")
        throw std::invalid_argument("trajectory CSV must start with a time column");
    Trajectory traj;
    traj.columns.assign(table.header.begin() + 1, table.header.end());
    for (const auto& row : table.rows) {
        traj.times.push_back(row.front());
        traj.states.emplace_back(row.begin() + 1, row.end());
    }
    if (traj.times.size() >= 2)
        traj.dt = traj.times[1] - traj.times[0];
    if (!traj.states.empty()) {
        traj.final_state = traj.states.back();
        traj.final_time = traj.times.back();
    }
    return traj;
}

} // namespace sugarbait
