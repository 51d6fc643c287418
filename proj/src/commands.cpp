#include "sugarbait/commands.hpp"

#include "sugarbait/root_finding.hpp"
#include "sugarbait/svg.hpp"
#include "sugarbait/textio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace sugarbait {

namespace {

bool want_csv(OutputFormat f) { return f != OutputFormat::Svg; }
bool want_svg(OutputFormat f) { return f != OutputFormat::Csv; }

std::filesystem::path output_path(const Scenario& sc, const CommandOptions& options, const std::string& suffix)
{
    std::filesystem::create_directories(options.out_dir);
    return options.out_dir / ((sc.name.empty() ? std::string("scenario") : sc.name) + suffix);
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    return out;
}

BaitScenario bait_scenario(const Scenario& sc, const AttractivenessProfile& profile)
{
    if (sc.mode == MixingMode::Homogeneous)
        return {ModelVariant::Homogeneous, nullptr};
    return {sc.bait.mode == BaitMode::Targeted ? ModelVariant::HeterogeneousTargeted : ModelVariant::HeterogeneousUniform,
            &profile};
}

void print_r0(std::ostream& report, const R0Result& r)
{
    report << "scenario      " << to_string(r.variant) << '\n';
    report << "r0            " << format_double(r.r0) << '\n';
    report << "lambda_eff    " << format_double(r.lambda_eff) << '\n';
    report << "removed_frac  " << format_double(r.removed_frac) << '\n';
    report << "bait_weight   " << format_double(r.bait_weight) << '\n';
    report << "verdict       " << (r.r0 > 1.0 ? "R0 > 1 (outbreak possible)" : "R0 <= 1 (no outbreak)") << '\n';
}

std::string short_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void set_checked(ModelParams& params, const std::string& key, double value)
{
    if (!set_parameter(params, key, value))
        throw std::invalid_argument("unknown parameter '" + key + "'");
}

} // namespace

Scenario with_overrides(Scenario scenario, const CommandOptions& options)
{
    if (options.seed)
        scenario.sim.rng_seed = *options.seed;
    if (options.runs)
        scenario.sim.n_runs = *options.runs;
    if (options.dt) {
        scenario.sim.dt = *options.dt;
        scenario.integrate.dt = *options.dt;
    }
    return scenario;
}

R0Result scenario_r0(const Scenario& scenario, const AttractivenessProfile& profile)
{
    require_valid(scenario.params);
    if (scenario.mode == MixingMode::Homogeneous)
        return r0_homogeneous(scenario.params);
    if (scenario.bait.mode == BaitMode::Targeted)
        return r0_targeted(scenario.params, profile, build_allocation(scenario, profile));
    return r0_heterogeneous(scenario.params, profile);
}

R0Result cmd_r0(const Scenario& scenario, std::ostream& report)
{
    const auto profile = build_profile(scenario);
    const auto result = scenario_r0(scenario, profile);
    if (scenario.mode == MixingMode::Heterogeneous) {
        report << "classes       " << profile.size() << " (" << profile.populated_classes() << " populated)\n";
        report << "k_mean        " << format_double(profile.k_mean()) << '\n';
        report << "kappa         " << format_double(profile.kappa()) << '\n';
    }
    print_r0(report, result);
    if (scenario.bait.mode == BaitMode::Targeted && scenario.bait.rule == ConstraintRule::Proportional)
        report << "r0_closed_form " << format_double(r0_proportional_targeted(scenario.params, profile).r0)
               << "  (y = x kappa)\n";

    if (scenario.sweep) {
        report << "# " << scenario.sweep->variable << " r0\n";
        for (double v : scenario.sweep->grid) {
            Scenario point = scenario;
            set_checked(point.params, scenario.sweep->variable, v);
            report << format_double(v) << ' ' << format_double(scenario_r0(point, profile).r0) << '\n';
        }
    }
    return result;
}

SweepResult cmd_sweep(const Scenario& scenario, const CommandOptions& options, std::ostream& report)
{
    if (!scenario.sweep || scenario.sweep->grid.empty())
        throw std::invalid_argument("sweep needs a non-empty sweep.grid");
    const auto& sweep = *scenario.sweep;

    std::vector<double> series_values = sweep.series_values;
    const bool has_series_var = !sweep.series_variable.empty();
    if (!has_series_var)
        series_values = {std::nan("")};

    const auto base_profile = build_profile(scenario);

    SweepResult result;
    result.variable = sweep.variable;
    for (double sv : series_values) {
        for (const auto& variant : sweep.variants) {
            Scenario s = scenario;
            if (has_series_var)
                set_checked(s.params, sweep.series_variable, sv);

            AttractivenessProfile profile = base_profile;
            bool closed_form_targeted = false;
            if (variant == "homogeneous") {
                s.mode = MixingMode::Homogeneous;
                s.bait.mode = BaitMode::Uniform;
                profile = single_class_profile(s.params.n_hosts);
            } else if (variant == "uniform") {
                s.mode = MixingMode::Heterogeneous;
                s.bait.mode = BaitMode::Uniform;
            } else if (variant == "targeted") {
                s.mode = MixingMode::Heterogeneous;
                s.bait.mode = BaitMode::Targeted;
            } else if (variant == "poisson_matched") {
                s.mode = MixingMode::Heterogeneous;
                s.bait.mode = BaitMode::Uniform;
                profile = poisson_profile_matched(base_profile.k_mean(), s.profile.poisson_classes, s.params.n_hosts);
            }
            closed_form_targeted = s.mode == MixingMode::Heterogeneous && s.bait.mode == BaitMode::Targeted
                                   && s.bait.rule == ConstraintRule::Proportional;

            auto evaluate = [&](double v) {
                Scenario point = s;
                set_checked(point.params, sweep.variable, v);
                if (point.bait.mode == BaitMode::Targeted && sweep.variable == "bait_density")
                    point.bait.budget.reset();
                require_valid(point.params);
                return closed_form_targeted ? r0_proportional_targeted(point.params, profile)
                                            : scenario_r0(point, profile);
            };

            SweepSeries series;
            series.label = variant;
            if (has_series_var)
                series.label += " " + sweep.series_variable + "=" + short_number(sv);
            for (double v : sweep.grid) {
                series.values.push_back(v);
                series.results.push_back(evaluate(v));
            }
            for (std::size_t i = 0; i + 1 < series.results.size(); ++i) {
                if (series.results[i].r0 > 1.0 && series.results[i + 1].r0 <= 1.0) {
                    series.crossing = bisect([&](double v) { return evaluate(v).r0 - 1.0; }, series.values[i],
                                             series.values[i + 1], 1e-9 * std::max(1.0, std::abs(series.values[i + 1])));
                    break;
                }
            }
            report << series.label << ": crossing "
                   << (series.crossing ? format_double(*series.crossing) : std::string("none in grid")) << '\n';
            result.series.push_back(std::move(series));
        }
    }

    if (want_csv(options.format)) {
        CsvTable table;
        table.comments.push_back(" scenario " + scenario.name);
        for (std::size_t i = 0; i < result.series.size(); ++i) {
            const auto& s = result.series[i];
            table.comments.push_back(" series " + std::to_string(i) + " " + s.label + " crossing "
                                     + (s.crossing ? format_double(*s.crossing) : std::string("none")));
        }
        table.header = {"series", sweep.variable, "r0", "lambda_eff", "removed_frac"};
        for (std::size_t i = 0; i < result.series.size(); ++i) {
            const auto& s = result.series[i];
            for (std::size_t j = 0; j < s.values.size(); ++j)
                table.rows.push_back({static_cast<double>(i), s.values[j], s.results[j].r0, s.results[j].lambda_eff,
                                      s.results[j].removed_frac});
        }
        const auto path = output_path(scenario, options, "_sweep.csv");
        auto out = open_output(path);
        write_csv(out, table);
        result.written.push_back(path);
    }
    if (want_svg(options.format)) {
        LineChart chart;
        chart.title = "Reproductive number vs " + sweep.variable;
        chart.x_label = sweep.variable;
        chart.y_label = "R0";
        chart.reference_y = 1.0;
        chart.log_y = true;
        for (const auto& s : result.series) {
            ChartSeries cs{s.label, s.values, {}, false};
            for (const auto& r : s.results)
                cs.ys.push_back(r.r0);
            chart.series.push_back(std::move(cs));
            if (s.crossing)
                chart.markers.emplace_back(*s.crossing, 1.0);
        }
        const auto path = output_path(scenario, options, "_sweep.svg");
        auto out = open_output(path);
        out << render_svg(chart);
        result.written.push_back(path);
    }
    return result;
}

Trajectory scenario_trajectory(const Scenario& scenario, const IntegrationOptions& options)
{
    const auto& params = scenario.params;
    if (scenario.mode == MixingMode::Homogeneous) {
        HomogeneousState init;
        init.i_h = scenario.integrate.initial_i_h.value_or(static_cast<double>(scenario.sim.initial_infected_hosts)
                                                           / static_cast<double>(params.n_hosts));
        init.i_m = scenario.integrate.initial_i_m;
        init.r_m = scenario.integrate.initial_r_m;
        return integrate_homogeneous(params, init, options);
    }
    const auto profile = build_profile(scenario);
    const std::size_t cls = scenario.sim.initial_class.value_or(profile.highest_populated_class());
    auto init = seeded_heterogeneous_state(profile, cls, scenario.sim.initial_infected_hosts);
    init.i_m = scenario.integrate.initial_i_m;
    init.r_m = scenario.integrate.initial_r_m;
    if (scenario.bait.mode == BaitMode::Targeted)
        return integrate_heterogeneous(params, profile, build_allocation(scenario, profile), init, options);
    return integrate_heterogeneous(params, profile, init, options);
}

Trajectory cmd_integrate(const Scenario& scenario, const CommandOptions& options, std::ostream& report)
{
    IntegrationOptions io;
    io.dt = scenario.integrate.dt;
    io.t_end = scenario.integrate.t_end;
    io.record_interval = scenario.integrate.record_interval;
    auto traj = scenario_trajectory(scenario, io);

    report << "steps         " << std::lround(io.t_end / io.dt) << '\n';
    report << "clamp_events  " << traj.clamp_events << '\n';
    report << "steady_state  " << (traj.steady_state_reached ? "yes" : "no") << '\n';
    for (std::size_t c = 0; c < traj.columns.size(); ++c) {
        if (traj.columns[c].find('[') == std::string::npos)
            report << "final " << traj.columns[c] << " = " << format_double(traj.final_state[c]) << '\n';
    }

    const std::vector<std::string> comments{" scenario " + scenario.name};
    if (want_csv(options.format)) {
        auto out = open_output(output_path(scenario, options, "_trajectory.csv"));
        write_trajectory_csv(out, traj, comments);
    }
    if (want_svg(options.format)) {
        LineChart chart;
        chart.title = "Deterministic trajectory";
        chart.x_label = "time (days)";
        chart.y_label = "proportion";
        for (const char* name : {"i_h", "i_h_total", "i_m", "r_m"}) {
            if (std::find(traj.columns.begin(), traj.columns.end(), name) != traj.columns.end())
                chart.series.push_back({name, traj.times, traj.series(name), false});
        }
        auto out = open_output(output_path(scenario, options, "_trajectory.svg"));
        out << render_svg(chart);
    }
    return traj;
}

SimulateResult cmd_simulate(const Scenario& scenario, const CommandOptions& options, std::ostream& report)
{
    const auto profile = build_profile(scenario);
    const auto baits = build_bait_placement(scenario, profile);

    SimulateResult result;
    result.warnings = check_sim_config(scenario.sim, scenario.params);
    for (const auto& w : result.warnings)
        report << "warning: " << w << '\n';
    result.ensemble = run_ensemble(scenario.sim, scenario.params, profile, baits);

    IntegrationOptions io;
    io.dt = scenario.sim.dt;
    io.t_end = scenario.sim.t_end;
    io.record_interval = scenario.sim.output_interval;
    result.deterministic = scenario_trajectory(scenario, io);

    const auto dde = result.deterministic.series(scenario.mode == MixingMode::Homogeneous ? "i_h" : "i_h_total");
    const auto mean = result.ensemble.mean_series("i_h");
    for (std::size_t i = 0; i < mean.size() && i < dde.size(); ++i)
        result.max_deviation = std::max(result.max_deviation, std::abs(mean[i] - dde[i]));
    if (result.ensemble.takeoff_runs > 0) {
        const auto took = result.ensemble.takeoff_series("i_h");
        for (std::size_t i = 0; i < took.size() && i < dde.size(); ++i)
            result.max_takeoff_deviation = std::max(result.max_takeoff_deviation, std::abs(took[i] - dde[i]));
    }

    report << "runs          " << result.ensemble.n_runs << " (" << result.ensemble.takeoff_runs << " took off)\n";
    report << "master_seed   " << result.ensemble.master_seed << '\n';
    report << "max |mean i_h - DDE i_h|          " << format_double(result.max_deviation) << '\n';
    report << "max |takeoff mean i_h - DDE i_h|  " << format_double(result.max_takeoff_deviation) << '\n';

    if (want_csv(options.format)) {
        auto out = open_output(output_path(scenario, options, "_simulate.csv"));
        write_mean_trajectory_csv(out, result.ensemble);
    }
    if (want_svg(options.format)) {
        LineChart chart;
        chart.title = "Ensemble mean vs deterministic solution";
        chart.x_label = "time (days)";
        chart.y_label = "infected host proportion";
        chart.series.push_back({"simulation mean", result.ensemble.times, mean, false});
        if (result.ensemble.takeoff_runs > 0)
            chart.series.push_back({"mean (took off)", result.ensemble.times, result.ensemble.takeoff_series("i_h"), true});
        chart.series.push_back({"DDE", result.deterministic.times, dde, false});
        auto out = open_output(output_path(scenario, options, "_simulate.svg"));
        out << render_svg(chart);
    }
    return result;
}

AllocateResult cmd_allocate(const Scenario& scenario, const CommandOptions& options, std::ostream& report)
{
    const auto profile = build_profile(scenario);
    const auto constraints = build_constraints(scenario, profile);
    const long budget = bait_budget(scenario);

    AllocateResult result;
    result.allocation = greedy_allocate(profile, constraints, budget);
    result.targeted = r0_targeted(scenario.params, profile, result.allocation);
    result.uniform = r0_heterogeneous(scenario.params, profile);

    report << "# k C B\n";
    for (std::size_t i = 0; i < profile.size(); ++i)
        report << format_double(profile[i].k) << ' ' << constraints[i] << ' ' << result.allocation.baits_by_class[i]
               << '\n';
    report << "budget        " << budget << " (placed " << result.allocation.total_baits() << ")\n";
    report << "y             " << format_double(result.allocation.effective_y) << '\n';
    report << "r0_targeted   " << format_double(result.targeted.r0) << '\n';
    report << "r0_uniform    " << format_double(result.uniform.r0) << '\n';

    double size = 1.0;
    for (auto c : constraints)
        size *= static_cast<double>(c) + 1.0;
    if (size <= kBruteForceLimit) {
        result.oracle = brute_force_allocate(profile, constraints, budget);
        const bool agrees = result.oracle->best.baits_by_class == result.allocation.baits_by_class;
        report << "oracle        objective " << format_double(result.oracle->objective) << ", unique "
               << (result.oracle->unique ? "yes" : "no") << ", agrees " << (agrees ? "yes" : "no") << '\n';
    } else {
        report << "oracle        skipped (instance too large)\n";
    }

    if (want_csv(options.format)) {
        auto out = open_output(output_path(scenario, options, "_allocation.txt"));
        write_allocation_table(out, profile, result.allocation);
    }
    return result;
}

StabilityVerdict cmd_stability(const Scenario& scenario, std::ostream& report)
{
    require_valid(scenario.params);
    const auto profile = build_profile(scenario);
    const auto verdict = stability_probe(scenario.params, bait_scenario(scenario, profile));

    report << "r0            " << format_double(verdict.r0) << '\n';
    report << "F(0)          " << format_double(verdict.f_at_zero) << '\n';
    report << "bracket       (0, " << format_double(verdict.lambda_max) << "]\n";
    report << "positive root " << (verdict.positive_root ? format_double(*verdict.positive_root) : std::string("none"))
           << '\n';
    report << "linear roots ";
    for (double r : verdict.linear_factor_roots)
        report << ' ' << format_double(r);
    report << '\n';
    report << "verdict       " << to_string(verdict.verdict) << " disease-free equilibrium\n";
    const bool agrees = (verdict.verdict == Stability::Unstable) == (verdict.r0 > 1.0);
    report << "agrees with R0 threshold: " << (agrees ? "yes" : "no") << '\n';
    return verdict;
}

} // namespace sugarbait
