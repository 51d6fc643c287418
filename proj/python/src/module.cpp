#include "sugarbait/allocation.hpp"
#include "sugarbait/analytics.hpp"
#include "sugarbait/commands.hpp"
#include "sugarbait/dde.hpp"
#include "sugarbait/params.hpp"
#include "sugarbait/profile.hpp"
#include "sugarbait/scenario.hpp"
#include "sugarbait/stochastic.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace sugarbait;

namespace {

py::dict trajectory_dict(const Trajectory& traj)
{
    py::dict columns;
    for (const auto& name : traj.columns)
        columns[py::str(name)] = traj.series(name);
    py::dict out;
    out["dt"] = traj.dt;
    out["times"] = traj.times;
    out["columns"] = columns;
    out["steady_state_reached"] = traj.steady_state_reached;
    out["clamp_events"] = traj.clamp_events;
    return out;
}

py::dict ensemble_dict(const MeanTrajectory& mean)
{
    py::dict means, stds, takeoff;
    for (const auto& name : mean.columns) {
        means[py::str(name)] = mean.mean_series(name);
        if (mean.takeoff_runs > 0)
            takeoff[py::str(name)] = mean.takeoff_series(name);
    }
    for (std::size_t c = 0; c < mean.columns.size(); ++c) {
        std::vector<double> col;
        for (const auto& row : mean.stddev)
            col.push_back(row[c]);
        stds[py::str(mean.columns[c])] = col;
    }
    py::dict out;
    out["times"] = mean.times;
    out["mean"] = means;
    out["std"] = stds;
    out["takeoff_mean"] = takeoff;
    out["n_runs"] = mean.n_runs;
    out["takeoff_runs"] = mean.takeoff_runs;
    out["master_seed"] = mean.master_seed;
    return out;
}

IntegrationOptions integration_options(double dt, double t_end, double record_interval)
{
    IntegrationOptions o;
    o.dt = dt;
    o.t_end = t_end;
    o.record_interval = record_interval;
    return o;
}

SimConfig sim_config(double dt, double t_end, long runs, std::uint64_t seed, long initial_infected, unsigned workers)
{
    SimConfig c;
    c.dt = dt;
    c.t_end = t_end;
    c.n_runs = runs;
    c.rng_seed = seed;
    c.initial_infected_hosts = initial_infected;
    c.workers = workers;
    return c;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Sugar-bait malaria transmission model";

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("n_hosts", &ModelParams::n_hosts)
        .def_readwrite("n_mosquitoes", &ModelParams::n_mosquitoes)
        .def_readwrite("bite_rate", &ModelParams::bite_rate)
        .def_readwrite("p_infect_human", &ModelParams::p_infect_human)
        .def_readwrite("p_infect_mosquito", &ModelParams::p_infect_mosquito)
        .def_readwrite("mosquito_density", &ModelParams::mosquito_density)
        .def_readwrite("bait_density", &ModelParams::bait_density)
        .def_readwrite("blood_preference", &ModelParams::blood_preference)
        .def_readwrite("sugar_preference", &ModelParams::sugar_preference)
        .def_readwrite("incubation_days", &ModelParams::incubation_days)
        .def_readwrite("efficacy", &ModelParams::efficacy)
        .def_readwrite("reversion_rate", &ModelParams::reversion_rate)
        .def_readwrite("recovery_rate", &ModelParams::recovery_rate)
        .def_readwrite("turnover_rate", &ModelParams::turnover_rate)
        .def("with_blood_preference", &ModelParams::with_blood_preference)
        .def("with_bait_density", &ModelParams::with_bait_density)
        .def("validate", [](const ModelParams& p) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& v : validate(p).violations)
                out.emplace_back(v.field, v.message);
            return out;
        });

    m.def("default_params", &default_params, py::arg("blood_preference") = 0.5, py::arg("bait_density") = 0.0);

    py::class_<AttractivenessProfile>(m, "AttractivenessProfile")
        .def(py::init([](const std::vector<std::pair<double, long>>& classes) {
                 std::vector<HostClass> hc;
                 for (const auto& [k, n] : classes)
                     hc.push_back({k, n});
                 return AttractivenessProfile(std::move(hc));
             }),
             py::arg("classes"))
        .def_property_readonly("k", [](const AttractivenessProfile& p) {
            std::vector<double> k;
            for (const auto& c : p.classes())
                k.push_back(c.k);
            return k;
        })
        .def_property_readonly("counts", [](const AttractivenessProfile& p) {
            std::vector<long> n;
            for (const auto& c : p.classes())
                n.push_back(c.count);
            return n;
        })
        .def_property_readonly("n_hosts", &AttractivenessProfile::n_hosts)
        .def_property_readonly("k_mean", &AttractivenessProfile::k_mean)
        .def_property_readonly("kappa", &AttractivenessProfile::kappa)
        .def("__len__", &AttractivenessProfile::size);

    m.def("single_class_profile", &single_class_profile, py::arg("n_hosts"), py::arg("k") = 1.0);
    m.def(
        "power_law_profile",
        [](double exponent, double k_min, double k_max, long n_classes, long n_hosts) {
            return power_law_profile(PowerLawSpec{exponent, k_min, k_max, n_classes}, n_hosts);
        },
        py::arg("exponent") = 2.8, py::arg("k_min") = 1.0, py::arg("k_max") = 100.0, py::arg("n_classes") = 100,
        py::arg("n_hosts") = 1000);
    m.def("poisson_profile", &poisson_profile, py::arg("rate"), py::arg("n_classes"), py::arg("n_hosts"),
          py::arg("max_tail_mass") = 1e-9);

    py::class_<R0Result>(m, "R0Result")
        .def_readonly("r0", &R0Result::r0)
        .def_readonly("lambda_eff", &R0Result::lambda_eff)
        .def_readonly("removed_frac", &R0Result::removed_frac)
        .def_readonly("bait_weight", &R0Result::bait_weight)
        .def_property_readonly("variant", [](const R0Result& r) { return to_string(r.variant); });

    m.def("r0_homogeneous", &r0_homogeneous);
    m.def("r0_heterogeneous", &r0_heterogeneous);
    m.def("r0_proportional_targeted", &r0_proportional_targeted);
    m.def("r0_targeted", [](const ModelParams& params, const AttractivenessProfile& profile,
                            const std::vector<long>& baits, long budget) {
        return r0_targeted(params, profile, make_allocation(profile, baits, std::vector<long>(baits), budget));
    });

    m.def(
        "endemic_equilibrium",
        [](const ModelParams& p) {
            const auto e = endemic_equilibrium_homogeneous(p);
            return py::make_tuple(e.i_h, e.i_m, e.r_m);
        },
        "(i_h, i_m, r_m) of the homogeneous system");

    m.def(
        "critical_bait_density",
        [](const ModelParams& params, const std::string& variant, const AttractivenessProfile* profile, double x_max) {
            BaitScenario sc;
            if (variant == "homogeneous")
                sc.variant = ModelVariant::Homogeneous;
            else if (variant == "uniform")
                sc.variant = ModelVariant::HeterogeneousUniform;
            else if (variant == "targeted")
                sc.variant = ModelVariant::HeterogeneousTargeted;
            else
                throw std::invalid_argument("variant must be homogeneous, uniform or targeted");
            sc.profile = profile;
            CriticalSearch search;
            search.x_max = x_max;
            return critical_bait_density(params, sc, search).x;
        },
        py::arg("params"), py::arg("variant") = "homogeneous", py::arg("profile") = nullptr, py::arg("x_max") = 100.0);

    m.def(
        "stability",
        [](double delta, double mu, double tau, double r0) {
            const auto v = probe_characteristic(delta, mu, tau, r0);
            py::dict out;
            out["verdict"] = to_string(v.verdict);
            out["positive_root"] = v.positive_root;
            out["f_at_zero"] = v.f_at_zero;
            return out;
        },
        py::arg("delta"), py::arg("mu"), py::arg("tau"), py::arg("r0"));

    m.def(
        "greedy_allocate",
        [](const AttractivenessProfile& profile, const std::vector<long>& constraints, long budget) {
            const auto a = greedy_allocate(profile, constraints, budget);
            return py::make_tuple(a.baits_by_class, a.effective_y);
        },
        py::arg("profile"), py::arg("constraints"), py::arg("budget"));

    m.def(
        "integrate_homogeneous",
        [](const ModelParams& params, double i_h, double i_m, double r_m, double dt, double t_end,
           double record_interval) {
            return trajectory_dict(
                integrate_homogeneous(params, {i_h, i_m, r_m}, integration_options(dt, t_end, record_interval)));
        },
        py::arg("params"), py::arg("i_h") = 0.001, py::arg("i_m") = 0.0, py::arg("r_m") = 0.0, py::arg("dt") = 0.01,
        py::arg("t_end") = 1000.0, py::arg("record_interval") = 1.0);

    m.def(
        "simulate_homogeneous",
        [](const ModelParams& params, double dt, double t_end, long runs, std::uint64_t seed, long initial_infected,
           unsigned workers) {
            const auto profile = single_class_profile(params.n_hosts);
            MeanTrajectory mean;
            {
                py::gil_scoped_release release;
                mean = run_ensemble(sim_config(dt, t_end, runs, seed, initial_infected, workers), params, profile,
                                    BaitPlacement::uniform(params));
            }
            return ensemble_dict(mean);
        },
        py::arg("params"), py::arg("dt") = 0.01, py::arg("t_end") = 500.0, py::arg("runs") = 1,
        py::arg("seed") = 1, py::arg("initial_infected") = 1, py::arg("workers") = 0);

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_readwrite("params", &Scenario::params);
    m.def("load_scenario", &load_scenario);
    m.def("scenario_r0", [](const Scenario& sc) { return scenario_r0(sc, build_profile(sc)); });
    m.def("run_command", [](const std::string& verb, const Scenario& sc, const std::string& out_dir,
                            const std::string& format) {
        CommandOptions options;
        options.out_dir = out_dir;
        options.format = format == "csv" ? OutputFormat::Csv : format == "svg" ? OutputFormat::Svg : OutputFormat::Both;
        std::ostringstream report;
        if (verb == "r0")
            cmd_r0(sc, report);
        else if (verb == "sweep")
            cmd_sweep(sc, options, report);
        else if (verb == "integrate")
            cmd_integrate(sc, options, report);
        else if (verb == "simulate")
            cmd_simulate(sc, options, report);
        else if (verb == "allocate")
            cmd_allocate(sc, options, report);
        else if (verb == "stability")
            cmd_stability(sc, report);
        else
            throw std::invalid_argument("unknown verb '" + verb + "'");
        return report.str();
    }, py::arg("verb"), py::arg("scenario"), py::arg("out_dir") = ".", py::arg("format") = "both");

    py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
}
