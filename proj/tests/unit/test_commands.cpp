#include "sugarbait/commands.hpp"
#include "sugarbait/textio.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

using namespace sugarbait;
namespace fs = std::filesystem;

namespace {

Scenario parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_scenario(in, SUGARBAIT_TEST_DATA);
}

struct TempDir {
    fs::path path;
    TempDir()
        : path(fs::temp_directory_path() / ("sugarbait_test_" + std::to_string(std::random_device{}())))
    {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

Scenario bundled(const char* name)
{
    return load_scenario(std::string(SUGARBAIT_SCENARIOS) + "/" + name + ".scn");
}

} // namespace

TEST_CASE("r0 report")
{
    std::ostringstream out;
    const auto r = cmd_r0(bundled("homogeneous_sim"), out);
    CHECK(r.r0 == doctest::Approx(5.811019768).epsilon(1e-9));
    CHECK(out.str().find("outbreak possible") != std::string::npos);
}

TEST_CASE("sweep writes csv and svg with threshold crossings")
{
    TempDir tmp;
    CommandOptions opts;
    opts.out_dir = tmp.path;
    std::ostringstream log;
    const auto res = cmd_sweep(bundled("homogeneous_sweep"), opts, log);
    REQUIRE(res.series.size() == 3);
    REQUIRE(res.series[0].crossing);
    CHECK(*res.series[0].crossing == doctest::Approx(0.10513).epsilon(1e-4));
    CHECK(*res.series[2].crossing > 1.0);
    CHECK(fs::exists(tmp.path / "homogeneous_sweep_sweep.svg"));

    const auto table = read_csv_file((tmp.path / "homogeneous_sweep_sweep.csv").string());
    CHECK(table.header == std::vector<std::string>{"series", "bait_density", "r0", "lambda_eff", "removed_frac"});
    CHECK(table.rows.size() == 3 * 201);
}

TEST_CASE("format selection")
{
    TempDir tmp;
    CommandOptions opts;
    opts.out_dir = tmp.path;
    opts.format = OutputFormat::Csv;
    std::ostringstream log;
    cmd_sweep(bundled("heavy_tail_vs_poisson"), opts, log);
    CHECK(fs::exists(tmp.path / "heavy_tail_vs_poisson_sweep.csv"));
    CHECK_FALSE(fs::exists(tmp.path / "heavy_tail_vs_poisson_sweep.svg"));
}

TEST_CASE("targeted sweep uses the proportional closed form")
{
    TempDir tmp;
    CommandOptions opts;
    opts.out_dir = tmp.path;
    std::ostringstream log;
    const auto res = cmd_sweep(bundled("targeted_vs_uniform"), opts, log);
    REQUIRE(res.series.size() == 4);
    // uniform, targeted at p = 0.4 then at p = 0.7
    REQUIRE(res.series[1].crossing);
    REQUIRE(res.series[3].crossing);
    CHECK(*res.series[1].crossing < *res.series[0].crossing);
    CHECK(*res.series[3].crossing < 1.0);
    CHECK(*res.series[2].crossing > 1.0);
}

TEST_CASE("integrate writes the trajectory")
{
    TempDir tmp;
    auto sc = bundled("homogeneous_sim");
    sc.integrate.t_end = 50;
    CommandOptions opts;
    opts.out_dir = tmp.path;
    std::ostringstream log;
    const auto traj = cmd_integrate(sc, opts, log);
    std::ifstream in(tmp.path / "homogeneous_sim_trajectory.csv");
    const auto back = read_trajectory_csv(in);
    CHECK(back.times.size() == traj.times.size());
    CHECK(back.states.back() == traj.states.back());
}

TEST_CASE("simulate writes the ensemble and compares with the DDE")
{
    TempDir tmp;
    CommandOptions opts;
    opts.out_dir = tmp.path;
    opts.runs = 2;
    opts.seed = 5;
    auto sc = with_overrides(bundled("homogeneous_sim"), opts);
    sc.sim.t_end = 20;
    std::ostringstream log;
    const auto res = cmd_simulate(sc, opts, log);
    CHECK(res.ensemble.n_runs == 2);
    CHECK(res.ensemble.master_seed == 5);
    CHECK(res.deterministic.times.size() == res.ensemble.times.size());
    CHECK(fs::exists(tmp.path / "homogeneous_sim_simulate.csv"));
    CHECK(fs::exists(tmp.path / "homogeneous_sim_simulate.svg"));
}

TEST_CASE("overrides")
{
    CommandOptions opts;
    opts.dt = 0.05;
    opts.runs = 7;
    const auto sc = with_overrides(bundled("homogeneous_sim"), opts);
    CHECK(sc.sim.dt == 0.05);
    CHECK(sc.integrate.dt == 0.05);
    CHECK(sc.sim.n_runs == 7);
}

TEST_CASE("allocate checks greedy against exhaustive search")
{
    TempDir tmp;
    const auto sc = parse("mode = heterogeneous\nprofile.kind = table\nprofile.file = three_classes.txt\n"
                          "bait.mode = targeted\nbait.rule = explicit\nbait.constraints = 10, 20, 30\n"
                          "bait.budget = 35\n");
    CommandOptions opts;
    opts.out_dir = tmp.path;
    std::ostringstream log;
    const auto res = cmd_allocate(sc, opts, log);
    REQUIRE(res.oracle);
    CHECK(res.oracle->best.baits_by_class == res.allocation.baits_by_class);
    CHECK(res.targeted.r0 < res.uniform.r0);
    CHECK(log.str().find("agrees yes") != std::string::npos);
    CHECK(fs::exists(tmp.path / "scenario_allocation.txt"));
}

TEST_CASE("stability report")
{
    std::ostringstream out;
    const auto v = cmd_stability(bundled("homogeneous_sim"), out);
    CHECK(v.verdict == Stability::Unstable);
    CHECK(out.str().find("agrees with R0 threshold: yes") != std::string::npos);
}

TEST_CASE("sweep without a grid is rejected")
{
    CommandOptions opts;
    std::ostringstream log;
    CHECK_THROWS_AS(cmd_sweep(bundled("homogeneous_sim"), opts, log), std::invalid_argument);
}
