#include "sugarbait/scenario.hpp"

#include <doctest.h>

#include <sstream>
#include <stdexcept>

using namespace sugarbait;

namespace {

Scenario parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_scenario(in, SUGARBAIT_TEST_DATA);
}

std::size_t error_line(const std::string& text)
{
    try {
        parse(text);
    } catch (const ScenarioError& e) {
        return e.line();
    }
    return static_cast<std::size_t>(-1);
}

} // namespace

TEST_CASE("defaults are the table values")
{
    const auto sc = parse("");
    CHECK(sc.mode == MixingMode::Homogeneous);
    CHECK(sc.params.bite_rate == 0.5);
    CHECK(sc.params.n_hosts == 1000);
    CHECK(sc.params.mosquito_density == 2.0);
    CHECK_FALSE(sc.sweep);
}

TEST_CASE("keys, comments and derived fields")
{
    const auto sc = parse("name = demo   # trailing comment\n"
                          "mode = heterogeneous\n"
                          "params.blood_preference = 0.7\n"
                          "params.n_mosquitoes = 3000\n"
                          "profile.kind = power_law\n"
                          "profile.exponent = 2.5\n"
                          "bait.mode = targeted\n"
                          "sim.runs = 12\n"
                          "sim.seed = 18446744073709551615\n"
                          "integrate.t_end = 50\n");
    CHECK(sc.name == "demo");
    CHECK(sc.mode == MixingMode::Heterogeneous);
    CHECK(sc.params.sugar_preference == doctest::Approx(0.3));
    CHECK(sc.params.mosquito_density == doctest::Approx(3.0));
    CHECK(sc.profile.kind == ProfileKind::PowerLaw);
    CHECK(sc.profile.power_law.exponent == 2.5);
    CHECK(sc.bait.mode == BaitMode::Targeted);
    CHECK(sc.sim.n_runs == 12);
    CHECK(sc.sim.rng_seed == 18446744073709551615ULL);
    CHECK(sc.integrate.t_end == 50);
}

TEST_CASE("density given without counts sets the mosquito count")
{
    const auto sc = parse("params.mosquito_density = 4\n");
    CHECK(sc.params.n_mosquitoes == 4000);
}

TEST_CASE("sweep grids")
{
    const auto sc = parse("sweep.variable = bait_density\n"
                          "sweep.grid = 0:2:5\n"
                          "sweep.series_variable = blood_preference\n"
                          "sweep.series_values = 0.2, 0.5\n"
                          "sweep.variants = uniform, targeted\n");
    REQUIRE(sc.sweep);
    CHECK(sc.sweep->grid == std::vector<double>{0, 0.5, 1.0, 1.5, 2.0});
    CHECK(sc.sweep->series_values == std::vector<double>{0.2, 0.5});
    CHECK(sc.sweep->variants == std::vector<std::string>{"uniform", "targeted"});
    const auto listed = parse("sweep.grid = 0.1, 0.3, 0.7\n");
    CHECK(listed.sweep->grid == std::vector<double>{0.1, 0.3, 0.7});
}

TEST_CASE("errors carry line numbers")
{
    CHECK(error_line("name = a\nbogus.key = 1\n") == 2);
    CHECK(error_line("name = a\nname = b\n") == 2);
    CHECK(error_line("\n\nparams.bite_rate = fast\n") == 3);
    CHECK(error_line("mode = sideways\n") == 1);
    CHECK(error_line("just words\n") == 1);
    CHECK(error_line("sweep.variable = nope\n") == 1);
    CHECK(error_line("sweep.variants = base, weird\n") == 1);
    CHECK(error_line("bait.constraints = 1, 2.5\n") == 1);
    CHECK(error_line("sweep.grid = 3:1:0\n") == 1);
    CHECK_THROWS_AS(parse("bait.mode = targeted\n"), ScenarioError);
    CHECK_THROWS_AS(parse("profile.kind = table\nprofile.file = missing.txt\n"), ScenarioError);
}

TEST_CASE("profile tables resolve against the scenario directory")
{
    const auto sc = parse("mode = heterogeneous\nprofile.kind = table\nprofile.file = three_classes.txt\n");
    const auto prof = build_profile(sc);
    CHECK(prof.size() == 3);
    CHECK(prof.n_hosts() == 1000);
    const auto mismatch = parse("mode = heterogeneous\nparams.n_hosts = 900\nparams.n_mosquitoes = 1800\n"
                                "profile.kind = table\nprofile.file = three_classes.txt\n");
    CHECK_THROWS_AS(build_profile(mismatch), std::invalid_argument);
}

TEST_CASE("explicit constraints and budgets")
{
    const auto sc = parse("mode = heterogeneous\nprofile.kind = table\nprofile.file = three_classes.txt\n"
                          "bait.mode = targeted\nbait.rule = explicit\nbait.constraints = 10, 20, 30\n"
                          "bait.budget = 35\n");
    const auto prof = build_profile(sc);
    const auto alloc = build_allocation(sc, prof);
    CHECK(alloc.baits_by_class == std::vector<long>{0, 5, 30});
    CHECK(bait_budget(sc) == 35);

    const auto wrong = parse("mode = heterogeneous\nprofile.kind = table\nprofile.file = three_classes.txt\n"
                             "bait.mode = targeted\nbait.rule = explicit\nbait.constraints = 10, 20\n");
    CHECK_THROWS_AS(build_constraints(wrong, prof), std::invalid_argument);
}

TEST_CASE("parameter access by name")
{
    auto p = default_params();
    CHECK(set_parameter(p, "blood_preference", 0.3));
    CHECK(p.sugar_preference == doctest::Approx(0.7));
    CHECK(get_parameter(p, "blood_preference") == 0.3);
    CHECK(set_parameter(p, "n_hosts", 500));
    CHECK(p.mosquito_density == doctest::Approx(4.0));
    CHECK_FALSE(set_parameter(p, "colour", 1));
    CHECK_THROWS(get_parameter(p, "colour"));
}

TEST_CASE("bundled scenarios load")
{
    for (const char* name : {"heavy_tail_vs_poisson", "homogeneous_sim", "homogeneous_sweep", "heterogeneous_sim", "targeted_vs_uniform"}) {
        const auto sc = load_scenario(std::string(SUGARBAIT_SCENARIOS) + "/" + name + ".scn");
        CHECK(sc.name == name);
        CHECK(validate(sc.params).ok());
        CHECK(build_profile(sc).n_hosts() == sc.params.n_hosts);
    }
    CHECK_THROWS_AS(load_scenario("/nonexistent/x.scn"), ScenarioError);
}
