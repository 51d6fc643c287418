#include "sugarbait/allocation.hpp"
#include "sugarbait/analytics.hpp"
#include "sugarbait/profile.hpp"
#include "sugarbait/stochastic.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

using namespace sugarbait;

namespace {

SimConfig short_config(long runs = 1, double t_end = 60.0)
{
    SimConfig c;
    c.dt = 0.01;
    c.t_end = t_end;
    c.n_runs = runs;
    c.rng_seed = 99;
    c.initial_infected_hosts = 20;
    c.workers = 1;
    return c;
}

// Endemic host level of the individual-level rules, where exposed mosquitoes
// are not re-exposed: per-susceptible infection rate beta, bait removal rho.
double mechanistic_endemic_i_h(const ModelParams& s)
{
    const double denom = s.blood_preference + s.sugar_preference * s.bait_density;
    const double rho = s.bite_rate * s.efficacy * s.sugar_preference * s.bait_density / denom;
    const double lam = s.turnover_rate + rho;
    auto infectious = [&](double ih) {
        const double beta = s.bite_rate * s.p_infect_mosquito * s.blood_preference * ih / denom;
        const double e = beta * (1 - std::exp(-lam * s.incubation_days)) / lam;
        const double i = beta * std::exp(-lam * s.incubation_days) / s.turnover_rate;
        const double r = rho * (1 + e) / (s.reversion_rate + s.turnover_rate);
        return i / (1 + e + i + r);
    };
    auto f = [&](double ih) {
        return s.bite_rate * s.p_infect_human * s.mosquito_density * s.blood_preference / denom * (1 - ih) * infectious(ih)
               - s.recovery_rate * ih;
    };
    double lo = 1e-6, hi = 1 - 1e-12;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("meal target probabilities")
{
    auto p = default_params(0.5, 1.0);
    p.bite_rate = 0.5;
    const auto prof = single_class_profile(p.n_hosts);
    const auto probs = meal_target_probabilities(p, prof, BaitPlacement::uniform(p));
    REQUIRE(probs.size() == 2);
    // q x / (p + q x) with p = q = 0.5, x = 1
    CHECK(probs[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(step_probabilities(p, 0.01).meal == doctest::Approx(0.005));

    const AttractivenessProfile two({{1, 600}, {4, 400}});
    const auto alloc = make_allocation(two, {0, 100}, {0, 100}, 100);
    const auto t = meal_target_probabilities(p, two, BaitPlacement::targeted(two, alloc));
    const double w = 0.5 * 600 + 0.5 * 4 * 400 + 0.5 * 400;
    CHECK(t[0] == doctest::Approx(300 / w));
    CHECK(t[1] == doctest::Approx(800 / w));
    CHECK(t[2] == doctest::Approx(200 / w));
}

TEST_CASE("per-step probability guard")
{
    const auto p = default_params(0.5, 0.2);
    SimConfig c;
    c.dt = 0.25;
    const auto warn = check_sim_config(c, p);
    CHECK_FALSE(warn.empty());
    c.dt = 2.5;
    CHECK_THROWS_AS(check_sim_config(c, p), std::invalid_argument);
    c.dt = 0.01;
    CHECK(check_sim_config(c, p).empty());
    c.n_runs = 0;
    CHECK_THROWS(check_sim_config(c, p));
}

TEST_CASE("same seed, same trajectory")
{
    const auto p = default_params(0.6, 0.1);
    const auto a = run_homogeneous(short_config(), p);
    const auto b = run_homogeneous(short_config(), p);
    CHECK(a.trajectory.states == b.trajectory.states);
    CHECK(a.events.meals == b.events.meals);
    auto other = short_config();
    other.rng_seed = 100;
    CHECK(run_homogeneous(other, p).trajectory.states != a.trajectory.states);
}

TEST_CASE("ensembles do not depend on the worker count")
{
    const auto p = default_params(0.6, 0.1);
    const auto prof = single_class_profile(p.n_hosts);
    auto c = short_config(6, 40.0);
    const auto serial = run_ensemble(c, p, prof, BaitPlacement::uniform(p));
    c.workers = 3;
    const auto threaded = run_ensemble(c, p, prof, BaitPlacement::uniform(p));
    CHECK(serial.mean == threaded.mean);
    CHECK(serial.stddev == threaded.stddev);
    CHECK(serial.takeoff_runs == threaded.takeoff_runs);
}

TEST_CASE("single run ensemble")
{
    const auto p = default_params(0.6, 0.1);
    const auto prof = single_class_profile(p.n_hosts);
    const auto c = short_config(1, 30.0);
    const auto mean = run_ensemble(c, p, prof, BaitPlacement::uniform(p));
    const auto one = run(c, p, prof, BaitPlacement::uniform(p), run_seed(c.rng_seed, 0));
    for (std::size_t col = 0; col < mean.columns.size(); ++col) {
        for (std::size_t n = 0; n < mean.times.size(); ++n) {
            CHECK(mean.mean[n][col] == one.trajectory.states[n][col]);
            CHECK(mean.stddev[n][col] == 0.0);
        }
    }
}

TEST_CASE("conservation and legal transitions")
{
    const auto p = default_params(0.5, 0.5);
    const auto prof = power_law_profile({2.8, 1, 100, 20}, p.n_hosts);
    auto c = short_config();
    c.initial_class = 0;
    World world(p, prof, BaitPlacement::uniform(p), c, 4);
    for (int n = 0; n < 5000; ++n) {
        world.step();
        long total = 0;
        for (std::size_t s = 0; s < kMosquitoStatusCount; ++s)
            total += world.count(static_cast<MosquitoStatus>(s));
        REQUIRE(total == p.n_mosquitoes);
        for (std::size_t i = 0; i < prof.size(); ++i) {
            REQUIRE(world.hosts().infected[i] >= 0);
            REQUIRE(world.hosts().infected[i] <= world.hosts().class_size[i]);
        }
        if (n % 500 == 0) {
            for (const auto& m : world.mosquitoes()) {
                if (m.status == MosquitoStatus::Exposed) {
                    const double left = m.days_remaining(world.step_index(), c.dt);
                    CHECK(left > 0.0);
                    CHECK(left <= p.incubation_days + 1e-9);
                }
            }
        }
    }
    const auto& t = world.events().transitions;
    const auto S = 0, E = 1, I = 2, R = 3;
    CHECK(t[R][I] == 0);
    CHECK(t[I][E] == 0);
    CHECK(t[I][R] == 0);
    CHECK(t[E][R] == world.events().exposed_removed_by_bait);
    CHECK(t[S][R] > 0);
    CHECK(t[E][I] > 0);
    CHECK(world.hosts().total() == p.n_hosts);
}

TEST_CASE("no baits or useless baits leave the removed class empty")
{
    auto p = default_params(0.5, 0.0);
    const auto prof = single_class_profile(p.n_hosts);
    World a(p, prof, BaitPlacement::uniform(p), short_config(), 1);
    auto q = default_params(0.5, 1.0);
    q.efficacy = 0.0;
    World b(q, prof, BaitPlacement::uniform(q), short_config(), 1);
    for (int n = 0; n < 3000; ++n) {
        a.step();
        b.step();
        REQUIRE(a.count(MosquitoStatus::Removed) == 0);
        REQUIRE(b.count(MosquitoStatus::Removed) == 0);
    }
    CHECK(b.events().bait_meals > 0);
}

TEST_CASE("disease-free world stays disease-free")
{
    const auto p = default_params(0.5, 0.3);
    auto c = short_config();
    c.initial_infected_hosts = 0;
    const auto r = run_homogeneous(c, p);
    CHECK(r.extinct);
    for (const auto& s : r.trajectory.states) {
        CHECK(s[0] == 0.0);
        CHECK(s[1] == 0.0);
    }
}

TEST_CASE("event frequencies match per-step Bernoulli trials")
{
    const auto p = default_params(0.5, 0.0);
    const auto prof = single_class_profile(p.n_hosts);
    auto c = short_config();
    c.initial_infected_hosts = 0;
    World world(p, prof, BaitPlacement::uniform(p), c, 8);
    const long steps = 10000;
    for (long n = 0; n < steps; ++n)
        world.step();
    const double trials = static_cast<double>(steps) * static_cast<double>(p.n_mosquitoes);
    const double death = p.turnover_rate * c.dt;
    const double meal = p.bite_rate * c.dt * (1 - death);
    CHECK(static_cast<double>(world.events().deaths) / trials == doctest::Approx(death).epsilon(0.03));
    CHECK(static_cast<double>(world.events().meals) / trials == doctest::Approx(meal).epsilon(0.015));
}

TEST_CASE("fast recovery pins hosts near zero")
{
    auto p = default_params(0.6, 0.0);
    p.recovery_rate = 50.0;
    SimConfig c;
    c.dt = 1e-4;
    c.t_end = 20;
    c.initial_infected_hosts = 10;
    c.output_interval = 1;
    const auto r = run_homogeneous(c, p);
    for (std::size_t n = 1; n < r.trajectory.states.size(); ++n)
        CHECK(r.trajectory.states[n][0] < 0.01);
}

TEST_CASE("single class heterogeneous run equals the homogeneous run")
{
    const auto p = default_params(0.6, 0.1);
    const auto c = short_config(1, 80.0);
    const auto hom = run_homogeneous(c, p);
    const auto het = run(c, p, single_class_profile(p.n_hosts), BaitPlacement::uniform(p), c.rng_seed);
    CHECK(hom.seed == c.rng_seed);
    CHECK(hom.trajectory.states == het.trajectory.states);
    CHECK(hom.events.host_infections == het.events.host_infections);
}

TEST_CASE("initial infections go to the most attractive populated class")
{
    const auto p = default_params(0.5, 0.0);
    const AttractivenessProfile prof({{1, 900}, {5, 100}, {9, 0}});
    auto c = short_config();
    c.initial_infected_hosts = 3;
    World w(p, prof, BaitPlacement::uniform(p), c, 1);
    CHECK(w.hosts().infected == std::vector<long>{0, 3, 0});
    c.initial_class = 0;
    World v(p, prof, BaitPlacement::uniform(p), c, 1);
    CHECK(v.hosts().infected == std::vector<long>{3, 0, 0});
    c.initial_infected_hosts = 200;
    c.initial_class.reset();
    CHECK_THROWS(World(p, prof, BaitPlacement::uniform(p), c, 1));
}

TEST_CASE("endemic plateau matches the individual-level mean field")
{
    const auto p = default_params(0.6, 0.1);
    const auto prof = single_class_profile(p.n_hosts);
    SimConfig c;
    c.dt = 0.01;
    c.t_end = 400;
    c.n_runs = 24;
    c.rng_seed = 31;
    c.initial_infected_hosts = 20;
    const auto mean = run_ensemble(c, p, prof, BaitPlacement::uniform(p));
    REQUIRE(mean.takeoff_runs > 12);
    const auto ih = mean.takeoff_series("i_h");
    double avg = 0;
    int n = 0;
    for (std::size_t i = 0; i < ih.size(); ++i) {
        if (mean.times[i] >= 300) {
            avg += ih[i];
            ++n;
        }
    }
    avg /= n;
    const double expected = mechanistic_endemic_i_h(p);
    CHECK(expected == doctest::Approx(0.6193).epsilon(1e-3));
    CHECK(avg == doctest::Approx(expected).epsilon(0.03));
    // and below the DDE level, whose susceptible pool includes exposed mosquitoes
    CHECK(avg < endemic_equilibrium_homogeneous(p).i_h - 0.08);
}

TEST_CASE("mean trajectory csv round trip")
{
    const auto p = default_params(0.6, 0.1);
    const auto prof = single_class_profile(p.n_hosts);
    const auto mean = run_ensemble(short_config(3, 20.0), p, prof, BaitPlacement::uniform(p));
    std::stringstream buf;
    write_mean_trajectory_csv(buf, mean);
    CHECK(buf.str().find("# master_seed 99\n") != std::string::npos);
    const auto back = read_mean_trajectory_csv(buf);
    CHECK(back.columns == mean.columns);
    CHECK(back.mean == mean.mean);
    CHECK(back.stddev == mean.stddev);
    CHECK(back.master_seed == 99);
    CHECK(back.n_runs == 3);
}
