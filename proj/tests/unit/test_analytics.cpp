#include "oracles.hpp"

#include "sugarbait/allocation.hpp"
#include "sugarbait/analytics.hpp"
#include "sugarbait/profile.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace sugarbait;

TEST_CASE("homogeneous R0 tracks the longhand formula")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto p = oracle::random_params(rng);
        CHECK(r0_homogeneous(p).r0 == doctest::Approx(oracle::homogeneous_r0(p)).epsilon(1e-12));
    }
}

TEST_CASE("known R0 values")
{
    CHECK(r0_homogeneous(default_params(0.6, 0.1)).r0 == doctest::Approx(5.811019768).epsilon(1e-9));
    CHECK(r0_homogeneous(default_params(0.2, 0.1)).r0 == doctest::Approx(1.0836).epsilon(1e-3));
    CHECK(r0_homogeneous(default_params(0.2, 0.2)).r0 == doctest::Approx(0.301).epsilon(2e-3));
}

TEST_CASE("R0 falls with bait density")
{
    double last = INFINITY;
    for (int i = 0; i <= 40; ++i) {
        const double r0 = r0_homogeneous(default_params(0.5, 0.05 * i)).r0;
        CHECK(r0 < last);
        last = r0;
    }
}

TEST_CASE("critical bait density")
{
    const double expect[][2] = {{0.2, 0.10513}, {0.5, 0.42052}, {0.8, 1.68209}};
    for (const auto& [p, x] : expect) {
        const auto crit = critical_bait_density(default_params(p), {});
        CHECK(crit.x == doctest::Approx(x).epsilon(1e-4));
        CHECK_FALSE(crit.subcritical_without_baits);
        CHECK(r0_homogeneous(default_params(p, crit.x)).r0 <= 1.0);
        CHECK(r0_homogeneous(default_params(p, crit.x - 1e-5)).r0 > 1.0);
    }
}

TEST_CASE("critical density edge cases")
{
    auto low = default_params(0.5);
    low.p_infect_human = 0.01;
    const auto none = critical_bait_density(low, {});
    CHECK(none.subcritical_without_baits);
    CHECK(none.x == 0.0);

    // sugar-indifferent mosquitoes never visit baits
    CHECK_THROWS_AS(critical_bait_density(default_params(1.0), {}), std::domain_error);

    CriticalSearch tight;
    tight.x_max = 1.0;
    CHECK_THROWS_AS(critical_bait_density(default_params(0.8), {}, tight), std::domain_error);
}

TEST_CASE("useless baits still dilute biting")
{
    // with gamma = 0 the removed class stays empty, but sugar meals displace blood meals
    auto p = default_params(0.5);
    p.efficacy = 0.0;
    const auto r = r0_homogeneous(p.with_bait_density(1.0));
    CHECK(r.removed_frac == 0.0);
    CHECK(r.r0 < r0_homogeneous(p.with_bait_density(0.0)).r0);
    const auto crit = critical_bait_density(p, {});
    CHECK(crit.x > 1.0);
}

TEST_CASE("endemic equilibrium zeros the right-hand side")
{
    std::mt19937_64 rng(5);
    int endemic = 0;
    for (int i = 0; i < 300; ++i) {
        const auto p = oracle::random_params(rng);
        const auto eq = endemic_equilibrium_homogeneous(p);
        const double r0 = r0_homogeneous(p).r0;
        CHECK(eq.endemic == (r0 > 1.0));
        if (!eq.endemic) {
            CHECK(eq.i_h == 0.0);
            CHECK(eq.i_m == 0.0);
            continue;
        }
        ++endemic;
        double f[3];
        oracle::homogeneous_rhs_at_rest(p, eq.i_h, eq.i_m, eq.r_m, f);
        CHECK(std::abs(f[0]) < 1e-12);
        CHECK(std::abs(f[1]) < 1e-12);
        CHECK(std::abs(f[2]) < 1e-12);
        CHECK(eq.i_h > 0.0);
        CHECK(eq.i_h < 1.0);
        CHECK(eq.i_m + eq.r_m <= 1.0);
    }
    CHECK(endemic > 50);
}

TEST_CASE("endemic levels at p = 0.6, x = 0.1")
{
    const auto eq = endemic_equilibrium_homogeneous(default_params(0.6, 0.1));
    CHECK(eq.i_h == doctest::Approx(0.7481).epsilon(1e-3));
    CHECK(eq.i_m == doctest::Approx(0.3168).epsilon(1e-3));
    CHECK(eq.r_m == doctest::Approx(0.05255).epsilon(1e-3));
}

TEST_CASE("single-class heterogeneous R0 equals homogeneous")
{
    const auto prof = single_class_profile(1000);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const auto p = oracle::random_params(rng);
        const double hom = r0_homogeneous(p).r0;
        CHECK(std::abs(r0_heterogeneous(p, prof).r0 - hom) <= 1e-10 * hom);
        CHECK(std::abs(r0_proportional_targeted(p, prof).r0 - hom) <= 1e-10 * hom);
    }
}

TEST_CASE("heterogeneous R0 from the moments")
{
    const auto prof = power_law_profile({2.8, 1, 100, 100}, 1000);
    const auto p = default_params(0.5, 0.0);
    // at x = 0 the heterogeneous R0 is the homogeneous one scaled by kappa / kbar
    CHECK(r0_heterogeneous(p, prof).r0
          == doctest::Approx(r0_homogeneous(p).r0 * prof.kappa() / prof.k_mean()).epsilon(1e-12));
}

TEST_CASE("power law beats mean-matched poisson")
{
    const auto pl = power_law_profile({2.8, 1, 100, 100}, 1000);
    const auto po = poisson_profile_matched(pl.k_mean(), 100, 1000);
    for (int i = 0; i < 50; ++i) {
        const auto p = default_params(0.5, 2.0 * i / 49.0);
        CHECK(r0_heterogeneous(p, pl).r0 > r0_heterogeneous(p, po).r0);
    }
}

TEST_CASE("targeted allocation uses y")
{
    const auto prof = power_law_profile({2.8, 1, 100, 100}, 1000);
    const auto p = default_params(0.4, 0.25);
    const auto constraints = proportional_constraints(prof, 0.25);
    const auto alloc = greedy_allocate(prof, constraints, 250);
    const auto targeted = r0_targeted(p, prof, alloc);
    CHECK(targeted.bait_weight == doctest::Approx(alloc.effective_y));
    CHECK(targeted.r0 < 1.0);
    CHECK(r0_heterogeneous(p, prof).r0 > 1.0);

    const auto wrong = single_class_profile(1000);
    CHECK_THROWS(r0_targeted(p, wrong, alloc));
}

TEST_CASE("proportional targeting crosses one earlier")
{
    const auto prof = power_law_profile({2.8, 1, 100, 100}, 1000);
    for (double pb : {0.4, 0.5, 0.7}) {
        const auto base = default_params(pb);
        const double uni = critical_bait_density(base, {ModelVariant::HeterogeneousUniform, &prof}).x;
        const double tgt = critical_bait_density(base, {ModelVariant::HeterogeneousTargeted, &prof}).x;
        CHECK(tgt < uni);
        CHECK(tgt == doctest::Approx(uni / prof.kappa()).epsilon(1e-4));
    }
}

TEST_CASE("longer incubation makes baits more effective")
{
    double last = INFINITY;
    for (int tau = 5; tau <= 15; ++tau) {
        auto p = default_params(0.5);
        p.incubation_days = tau;
        const double ratio = r0_homogeneous(p.with_bait_density(0.2)).r0 / r0_homogeneous(p.with_bait_density(0.0)).r0;
        CHECK(ratio < last);
        last = ratio;
    }
}

TEST_CASE("characteristic function")
{
    const double d = 0.1, mu = 0.05, tau = 10;
    CHECK(characteristic_function(0.0, d, mu, tau, 2.0) == doctest::Approx(d * mu * (1 - 2.0)));
    CHECK(characteristic_function(0.3, d, mu, tau, 0.0) == doctest::Approx(0.09 + 0.3 * 0.15 + d * mu));

    const auto unstable = probe_characteristic(d, mu, tau, 3.0);
    REQUIRE(unstable.positive_root);
    CHECK(std::abs(characteristic_function(*unstable.positive_root, d, mu, tau, 3.0)) < 1e-9);
    CHECK(unstable.verdict == Stability::Unstable);

    const auto stable = probe_characteristic(d, mu, tau, 0.5);
    CHECK_FALSE(stable.positive_root);
    CHECK(stable.verdict == Stability::Stable);

    CHECK(probe_characteristic(d, mu, tau, 1.0).verdict == Stability::Marginal);
}

TEST_CASE("stability verdict follows R0")
{
    std::mt19937_64 rng(9);
    for (int i = 0; i < 300; ++i) {
        const auto p = oracle::random_params(rng);
        const auto v = stability_probe(p, {});
        CHECK((v.verdict == Stability::Unstable) == (v.r0 > 1.0));
        for (double r : v.linear_factor_roots)
            CHECK(r < 0.0);
    }
}
