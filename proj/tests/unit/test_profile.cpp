#include "sugarbait/profile.hpp"
#include "sugarbait/rounding.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace sugarbait;

namespace {

void check_moments(const AttractivenessProfile& prof)
{
    double n = 0, s1 = 0, s2 = 0;
    for (const auto& c : prof.classes()) {
        n += static_cast<double>(c.count);
        s1 += c.k * static_cast<double>(c.count);
        s2 += c.k * c.k * static_cast<double>(c.count);
    }
    CHECK(static_cast<double>(prof.n_hosts()) == n);
    CHECK(prof.k_mean() == doctest::Approx(s1 / n).epsilon(1e-12));
    CHECK(prof.k_second() == doctest::Approx(s2 / n).epsilon(1e-12));
    CHECK(prof.k_second() >= prof.k_mean() * prof.k_mean() * (1 - 1e-12));
    CHECK(prof.kappa() >= prof.k_mean() * (1 - 1e-12));
}

} // namespace

TEST_CASE("single class is homogeneous")
{
    const auto prof = single_class_profile(1000);
    CHECK(prof.size() == 1);
    CHECK(prof.k_mean() == 1.0);
    CHECK(prof.kappa() == 1.0);
    check_moments(prof);
}

TEST_CASE("power law on 1..100")
{
    const auto prof = power_law_profile({2.8, 1, 100, 100}, 1000);
    CHECK(prof.size() == 100);
    CHECK(prof.n_hosts() == 1000);
    CHECK(prof.distinct_k());
    for (std::size_t i = 0; i < prof.size(); ++i)
        CHECK(prof[i].k == static_cast<double>(i + 1));
    check_moments(prof);
    CHECK(prof.kappa() > prof.k_mean());

    // counts follow round(N P(i)) up to one host of remainder correction
    double z = 0;
    for (int k = 1; k <= 100; ++k)
        z += std::pow(k, -2.8);
    for (std::size_t i = 0; i < prof.size(); ++i) {
        const double ideal = 1000.0 * std::pow(prof[i].k, -2.8) / z;
        CHECK(std::abs(static_cast<double>(prof[i].count) - ideal) < 1.0);
    }
}

TEST_CASE("steep power law collapses onto k = 1")
{
    const auto prof = power_law_profile({50.0, 1, 100, 100}, 1000);
    CHECK(prof[0].count == 1000);
    CHECK(prof.k_mean() == doctest::Approx(1.0));
    CHECK(prof.kappa() == doctest::Approx(1.0));
}

TEST_CASE("coarser power-law grids")
{
    const auto prof = power_law_profile({2.8, 1, 100, 12}, 5000);
    CHECK(prof.size() == 12);
    CHECK(prof[0].k == 1.0);
    CHECK(prof[11].k == 100.0);
    CHECK(prof.distinct_k());
    check_moments(prof);
    CHECK_THROWS_AS(power_law_profile({2.8, 1, 10, 11}, 100), std::invalid_argument);
}

TEST_CASE("sampled power law is seeded")
{
    const auto a = sample_power_law_profile({2.8, 1, 100, 100}, 1000, 7);
    const auto b = sample_power_law_profile({2.8, 1, 100, 100}, 1000, 7);
    CHECK(a.n_hosts() == 1000);
    CHECK(a.k_mean() == b.k_mean());
    check_moments(a);
}

TEST_CASE("poisson profile")
{
    const auto prof = poisson_profile(2.0, 30, 1000);
    CHECK(prof.n_hosts() == 1000);
    check_moments(prof);
    CHECK_THROWS(poisson_profile(20.0, 10, 1000));
    CHECK(poisson_profile(3.0, 1, 500).kappa() == 1.0);
}

TEST_CASE("mean-matched poisson")
{
    const double target = power_law_profile({2.8, 1, 100, 100}, 1000).k_mean();
    const double rate = poisson_rate_for_mean(target);
    CHECK(rate / (1.0 - std::exp(-rate)) == doctest::Approx(target).epsilon(1e-9));
    const auto prof = poisson_profile_matched(target, 100, 1000);
    // rounding to 1000 hosts moves the realized mean slightly
    CHECK(prof.k_mean() == doctest::Approx(target).epsilon(0.01));
    CHECK_THROWS(poisson_profile_matched(0.9, 100, 1000));
}

TEST_CASE("largest remainder rounding")
{
    const std::vector<double> shares{10.0 / 3, 10.0 / 3, 10.0 / 3};
    const auto r = largest_remainder_round(shares, 10);
    CHECK(std::accumulate(r.begin(), r.end(), 0L) == 10);
    for (auto v : r)
        CHECK((v == 3 || v == 4));

    const std::vector<double> odd{0.35, 4.2, 2.45};
    const auto s = largest_remainder_round(odd, 7);
    CHECK(std::accumulate(s.begin(), s.end(), 0L) == 7);
    CHECK(s == std::vector<long>{0, 4, 3});
}

TEST_CASE("profile table round trip")
{
    const auto prof = power_law_profile({2.8, 1, 100, 20}, 1000);
    std::stringstream buf;
    write_profile_table(buf, prof);
    const auto back = read_profile_table(buf);
    REQUIRE(back.size() == prof.size());
    for (std::size_t i = 0; i < prof.size(); ++i) {
        CHECK(back[i].k == prof[i].k);
        CHECK(back[i].count == prof[i].count);
    }

    std::istringstream bad("# k n\n1 10\n2 -3\n");
    CHECK_THROWS(read_profile_table(bad));
}

TEST_CASE("invalid classes are rejected")
{
    CHECK_THROWS(AttractivenessProfile({{0.0, 10}}));
    CHECK_THROWS(AttractivenessProfile({{1.0, -1}}));
    CHECK_THROWS(AttractivenessProfile({{1.0, 0}}));
}
