#include "sugarbait/profile.hpp"

#include "sugarbait/rounding.hpp"
#include "sugarbait/textio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sugarbait {

AttractivenessProfile::AttractivenessProfile(std::vector<HostClass> classes)
    : classes_(std::move(classes))
{
    if (classes_.empty())
        throw std::invalid_argument("attractiveness profile needs at least one class");

    for (const auto& c : classes_) {
        if (!std::isfinite(c.k) || c.k <= 0.0)
            throw std::invalid_argument("attractiveness factors must be positive");
        if (c.count < 0)
            throw std::invalid_argument("class populations must be nonnegative");
        n_hosts_ += c.count;
    }
    if (n_hosts_ <= 0)
        throw std::invalid_argument("attractiveness profile has no hosts");

    const double n = static_cast<double>(n_hosts_);
    for (const auto& c : classes_) {
        const double share = static_cast<double>(c.count) / n;
        k_mean_ += c.k * share;
        k_second_ += c.k * c.k * share;
    }
}

double AttractivenessProfile::share(std::size_t i) const
{
    return static_cast<double>(classes_[i].count) / static_cast<double>(n_hosts_);
}

std::size_t AttractivenessProfile::populated_classes() const
{
    return static_cast<std::size_t>(
        std::count_if(classes_.begin(), classes_.end(), [](const HostClass& c) { return c.count > 0; }));
}

std::size_t AttractivenessProfile::highest_populated_class() const
{
    std::size_t best = classes_.size();
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        if (classes_[i].count > 0 && (best == classes_.size() || classes_[i].k > classes_[best].k))
            best = i;
    }
    return best;
}

bool AttractivenessProfile::distinct_k() const
{
    std::set<double> seen;
    for (const auto& c : classes_) {
        if (!seen.insert(c.k).second)
            return false;
    }
    return true;
}

AttractivenessProfile single_class_profile(long n_hosts, double k)
{
    return AttractivenessProfile({HostClass{k, n_hosts}});
}

namespace {

void check_spec(const PowerLawSpec& spec)
{
    if (!(spec.exponent > 1.0))
        throw std::invalid_argument("power-law exponent must exceed 1");
    if (!(spec.k_min > 0.0) || !(spec.k_min < spec.k_max))
        throw std::invalid_argument("power-law support needs 0 < k_min < k_max");
    if (spec.n_classes < 1)
        throw std::invalid_argument("power-law profile needs at least one class");
}

std::vector<double> support_points(const PowerLawSpec& spec)
{
    const double lo = std::ceil(spec.k_min);
    const double hi = std::floor(spec.k_max);
    const long grid = static_cast<long>(hi - lo) + 1;
    if (grid < 1 || spec.n_classes > grid)
        throw std::invalid_argument("n_classes exceeds the integer grid points in [k_min, k_max]");

    std::vector<double> ks;
    ks.reserve(static_cast<std::size_t>(spec.n_classes));
    if (spec.n_classes == 1) {
        ks.push_back(lo);
        return ks;
    }
    const double span = hi - lo;
    for (long i = 0; i < spec.n_classes; ++i)
        ks.push_back(std::round(lo + span * static_cast<double>(i) / static_cast<double>(spec.n_classes - 1)));
    // Rounding can collide neighbours only when n_classes is close to the grid size; push them apart.
    for (std::size_t i = 1; i < ks.size(); ++i)
        ks[i] = std::max(ks[i], ks[i - 1] + 1.0);
    return ks;
}

std::vector<double> power_law_mass(const std::vector<double>& ks, double exponent)
{
    std::vector<double> mass(ks.size());
    double total = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        mass[i] = std::pow(ks[i], -exponent);
        total += mass[i];
    }
    for (auto& m : mass)
        m /= total;
    return mass;
}

AttractivenessProfile from_mass(const std::vector<double>& ks, const std::vector<double>& mass, long n_hosts)
{
    if (n_hosts <= 0)
        throw std::invalid_argument("profile needs a positive host count");
    std::vector<double> shares(mass.size());
    for (std::size_t i = 0; i < mass.size(); ++i)
        shares[i] = mass[i] * static_cast<double>(n_hosts);
    const auto counts = largest_remainder_round(shares, n_hosts);
    std::vector<HostClass> classes;
    classes.reserve(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i)
        classes.push_back({ks[i], counts[i]});
    return AttractivenessProfile(std::move(classes));
}

} // namespace

AttractivenessProfile power_law_profile(const PowerLawSpec& spec, long n_hosts)
{
    check_spec(spec);
    const auto ks = support_points(spec);
    return from_mass(ks, power_law_mass(ks, spec.exponent), n_hosts);
}

AttractivenessProfile sample_power_law_profile(const PowerLawSpec& spec, long n_hosts, std::uint64_t seed)
{
    check_spec(spec);
    if (n_hosts <= 0)
        throw std::invalid_argument("profile needs a positive host count");
    const auto ks = support_points(spec);
    const auto mass = power_law_mass(ks, spec.exponent);

    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> pick(mass.begin(), mass.end());
    std::vector<long> counts(ks.size(), 0);
    for (long h = 0; h < n_hosts; ++h)
        ++counts[pick(rng)];

    std::vector<HostClass> classes;
    for (std::size_t i = 0; i < ks.size(); ++i)
        classes.push_back({ks[i], counts[i]});
    return AttractivenessProfile(std::move(classes));
}

AttractivenessProfile poisson_profile(double rate, long n_classes, long n_hosts, double max_tail_mass)
{
    if (!(rate > 0.0))
        throw std::invalid_argument("Poisson rate must be positive");
    if (n_classes < 1)
        throw std::invalid_argument("Poisson profile needs at least one class");
    if (n_classes == 1)
        return single_class_profile(n_hosts, 1.0);

    // log-space pmf avoids overflow of rate^k / k! for large supports
    std::vector<double> ks(static_cast<std::size_t>(n_classes));
    std::vector<double> mass(ks.size());
    double kept = 0.0;
    for (long k = 1; k <= n_classes; ++k) {
        const double log_pmf = static_cast<double>(k) * std::log(rate) - rate - std::lgamma(static_cast<double>(k) + 1.0);
        ks[static_cast<std::size_t>(k - 1)] = static_cast<double>(k);
        mass[static_cast<std::size_t>(k - 1)] = std::exp(log_pmf);
        kept += mass[static_cast<std::size_t>(k - 1)];
    }
    const double tail = std::max(0.0, 1.0 - std::exp(-rate) - kept);
    if (tail > max_tail_mass)
        throw std::invalid_argument("Poisson truncation mass too large; increase n_classes");
    for (auto& m : mass)
        m /= kept;
    return from_mass(ks, mass, n_hosts);
}

double poisson_rate_for_mean(double target_k_mean)
{
    if (!(target_k_mean > 1.0))
        throw std::invalid_argument("zero-excluded Poisson mean must exceed 1");
    // mean(rate) = rate / (1 - e^-rate) is increasing; bracket [0, target]
    auto mean_of = [](double rate) { return rate / -std::expm1(-rate); };
    double lo = 1e-12;
    double hi = target_k_mean;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mean_of(mid) < target_k_mean)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

AttractivenessProfile poisson_profile_matched(double target_k_mean, long n_classes, long n_hosts, double max_tail_mass)
{
    return poisson_profile(poisson_rate_for_mean(target_k_mean), n_classes, n_hosts, max_tail_mass);
}

AttractivenessProfile read_profile_table(std::istream& in)
{
    std::vector<HostClass> classes;
    for (const auto& row : read_numeric_rows(in)) {
        if (row.values.size() != 2)
            throw std::invalid_argument("profile table line " + std::to_string(row.line) + ": expected 2 columns (k n)");
        const double n = row.values[1];
        if (n < 0 || std::floor(n) != n)
            throw std::invalid_argument("profile table line " + std::to_string(row.line) + ": class population must be a nonnegative integer");
        classes.push_back({row.values[0], static_cast<long>(n)});
    }
    return AttractivenessProfile(std::move(classes));
}

AttractivenessProfile read_profile_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open profile table " + path);
    return read_profile_table(in);
}

void write_profile_table(std::ostream& out, const AttractivenessProfile& profile)
{
    out << "# k n\n";
    for (const auto& c : profile.classes())
        out << format_double(c.k) << ' ' << c.count << '\n';
}

} // namespace sugarbait
