#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sugarbait {

struct HostClass {
    double k = 1.0;  // attractiveness factor
    long count = 0;  // hosts in the class
};

/// Decomposition of the host population into attractiveness classes.
/// Moments are computed once at construction from P(i) = n_i / N.
class AttractivenessProfile {
public:
    AttractivenessProfile() = default;
    explicit AttractivenessProfile(std::vector<HostClass> classes);

    const std::vector<HostClass>& classes() const { return classes_; }
    std::size_t size() const { return classes_.size(); }
    const HostClass& operator[](std::size_t i) const { return classes_[i]; }

    long n_hosts() const { return n_hosts_; }
    double share(std::size_t i) const;
    double k_mean() const { return k_mean_; }
    double k_second() const { return k_second_; }
    double kappa() const { return k_second_ / k_mean_; }

    /// Number of classes with at least one host.
    std::size_t populated_classes() const;
    /// Index of the populated class with the largest k.
    std::size_t highest_populated_class() const;
    /// True when every k_i is distinct.
    bool distinct_k() const;

private:
    std::vector<HostClass> classes_;
    long n_hosts_ = 0;
    double k_mean_ = 0.0;
    double k_second_ = 0.0;
};

struct PowerLawSpec {
    double exponent = 2.8; // P(k) proportional to k^-exponent
    double k_min = 1.0;
    double k_max = 100.0;
    long n_classes = 100;
};

AttractivenessProfile single_class_profile(long n_hosts, double k = 1.0);

/// Deterministic discretization of the power-law mass function over integer
/// support points between k_min and k_max. Populations use largest-remainder
/// rounding so they sum to n_hosts exactly.
AttractivenessProfile power_law_profile(const PowerLawSpec& spec, long n_hosts);

/// Seeded i.i.d. draw of n_hosts attractiveness factors from the same mass function.
AttractivenessProfile sample_power_law_profile(const PowerLawSpec& spec, long n_hosts, std::uint64_t seed);

/// Poisson(rate) mass restricted to k = 1..n_classes and renormalized.
/// Fails when the mass beyond n_classes exceeds `max_tail_mass`. A single
/// class is the homogeneous case and skips the tail check.
AttractivenessProfile poisson_profile(double rate, long n_classes, long n_hosts, double max_tail_mass = 1e-9);

/// Poisson rate whose zero-excluded mean equals `target_k_mean`.
double poisson_rate_for_mean(double target_k_mean);

/// Truncated Poisson profile whose mass-function mean equals `target_k_mean`
/// (requires target_k_mean > 1, since k starts at 1).
AttractivenessProfile poisson_profile_matched(double target_k_mean, long n_classes, long n_hosts,
                                              double max_tail_mass = 1e-9);

/// Two-column text table "k n", one class per line, '#' comments.
AttractivenessProfile read_profile_table(std::istream& in);
AttractivenessProfile read_profile_file(const std::string& path);
void write_profile_table(std::ostream& out, const AttractivenessProfile& profile);

} // namespace sugarbait
