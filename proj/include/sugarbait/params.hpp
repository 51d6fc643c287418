#pragma once

#include <string>
#include <vector>

namespace sugarbait {

/// Scalar rates, probabilities and densities of the host-vector-bait model.
/// All rates are per day, durations in days.
struct ModelParams {
    long n_hosts = 1000;      // N
    long n_mosquitoes = 2000; // M

    double bite_rate = 0.5;         // a
    double p_infect_human = 0.5;    // b
    double p_infect_mosquito = 0.5; // c
    double mosquito_density = 2.0;  // m = M / N
    double bait_density = 0.0;      // x = B / N
    double blood_preference = 0.5;  // p
    double sugar_preference = 0.5;  // q, must equal 1 - p
    double incubation_days = 10.0;  // tau
    double efficacy = 0.8;          // gamma
    double reversion_rate = 0.2;    // theta = 1 / persistence
    double recovery_rate = 0.05;    // mu
    double turnover_rate = 0.1;     // delta, mosquito birth = death

    /// Sets p and keeps q = 1 - p.
    ModelParams& with_blood_preference(double p);
    ModelParams& with_bait_density(double x);
    /// Sets N and M together and rederives m.
    ModelParams& with_populations(long hosts, long mosquitoes);
};

/// Literature values used throughout the figures (p and x left to the caller).
ModelParams default_params(double blood_preference = 0.5, double bait_density = 0.0);

struct Violation {
    std::string field;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool violates(const std::string& field) const;
    std::string to_string() const;
};

ValidationReport validate(const ModelParams& params);

/// Throws std::invalid_argument carrying the report text when validation fails.
void require_valid(const ModelParams& params);

} // namespace sugarbait
