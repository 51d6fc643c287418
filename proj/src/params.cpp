#include "sugarbait/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sugarbait {

ModelParams& ModelParams::with_blood_preference(double p)
{
    blood_preference = p;
    sugar_preference = 1.0 - p;
    return *this;
}

ModelParams& ModelParams::with_bait_density(double x)
{
    bait_density = x;
    return *this;
}

ModelParams& ModelParams::with_populations(long hosts, long mosquitoes)
{
    n_hosts = hosts;
    n_mosquitoes = mosquitoes;
    mosquito_density = hosts > 0 ? static_cast<double>(mosquitoes) / static_cast<double>(hosts) : 0.0;
    return *this;
}

ModelParams default_params(double blood_preference, double bait_density)
{
    ModelParams params;
    params.with_populations(1000, 2000);
    params.bite_rate = 0.5;
    params.p_infect_human = 0.5;
    params.p_infect_mosquito = 0.5;
    params.incubation_days = 10.0;
    params.efficacy = 0.8;
    params.reversion_rate = 0.2;
    params.recovery_rate = 0.05;
    params.turnover_rate = 0.1;
    params.with_blood_preference(blood_preference);
    params.with_bait_density(bait_density);
    return params;
}

bool ValidationReport::violates(const std::string& field) const
{
    for (const auto& v : violations) {
        if (v.field == field)
            return true;
    }
    return false;
}

std::string ValidationReport::to_string() const
{
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i > 0)
            out << "; ";
        out << violations[i].message;
    }
    return out.str();
}

namespace {

void check_probability(ValidationReport& report, const char* field, double value)
{
    if (!std::isfinite(value) || value < 0.0 || value > 1.0)
        report.violations.push_back({field, std::string(field) + " out of [0,1]"});
}

void check_positive(ValidationReport& report, const char* field, double value)
{
    if (!std::isfinite(value) || value <= 0.0)
        report.violations.push_back({field, std::string(field) + " must be > 0"});
}

} // namespace

ValidationReport validate(const ModelParams& params)
{
    ValidationReport report;

    if (params.n_hosts <= 0)
        report.violations.push_back({"n_hosts", "n_hosts must be a positive count"});
    if (params.n_mosquitoes <= 0)
        report.violations.push_back({"n_mosquitoes", "n_mosquitoes must be a positive count"});

    check_probability(report, "p_infect_human", params.p_infect_human);
    check_probability(report, "p_infect_mosquito", params.p_infect_mosquito);
    check_probability(report, "blood_preference", params.blood_preference);
    check_probability(report, "sugar_preference", params.sugar_preference);
    check_probability(report, "efficacy", params.efficacy);

    if (std::isfinite(params.blood_preference) && std::isfinite(params.sugar_preference)
        && std::abs(params.sugar_preference - (1.0 - params.blood_preference)) > 1e-12)
        report.violations.push_back({"sugar_preference", "q != 1 - p (sugar_preference must equal 1 - blood_preference)"});

    check_positive(report, "bite_rate", params.bite_rate);
    check_positive(report, "recovery_rate", params.recovery_rate);
    check_positive(report, "turnover_rate", params.turnover_rate);
    check_positive(report, "reversion_rate", params.reversion_rate);
    check_positive(report, "incubation_days", params.incubation_days);
    check_positive(report, "mosquito_density", params.mosquito_density);

    if (!std::isfinite(params.bait_density) || params.bait_density < 0.0)
        report.violations.push_back({"bait_density", "bait_density must be >= 0"});

    // m and M/N may disagree by at most one mosquito's worth of density.
    if (params.n_hosts > 0 && params.n_mosquitoes > 0 && std::isfinite(params.mosquito_density)) {
        const double implied = static_cast<double>(params.n_mosquitoes) / static_cast<double>(params.n_hosts);
        if (std::abs(implied - params.mosquito_density) > 1.0 / static_cast<double>(params.n_hosts) + 1e-12)
            report.violations.push_back({"mosquito_density", "mosquito_density inconsistent with n_mosquitoes / n_hosts"});
    }

    return report;
}

void require_valid(const ModelParams& params)
{
    const auto report = validate(params);
    if (!report.ok())
        throw std::invalid_argument("invalid model parameters: " + report.to_string());
}

} // namespace sugarbait
