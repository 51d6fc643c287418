#include "sugarbait/analytics.hpp"

#include "sugarbait/root_finding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sugarbait {

std::string to_string(ModelVariant variant)
{
    switch (variant) {
    case ModelVariant::Homogeneous:
        return "homogeneous";
    case ModelVariant::HeterogeneousUniform:
        return "heterogeneous-uniform";
    case ModelVariant::HeterogeneousTargeted:
        return "heterogeneous-targeted";
    }
    return "unknown";
}

std::string to_string(Stability verdict)
{
    switch (verdict) {
    case Stability::Stable:
        return "stable";
    case Stability::Marginal:
        return "marginal";
    case Stability::Unstable:
        return "unstable";
    }
    return "unknown";
}

R0Result r0_from_moments(const ModelParams& params, double k_mean, double kappa, double bait_weight, ModelVariant variant)
{
    require_valid(params);
    const double a = params.bite_rate;
    const double p = params.blood_preference;
    const double q = params.sugar_preference;
    const double delta = params.turnover_rate;
    const double theta = params.reversion_rate;
    const double gamma = params.efficacy;

    const double meal_weight = p * k_mean + q * bait_weight;
    const double bait_removal = a * gamma * q * bait_weight;

    R0Result result;
    result.variant = variant;
    result.bait_weight = bait_weight;
    result.removed_frac = bait_removal / (meal_weight * (delta + theta) + bait_removal);
    result.lambda_eff = delta + bait_removal / meal_weight;
    result.r0 = a * a * params.p_infect_human * params.p_infect_mosquito * params.mosquito_density * p * p * k_mean
                * kappa * (1.0 - result.removed_frac) * std::exp(-result.lambda_eff * params.incubation_days)
                / (delta * params.recovery_rate * meal_weight * meal_weight);
    return result;
}

R0Result r0_homogeneous(const ModelParams& params)
{
    return r0_from_moments(params, 1.0, 1.0, params.bait_density, ModelVariant::Homogeneous);
}

R0Result r0_heterogeneous(const ModelParams& params, const AttractivenessProfile& profile)
{
    return r0_from_moments(params, profile.k_mean(), profile.kappa(), params.bait_density,
                           ModelVariant::HeterogeneousUniform);
}

R0Result r0_targeted(const ModelParams& params, const AttractivenessProfile& profile, const BaitAllocation& alloc)
{
    if (alloc.baits_by_class.size() != profile.size())
        throw std::invalid_argument("allocation has " + std::to_string(alloc.baits_by_class.size())
                                    + " classes but profile has " + std::to_string(profile.size()));
    return r0_from_moments(params, profile.k_mean(), profile.kappa(), alloc.effective_y,
                           ModelVariant::HeterogeneousTargeted);
}

R0Result r0_proportional_targeted(const ModelParams& params, const AttractivenessProfile& profile)
{
    return r0_from_moments(params, profile.k_mean(), profile.kappa(), params.bait_density * profile.kappa(),
                           ModelVariant::HeterogeneousTargeted);
}

EquilibriumResult endemic_equilibrium_homogeneous(const ModelParams& params)
{
    const auto r0 = r0_homogeneous(params);
    const double r = r0.removed_frac;

    EquilibriumResult eq;
    if (r0.r0 <= 1.0) {
        eq.r_m = r;
        return eq;
    }

    const double a = params.bite_rate;
    const double b = params.p_infect_human;
    const double c = params.p_infect_mosquito;
    const double m = params.mosquito_density;
    const double p = params.blood_preference;
    const double q = params.sugar_preference;
    const double x = params.bait_density;
    const double mu = params.recovery_rate;
    const double delta = params.turnover_rate;
    const double theta = params.reversion_rate;
    const double gamma = params.efficacy;

    const double s = p + q * x;
    const double survival = std::exp(-r0.lambda_eff * params.incubation_days);
    const double excess = r0.r0 - 1.0;

    eq.i_h = excess * delta * mu * s * s / ((1.0 - r) * a * c * p * survival * (a * b * m * p + mu * s));
    eq.i_m = excess * s * s * mu * delta
             / (a * b * m * p * (1.0 - r) * (delta * s + a * c * p * survival + delta * a * gamma * q * x / (delta + theta)));
    eq.r_m = r * (1.0 - eq.i_m);
    eq.endemic = eq.i_h > 0.0;
    return eq;
}

R0Result r0_for_scenario(const ModelParams& params, const BaitScenario& scenario)
{
    if (scenario.variant != ModelVariant::Homogeneous && scenario.profile == nullptr)
        throw std::invalid_argument("heterogeneous scenario needs an attractiveness profile");
    switch (scenario.variant) {
    case ModelVariant::Homogeneous:
        return r0_homogeneous(params);
    case ModelVariant::HeterogeneousUniform:
        return r0_heterogeneous(params, *scenario.profile);
    case ModelVariant::HeterogeneousTargeted:
        return r0_proportional_targeted(params, *scenario.profile);
    }
    throw std::invalid_argument("unknown scenario");
}

CriticalDensity critical_bait_density(const std::function<double(double)>& r0_of_x, const CriticalSearch& search)
{
    CriticalDensity out;
    if (r0_of_x(0.0) <= 1.0) {
        out.subcritical_without_baits = true;
        return out;
    }
    if (r0_of_x(search.x_max) > 1.0)
        throw std::domain_error("threshold beyond search bound (R0 > 1 at x = " + std::to_string(search.x_max) + ")");

    // keep the invariant R0(lo) > 1 >= R0(hi); return hi so the answer is on the safe side
    double lo = 0.0;
    double hi = search.x_max;
    while (hi - lo > search.abs_tol) {
        const double mid = 0.5 * (lo + hi);
        if (r0_of_x(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    out.x = hi;
    return out;
}

CriticalDensity critical_bait_density(const ModelParams& params, const BaitScenario& scenario,
                                      const CriticalSearch& search)
{
    auto r0_of_x = [&](double x) {
        ModelParams trial = params;
        trial.bait_density = x;
        return r0_for_scenario(trial, scenario).r0;
    };
    return critical_bait_density(r0_of_x, search);
}

double characteristic_function(double lambda, double delta, double mu, double tau, double r0)
{
    return lambda * lambda + lambda * (delta + mu) + delta * mu - r0 * std::exp(-lambda * tau) * delta * mu;
}

StabilityVerdict probe_characteristic(double delta, double mu, double tau, double r0)
{
    StabilityVerdict v;
    v.r0 = r0;
    v.f_at_zero = characteristic_function(0.0, delta, mu, tau, r0);
    v.lambda_max = delta + mu + r0 * delta * mu + 1.0;

    auto f = [&](double lambda) { return characteristic_function(lambda, delta, mu, tau, r0); };

    // scan for the first sign change on (0, lambda_max], then refine it
    constexpr int kSegments = 256;
    double lo = 0.0;
    double f_lo = v.f_at_zero;
    for (int i = 1; i <= kSegments && !v.has_positive_real_root; ++i) {
        const double hi = v.lambda_max * static_cast<double>(i) / kSegments;
        const double f_hi = f(hi);
        const bool crosses = (f_lo < 0.0 && f_hi >= 0.0) || (f_lo > 0.0 && f_hi <= 0.0);
        if (crosses) {
            const auto root = bisect(f, lo, hi, 1e-15 * std::max(1.0, hi));
            if (root && *root > 0.0) {
                v.has_positive_real_root = true;
                v.positive_root = root;
            }
        }
        lo = hi;
        f_lo = f_hi;
    }

    if (v.has_positive_real_root)
        v.verdict = Stability::Unstable;
    else if (v.f_at_zero == 0.0)
        v.verdict = Stability::Marginal;
    else
        v.verdict = Stability::Stable;
    return v;
}

StabilityVerdict stability_probe(const ModelParams& params, const BaitScenario& scenario)
{
    const auto r0 = r0_for_scenario(params, scenario);
    auto v = probe_characteristic(params.turnover_rate, params.recovery_rate, params.incubation_days, r0.r0);

    const double k_mean = scenario.variant == ModelVariant::Homogeneous ? 1.0 : scenario.profile->k_mean();
    const double meal_weight = params.blood_preference * k_mean + params.sugar_preference * r0.bait_weight;
    const double bait_loss =
        params.bite_rate * params.efficacy * params.sugar_preference * r0.bait_weight / meal_weight;
    v.linear_factor_roots.push_back(-(params.turnover_rate + params.reversion_rate + bait_loss));
    if (scenario.variant != ModelVariant::Homogeneous)
        v.linear_factor_roots.push_back(-params.recovery_rate);
    return v;
}

} // namespace sugarbait
