#pragma once

#include "sugarbait/allocation.hpp"
#include "sugarbait/params.hpp"
#include "sugarbait/profile.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sugarbait {

enum class ModelVariant { Homogeneous, HeterogeneousUniform, HeterogeneousTargeted };

std::string to_string(ModelVariant variant);

struct R0Result {
    double r0 = 0.0;
    double lambda_eff = 0.0;   // exposed-class loss rate (Lambda or zeta)
    double removed_frac = 0.0; // r or r_m2
    ModelVariant variant = ModelVariant::Homogeneous;
    double bait_weight = 0.0;  // x for uniform baits, y for targeted ones
};

/// Reproductive number of the heterogeneous mixing model written in terms of
/// the attractiveness moments and an attractiveness-weighted bait density w:
///
///   r   = a g q w / ((p kbar + q w)(delta + theta) + a g q w)
///   zeta = delta + a g q w / (p kbar + q w)
///   R0  = a^2 b c m p^2 kbar kappa (1 - r) exp(-zeta tau) / (delta mu (p kbar + q w)^2)
///
/// The homogeneous model is kbar = kappa = 1, w = x.
R0Result r0_from_moments(const ModelParams& params, double k_mean, double kappa, double bait_weight, ModelVariant variant);

R0Result r0_homogeneous(const ModelParams& params);
R0Result r0_heterogeneous(const ModelParams& params, const AttractivenessProfile& profile);
/// Targeted baits: w = y = sum k_i B_i / N. Throws on a class-count mismatch.
R0Result r0_targeted(const ModelParams& params, const AttractivenessProfile& profile, const BaitAllocation& alloc);
/// Closed form for capacities C_i = x k_i N_i / kbar fully used, i.e. y = x kappa.
R0Result r0_proportional_targeted(const ModelParams& params, const AttractivenessProfile& profile);

struct EquilibriumResult {
    double i_h = 0.0;
    double i_m = 0.0;
    double r_m = 0.0;
    bool endemic = false;
};

/// Closed-form equilibrium of the homogeneous proportion system. Returns the
/// disease-free point (0, 0, r) when R0 <= 1.
EquilibriumResult endemic_equilibrium_homogeneous(const ModelParams& params);

struct BaitScenario {
    ModelVariant variant = ModelVariant::Homogeneous;
    const AttractivenessProfile* profile = nullptr; // required unless Homogeneous
};

/// R0 for the scenario at the given bait density (targeted uses the proportional rule).
R0Result r0_for_scenario(const ModelParams& params, const BaitScenario& scenario);

struct CriticalDensity {
    double x = 0.0;
    bool subcritical_without_baits = false; // R0(0) <= 1, so no baits are needed
};

struct CriticalSearch {
    double x_max = 100.0;
    double abs_tol = 1e-6;
};

/// Smallest x >= 0 with R0(x) <= 1, by bisection. Throws std::domain_error
/// ("threshold beyond search bound") if R0(x_max) > 1.
CriticalDensity critical_bait_density(const ModelParams& params, const BaitScenario& scenario,
                                      const CriticalSearch& search = {});

/// Same search over an arbitrary R0(x) that decreases in x.
CriticalDensity critical_bait_density(const std::function<double(double)>& r0_of_x, const CriticalSearch& search = {});

enum class Stability { Stable, Marginal, Unstable };

std::string to_string(Stability verdict);

struct StabilityVerdict {
    double r0 = 0.0;
    double f_at_zero = 0.0;  // delta mu (1 - R0)
    double lambda_max = 0.0; // upper end of the scanned real axis
    bool has_positive_real_root = false;
    std::optional<double> positive_root;
    /// Roots of the linear factors of the characteristic equation; all negative.
    std::vector<double> linear_factor_roots;
    Stability verdict = Stability::Stable;
};

/// F(lambda) = lambda^2 + lambda (delta + mu) + delta mu - R0 exp(-lambda tau) delta mu.
double characteristic_function(double lambda, double delta, double mu, double tau, double r0);

/// Real-axis probe of F on (0, lambda_max] with lambda_max = delta + mu + R0 delta mu + 1.
StabilityVerdict probe_characteristic(double delta, double mu, double tau, double r0);

/// Disease-free equilibrium stability for the scenario's R0.
StabilityVerdict stability_probe(const ModelParams& params, const BaitScenario& scenario);

} // namespace sugarbait
