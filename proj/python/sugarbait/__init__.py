"""Malaria transmission with attractive toxic sugar baits."""

from ._core import (
    AttractivenessProfile,
    ModelParams,
    R0Result,
    Scenario,
    ScenarioError,
    critical_bait_density,
    endemic_equilibrium,
    greedy_allocate,
    integrate_homogeneous,
    load_scenario,
    poisson_profile,
    power_law_profile,
    r0_heterogeneous,
    r0_homogeneous,
    r0_proportional_targeted,
    r0_targeted,
    run_command,
    scenario_r0,
    simulate_homogeneous,
    single_class_profile,
    stability,
    default_params,
)

__all__ = [
    "AttractivenessProfile",
    "ModelParams",
    "R0Result",
    "Scenario",
    "ScenarioError",
    "critical_bait_density",
    "endemic_equilibrium",
    "greedy_allocate",
    "integrate_homogeneous",
    "load_scenario",
    "poisson_profile",
    "power_law_profile",
    "r0_heterogeneous",
    "r0_homogeneous",
    "r0_proportional_targeted",
    "r0_targeted",
    "run_command",
    "scenario_r0",
    "simulate_homogeneous",
    "single_class_profile",
    "stability",
    "default_params",
]
