#pragma once

#include "sugarbait/profile.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sugarbait {

/// Per-class bait counts B_i under capacities C_i.
struct BaitAllocation {
    std::vector<long> baits_by_class;
    std::vector<long> constraints_by_class;
    long budget = 0;
    double effective_y = 0.0; // sum_i k_i B_i / N

    long total_baits() const;
};

/// Builds an allocation from explicit counts, computing y against the profile.
/// Throws if a count is negative, exceeds its capacity, or the class count differs.
BaitAllocation make_allocation(const AttractivenessProfile& profile, std::vector<long> baits,
                               std::vector<long> constraints, long budget);

/// Sum_i k_i B_i, the quantity both allocators maximize.
double allocation_objective(const AttractivenessProfile& profile, const std::vector<long>& baits);

/// Fills classes to capacity in strictly decreasing k until the budget runs out.
/// Rejects tied attractiveness factors, since the optimum is then not unique.
BaitAllocation greedy_allocate(const AttractivenessProfile& profile, const std::vector<long>& constraints, long budget);

struct BruteForceResult {
    BaitAllocation best;
    double objective = 0.0;
    bool unique = true;
    std::size_t feasible_count = 0;
};

inline constexpr double kBruteForceLimit = 1e7;

/// Exhaustive search over all integer allocations with sum min(budget, sum C).
/// Only for instances with prod(C_i + 1) <= 1e7. Tolerates tied k.
BruteForceResult brute_force_allocate(const AttractivenessProfile& profile, const std::vector<long>& constraints,
                                      long budget);

/// C_i = x k_i N_i / k_mean, rounded by largest remainder so that sum C = round(N x).
std::vector<long> proportional_constraints(const AttractivenessProfile& profile, double bait_density);

/// Three-column text table "k C B", '#' comments allowed.
void write_allocation_table(std::ostream& out, const AttractivenessProfile& profile, const BaitAllocation& alloc);

struct AllocationTable {
    std::vector<double> k;
    std::vector<long> constraints;
    std::vector<long> baits;
};
AllocationTable read_allocation_table(std::istream& in);

} // namespace sugarbait
