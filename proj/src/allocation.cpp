#include "sugarbait/allocation.hpp"

#include "sugarbait/rounding.hpp"
#include "sugarbait/textio.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace sugarbait {

long BaitAllocation::total_baits() const
{
    return std::accumulate(baits_by_class.begin(), baits_by_class.end(), 0L);
}

double allocation_objective(const AttractivenessProfile& profile, const std::vector<long>& baits)
{
    if (baits.size() != profile.size())
        throw std::invalid_argument("allocation class count differs from profile");
    double total = 0.0;
    for (std::size_t i = 0; i < baits.size(); ++i)
        total += profile[i].k * static_cast<double>(baits[i]);
    return total;
}

BaitAllocation make_allocation(const AttractivenessProfile& profile, std::vector<long> baits,
                               std::vector<long> constraints, long budget)
{
    if (baits.size() != profile.size() || constraints.size() != profile.size())
        throw std::invalid_argument("allocation class count differs from profile");
    for (std::size_t i = 0; i < baits.size(); ++i) {
        if (constraints[i] < 0)
            throw std::invalid_argument("negative bait constraint for class " + std::to_string(i));
        if (baits[i] < 0 || baits[i] > constraints[i])
            throw std::invalid_argument("bait count for class " + std::to_string(i) + " outside [0, C_i]");
    }
    if (budget < 0)
        throw std::invalid_argument("negative bait budget");

    BaitAllocation alloc;
    alloc.effective_y = allocation_objective(profile, baits) / static_cast<double>(profile.n_hosts());
    alloc.baits_by_class = std::move(baits);
    alloc.constraints_by_class = std::move(constraints);
    alloc.budget = budget;
    return alloc;
}

namespace {

void check_inputs(const AttractivenessProfile& profile, const std::vector<long>& constraints, long budget)
{
    if (constraints.size() != profile.size())
        throw std::invalid_argument("constraint count differs from profile class count");
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        if (constraints[i] < 0)
            throw std::invalid_argument("negative bait constraint for class " + std::to_string(i));
    }
    if (budget < 0)
        throw std::invalid_argument("negative bait budget");
}

} // namespace

BaitAllocation greedy_allocate(const AttractivenessProfile& profile, const std::vector<long>& constraints, long budget)
{
    check_inputs(profile, constraints, budget);

    std::map<double, std::size_t> by_k;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const auto [it, inserted] = by_k.emplace(profile[i].k, i);
        if (!inserted)
            throw std::invalid_argument("duplicate attractiveness factor k=" + format_double(profile[i].k)
                                        + " in classes " + std::to_string(it->second) + " and "
                                        + std::to_string(i) + "; greedy allocation needs distinct k");
    }

    std::vector<long> baits(profile.size(), 0);
    long remaining = budget;
    for (auto it = by_k.rbegin(); it != by_k.rend() && remaining > 0; ++it) {
        const auto idx = it->second;
        baits[idx] = std::min(constraints[idx], remaining);
        remaining -= baits[idx];
    }
    return make_allocation(profile, std::move(baits), constraints, budget);
}

BruteForceResult brute_force_allocate(const AttractivenessProfile& profile, const std::vector<long>& constraints,
                                      long budget)
{
    check_inputs(profile, constraints, budget);

    double size = 1.0;
    for (auto c : constraints)
        size *= static_cast<double>(c) + 1.0;
    if (size > kBruteForceLimit)
        throw std::invalid_argument("instance too large for exhaustive search");

    const long capacity = std::accumulate(constraints.begin(), constraints.end(), 0L);
    const long target = std::min(budget, capacity);
    const std::size_t n = constraints.size();

    // suffix capacities let the recursion skip branches that cannot reach the target sum
    std::vector<long> suffix(n + 1, 0);
    for (std::size_t i = n; i-- > 0;)
        suffix[i] = suffix[i + 1] + constraints[i];

    BruteForceResult result;
    std::vector<long> current(n, 0);
    std::vector<long> best;
    double best_value = -1.0;
    std::size_t ties = 0;

    auto visit = [&](auto&& self, std::size_t idx, long left, double value) -> void {
        if (idx == n) {
            if (left != 0)
                return;
            ++result.feasible_count;
            const double tol = 1e-12 * std::max(1.0, std::abs(best_value));
            if (value > best_value + tol) {
                best_value = value;
                best = current;
                ties = 1;
            } else if (std::abs(value - best_value) <= tol) {
                ++ties;
            }
            return;
        }
        const long lo = std::max(0L, left - suffix[idx + 1]);
        const long hi = std::min(constraints[idx], left);
        for (long b = lo; b <= hi; ++b) {
            current[idx] = b;
            self(self, idx + 1, left - b, value + profile[idx].k * static_cast<double>(b));
        }
        current[idx] = 0;
    };
    visit(visit, 0, target, 0.0);

    result.objective = best_value;
    result.unique = ties == 1;
    result.best = make_allocation(profile, best, constraints, budget);
    return result;
}

std::vector<long> proportional_constraints(const AttractivenessProfile& profile, double bait_density)
{
    if (!(bait_density >= 0.0))
        throw std::invalid_argument("bait density must be >= 0");
    std::vector<double> shares(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i)
        shares[i] = bait_density * profile[i].k * static_cast<double>(profile[i].count) / profile.k_mean();
    const long total = std::lround(static_cast<double>(profile.n_hosts()) * bait_density);
    return largest_remainder_round(shares, total);
}

void write_allocation_table(std::ostream& out, const AttractivenessProfile& profile, const BaitAllocation& alloc)
{
    out << "# k C B\n";
    out << "# budget " << alloc.budget << " y " << format_double(alloc.effective_y) << '\n';
    for (std::size_t i = 0; i < profile.size(); ++i)
        out << format_double(profile[i].k) << ' ' << alloc.constraints_by_class[i] << ' ' << alloc.baits_by_class[i]
            << '\n';
}

AllocationTable read_allocation_table(std::istream& in)
{
    AllocationTable table;
    for (const auto& row : read_numeric_rows(in)) {
        if (row.values.size() != 3)
            throw std::invalid_argument("allocation table line " + std::to_string(row.line)
                                        + ": expected 3 columns (k C B)");
        table.k.push_back(row.values[0]);
        table.constraints.push_back(std::lround(row.values[1]));
        table.baits.push_back(std::lround(row.values[2]));
    }
    return table;
}

} // namespace sugarbait
