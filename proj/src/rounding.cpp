#include "sugarbait/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sugarbait {

std::vector<long> largest_remainder_round(std::span<const double> shares, long total)
{
    if (total < 0)
        throw std::invalid_argument("largest_remainder_round: negative total");

    std::vector<long> counts(shares.size(), 0);
    std::vector<double> remainder(shares.size(), 0.0);
    long assigned = 0;
    for (std::size_t i = 0; i < shares.size(); ++i) {
        if (!std::isfinite(shares[i]) || shares[i] < 0.0)
            throw std::invalid_argument("largest_remainder_round: shares must be finite and nonnegative");
        const double floor_share = std::floor(shares[i]);
        counts[i] = static_cast<long>(floor_share);
        remainder[i] = shares[i] - floor_share;
        assigned += counts[i];
    }

    std::vector<std::size_t> order(shares.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t lhs, std::size_t rhs) { return remainder[lhs] > remainder[rhs]; });

    // Shares that already overshoot the total after flooring lose units from the smallest remainders.
    long missing = total - assigned;
    std::size_t cursor = 0;
    while (missing > 0 && !order.empty()) {
        ++counts[order[cursor % order.size()]];
        --missing;
        ++cursor;
    }
    cursor = order.size();
    while (missing < 0 && cursor > 0) {
        const auto idx = order[--cursor];
        if (counts[idx] > 0) {
            --counts[idx];
            ++missing;
        }
        if (cursor == 0 && missing < 0)
            cursor = order.size();
    }
    return counts;
}

} // namespace sugarbait
