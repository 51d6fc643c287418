#pragma once

#include <span>
#include <vector>

namespace sugarbait {

/// Rounds nonnegative real shares to integers summing exactly to `total`.
/// Floors every share, then hands out the remaining units by largest
/// fractional part (ties go to the lower index).
std::vector<long> largest_remainder_round(std::span<const double> shares, long total);

} // namespace sugarbait
