#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace sugarbait {

/// Bisection on [lo, hi] for a sign change of f. Returns the midpoint of the
/// final bracket once it is narrower than `abs_tol`, or nullopt if f(lo) and
/// f(hi) share a strict sign.
template <class F>
std::optional<double> bisect(F&& f, double lo, double hi, double abs_tol, int max_iter = 400)
{
    if (!(lo <= hi))
        throw std::invalid_argument("bisect: empty interval");
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0)
        return lo;
    if (f_hi == 0.0)
        return hi;
    if ((f_lo < 0.0) == (f_hi < 0.0))
        return std::nullopt;

    for (int it = 0; it < max_iter && hi - lo > abs_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0)
            return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace sugarbait
