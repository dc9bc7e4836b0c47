#pragma once

// Small scalar solvers shared by the parameter and roundoff modules.

#include <cmath>
#include <utility>

#include "talbot/errors.hpp"

namespace talbot::detail {

/// Bisection for a sign change of f on [lo, hi], then one secant polish
/// step kept only if it stays inside the final bracket and does not worsen |f|.
template <class F>
double bracketed_root(F&& f, double lo, double hi, double xtol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) throw OutOfRange("root is not bracketed");
    for (int it = 0; it < 400 && hi - lo > xtol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }
    double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
    const double fbest = std::abs(flo) < std::abs(fhi) ? flo : fhi;
    if (fhi != flo) {
        const double polished = lo - flo * (hi - lo) / (fhi - flo);
        if (polished >= lo && polished <= hi && std::abs(f(polished)) <= std::abs(fbest)) {
            best = polished;
        }
    }
    return best;
}

/// Golden-section search for the maximizer of a unimodal f on [lo, hi].
/// Returns the final bracket (a, b) with b - a <= width.
template <class F>
std::pair<double, double> golden_maximize(F&& f, double lo, double hi, double width) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > width) {
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return {a, b};
}

}  // namespace talbot::detail
