#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "impulse/errors.hpp"

namespace impulse {

/// Bracketed bisection to absolute interval width `xtol`. Every target
/// function in this project is monotone on its bracket.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol = 1e-12, int max_iter = 500,
              const char* what = "bisect") {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw NoBracket(std::string(what) + ": no sign change on the bracket");
    for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // ran out of doubles
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Expands [anchor - step, anchor] leftward (doubling the step) until
/// `f` changes sign against f(anchor), then bisects. `limit` caps the
/// expansion; exceeding it throws NoBracket.
template <class F>
double bisect_expand_left(F&& f, double anchor, double step, double limit,
                          double xtol = 1e-12) {
    const double fa = f(anchor);
    double lo = anchor - step;
    while (lo > limit && (f(lo) > 0) == (fa > 0)) {
        step *= 2.0;
        lo = anchor - step;
    }
    if (lo <= limit) throw NoBracket("bisect_expand_left: sign change not found");
    return bisect(std::forward<F>(f), lo, anchor, xtol);
}

template <class F>
double bisect_expand_right(F&& f, double anchor, double step, double limit,
                           double xtol = 1e-12) {
    const double fa = f(anchor);
    double hi = anchor + step;
    while (hi < limit && (f(hi) > 0) == (fa > 0)) {
        step *= 2.0;
        hi = anchor + step;
    }
    if (hi >= limit) throw NoBracket("bisect_expand_right: sign change not found");
    return bisect(std::forward<F>(f), anchor, hi, xtol);
}

}  // namespace impulse
