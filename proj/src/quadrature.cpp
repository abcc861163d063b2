#include "impulse/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

#include "impulse/errors.hpp"

namespace impulse {

namespace {

// 15-point Kronrod / 7-point Gauss pair on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = kWg[3] * fc;
    double resk = kWgk[7] * fc;
    for (int j = 0; j < 3; ++j) {
        const int i = 2 * j + 1;
        const double fv = f(c - h * kXgk[i]) + f(c + h * kXgk[i]);
        resg += kWg[j] * fv;
        resk += kWgk[i] * fv;
    }
    for (int j = 0; j < 4; ++j) {
        const int i = 2 * j;
        resk += kWgk[i] * (f(c - h * kXgk[i]) + f(c + h * kXgk[i]));
    }
    return {a, b, resk * h, std::abs((resk - resg) * h)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const Quadrature& q) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }

    std::priority_queue<Segment> segs;
    segs.push(gk15(f, a, b));
    double total = segs.top().value;
    double err = segs.top().error;

    int used = 1;
    while (err > std::max(q.abs_tol, q.rel_tol * std::abs(total))) {
        if (used >= q.max_subdivisions)
            throw QuadratureFailure("integral did not converge within max_subdivisions");
        Segment worst = segs.top();
        segs.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = gk15(f, worst.a, mid);
        Segment right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        segs.push(left);
        segs.push(right);
        ++used;
    }
    return sign * total;
}

}  // namespace impulse
