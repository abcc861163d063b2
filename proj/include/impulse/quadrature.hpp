#pragma once

#include <functional>

namespace impulse {

/// Tolerances for the adaptive integrator used by Custom cost families.
struct Quadrature {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 4000;
};

/// Adaptive Gauss-Kronrod (7-15) integration of f over [a, b].
/// Throws QuadratureFailure when the tolerance is not reached within
/// max_subdivisions intervals. Handles a > b with the usual sign flip.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Quadrature& q);

}  // namespace impulse
