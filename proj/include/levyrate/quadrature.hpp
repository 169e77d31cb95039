#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace levyrate {

// Adaptive Gauss-Kronrod (G7,K15) integration on a finite interval.
// Bisects until the local |K15-G7| estimate fits within the allotted share
// of the absolute tolerance. Integrands here are smooth except for isolated
// kinks from positive parts, which bisection isolates quickly.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

}  // namespace levyrate
