#pragma once

#include <functional>

namespace nclab {

// Adaptive Gauss-Kronrod 15(7) integration on [a, b] to absolute tolerance.
// Bisects until the embedded error estimate falls below the local budget.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, int max_depth = 40);

}  // namespace nclab
