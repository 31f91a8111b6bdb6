#pragma once

#include <functional>

namespace ep1d {

// Adaptive Gauss-Kronrod 7/15 on [a, b]. Bisects until the embedded error
// estimate on every panel is below tol (absolute, scaled by panel share).
// Throws std::runtime_error if the panel stack exceeds max_depth splits
// without meeting tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12, int max_depth = 60);

}  // namespace ep1d
