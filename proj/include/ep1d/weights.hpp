#pragma once

#include "ep1d/field.hpp"

namespace ep1d {

// Slowly varying virial weight A*tanh(x/A) and its derivatives, evaluated on
// the wrapped displacement x - center. The scale obeys
//   0 < d/dx weight = sech^2(x/A) <= 1,
//   |d2| <= (2/A) d1,  |d3| <= (4/A^2) d1,
// which is what the localized virial estimates trade on. A >= 10 keeps the
// commutator costs of weighting inside the fitted constants.
struct WeightFamily {
    double A = 10.0;
    double center = 0.0;

    WeightFamily() = default;
    WeightFamily(double A_, double center_);

    double eval(double displacement, int deriv) const;  // deriv in 0..3
    Field eval_on(const Grid& g, int deriv) const;      // wrapped x - center

    WeightFamily recentered(double new_center) const { return {A, new_center}; }
};

// sech((x - center)/A) and cosh((x - center)/A) on wrapped displacement;
// companions of the weighted resolvent bounds.
Field sech_weight(const Grid& g, double A, double center = 0.0);
Field cosh_weight(const Grid& g, double A, double center = 0.0);

}  // namespace ep1d
