#include "ep1d/weights.hpp"

#include <cmath>

namespace ep1d {

WeightFamily::WeightFamily(double A_, double center_) : A(A_), center(center_) {
    if (!(A >= 10.0))
        throw std::invalid_argument("WeightFamily invariant: scale A must be at least 10");
    if (!std::isfinite(center))
        throw std::invalid_argument("WeightFamily: center must be finite");
}

double WeightFamily::eval(double z, int deriv) const {
    const double t = z / A;
    const double sech = 1.0 / std::cosh(t);
    const double sech2 = sech * sech;
    const double tanh = std::tanh(t);
    switch (deriv) {
        case 0: return A * tanh;
        case 1: return sech2;
        case 2: return -2.0 / A * sech2 * tanh;
        case 3: return 2.0 / (A * A) * sech2 * (2.0 * tanh * tanh - sech2);
        default: throw std::invalid_argument("WeightFamily::eval: deriv must be 0..3");
    }
}

Field WeightFamily::eval_on(const Grid& g, int deriv) const {
    Field out(g);
    for (int j = 0; j < g.points; ++j) out[j] = eval(g.wrap(g.node(j) - center), deriv);
    return out;
}

Field sech_weight(const Grid& g, double A, double center) {
    Field out(g);
    for (int j = 0; j < g.points; ++j)
        out[j] = 1.0 / std::cosh(g.wrap(g.node(j) - center) / A);
    return out;
}

Field cosh_weight(const Grid& g, double A, double center) {
    Field out(g);
    for (int j = 0; j < g.points; ++j) out[j] = std::cosh(g.wrap(g.node(j) - center) / A);
    return out;
}

}  // namespace ep1d
