#include "ep1d/random_fields.hpp"

#include <cmath>

#include "ep1d/spectral.hpp"

namespace ep1d {

namespace {

Field mode_sum(const Grid& g, std::mt19937_64& rng, double xi_max) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int max_m = std::max(1, static_cast<int>(xi_max * g.length / (2.0 * M_PI)));
    Field f(g);
    for (int m = 1; m <= max_m; ++m) {
        const double a = gauss(rng), b = gauss(rng);
        const double xi = 2.0 * M_PI * m / g.length;
        for (int j = 0; j < g.points; ++j) {
            const double x = g.node(j);
            f[j] += a * std::cos(xi * x) + b * std::sin(xi * x);
        }
    }
    return f;
}

}  // namespace

Field random_bandlimited(const Grid& g, std::mt19937_64& rng, double xi_max,
                         double target_linf) {
    Field f = mode_sum(g, rng, xi_max);
    const double m = max_abs(f);
    if (m > 0.0) f *= target_linf / m;
    return f;
}

Field random_localized(const Grid& g, std::mt19937_64& rng, double xi_max, double target_l2) {
    std::uniform_real_distribution<double> center(-0.25 * g.length, 0.25 * g.length);
    std::uniform_real_distribution<double> width(2.0, 8.0);
    Field f = mode_sum(g, rng, xi_max);
    const double x0 = center(rng), w = width(rng);
    for (int j = 0; j < g.points; ++j) {
        const double z = (g.node(j) - x0) / w;
        f[j] *= std::exp(-z * z);
    }
    const double l2 = norms(f).l2;
    if (l2 > 0.0) f *= target_l2 / l2;
    return f;
}

}  // namespace ep1d
