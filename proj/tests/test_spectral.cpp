#include <doctest.h>

#include <cmath>
#include <random>

#include "ep1d/quadrature.hpp"
#include "ep1d/spectral.hpp"
#include "ep1d/weights.hpp"

using namespace ep1d;

namespace {

// deterministic smooth test field: handful of low modes with seeded coefficients
Field random_smooth(const Grid& g, uint64_t seed, int max_mode = 12, double amp = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Field f(g);
    for (int m = 1; m <= max_mode; ++m) {
        const double a = gauss(rng), b = gauss(rng);
        const double xi = 2.0 * M_PI * m / g.length;
        for (int j = 0; j < g.points; ++j) {
            const double x = g.node(j);
            f[j] += a * std::cos(xi * x) + b * std::sin(xi * x);
        }
    }
    const double m = max_abs(f);
    if (m > 0.0) f *= amp / m;
    return f;
}

double max_error_vs(const Field& got, const std::function<double(double)>& exact) {
    double e = 0.0;
    for (int j = 0; j < got.grid.points; ++j)
        e = std::max(e, std::abs(got[j] - exact(got.grid.node(j))));
    return e;
}

}  // namespace

TEST_CASE("grid validation and geometry") {
    CHECK_THROWS_AS(Grid(10.0, 1000), std::invalid_argument);  // not a power of two
    CHECK_THROWS_AS(Grid(10.0, 8), std::invalid_argument);     // too few points
    CHECK_THROWS_AS(Grid(-1.0, 64), std::invalid_argument);
    Grid g(20.0, 64);
    CHECK(g.dx() == doctest::Approx(20.0 / 64).epsilon(1e-15));
    CHECK(g.node(0) == doctest::Approx(-10.0));
    CHECK(g.node(32) == doctest::Approx(0.0));
    CHECK(g.wrap(10.0) == doctest::Approx(-10.0));  // seam maps to the left end
    CHECK(g.wrap(-10.0 - 1e-3) == doctest::Approx(10.0 - 1e-3));
}

TEST_CASE("derivative: trigonometric eigenfunctions are exact") {
    Grid g(2.0 * M_PI, 256);
    const double xi = 2.0 * M_PI / g.length;  // = 1
    Field f = Field::sample(g, [&](double x) { return std::sin(xi * x); });
    CHECK(max_error_vs(derivative(f, 1), [&](double x) { return xi * std::cos(xi * x); }) <=
          1e-12);
    // FFT roundoff in the top bins is amplified by xi_Nyquist^order
    CHECK(max_error_vs(derivative(f, 2),
                       [&](double x) { return -xi * xi * std::sin(xi * x); }) <= 1e-11);
    CHECK(max_error_vs(derivative(f, 3),
                       [&](double x) { return -xi * xi * xi * std::cos(xi * x); }) <= 1e-9);
}

TEST_CASE("derivative: constants and Gaussians") {
    Grid g(40.0, 1024);
    Field c = Field::sample(g, [](double) { return 3.7; });
    CHECK(max_abs(derivative(c, 1)) <= 1e-12);

    Field f = Field::sample(g, [](double x) { return std::exp(-x * x); });
    CHECK(max_error_vs(derivative(f, 1),
                       [](double x) { return -2.0 * x * std::exp(-x * x); }) <= 1e-10);
}

TEST_CASE("derivative: invalid order rejected") {
    Grid g(10.0, 32);
    Field f = Field::zeros(g);
    CHECK_THROWS_AS(derivative(f, 0), std::invalid_argument);
    CHECK_THROWS_AS(derivative(f, 4), std::invalid_argument);
}

TEST_CASE("helmholtz_inverse: mode symbol and zero field") {
    Grid g(20.0, 256);
    const double xi = 2.0 * M_PI * 5 / g.length;
    Field f = Field::sample(g, [&](double x) { return std::cos(xi * x); });
    CHECK(max_error_vs(helmholtz_inverse(f),
                       [&](double x) { return std::cos(xi * x) / (1.0 + xi * xi); }) <= 1e-12);
    CHECK(max_abs(helmholtz_inverse(Field::zeros(g))) == 0.0);
}

TEST_CASE("helmholtz_inverse: matches whole-line Green kernel on localized data") {
    // (-d2+1)^{-1} on the line is convolution with exp(-|x|)/2; on a long
    // torus the wrap correction is ~exp(-length/2).
    Grid g(60.0, 1024);
    Field f = Field::sample(g, [](double x) { return std::exp(-x * x); });
    Field u = helmholtz_inverse(f);
    double err = 0.0;
    for (int j = 0; j < g.points; j += 16) {
        const double x = g.node(j);
        if (std::abs(x) > 12.0) continue;
        const double exact = integrate_adaptive(
            [x](double s) { return 0.5 * std::exp(-std::abs(x - s)) * std::exp(-s * s); }, -30.0,
            30.0, 1e-12);
        err = std::max(err, std::abs(u[j] - exact));
    }
    CHECK(err <= 1e-8);
}

TEST_CASE("helmholtz_inverse_v: reduces to constant-coefficient cases") {
    Grid g(40.0, 512);
    Field f = random_smooth(g, 11);
    Field a = helmholtz_inverse_v(f, Field::zeros(g));
    Field b = helmholtz_inverse(f);
    CHECK(max_abs(a - b) <= 1e-12 * std::max(1.0, max_abs(b)));

    Field vc = Field::sample(g, [](double) { return 0.4; });
    const double xi = 2.0 * M_PI * 3 / g.length;
    Field mode = Field::sample(g, [&](double x) { return std::sin(xi * x); });
    CHECK(max_error_vs(helmholtz_inverse_v(mode, vc),
                       [&](double x) { return std::sin(xi * x) / (1.4 + xi * xi); }) <= 1e-10);
}

TEST_CASE("helmholtz_inverse_v: residual tolerance and input guards") {
    Grid g(40.0, 512);
    Field f = random_smooth(g, 23);
    Field V = random_smooth(g, 29, 6, 0.3);
    int iters = 0;
    Field gsol = helmholtz_inverse_v(f, V, 1e-10, 200, &iters);
    CHECK(iters <= 200);
    Field resid = -1.0 * derivative(gsol, 2) + gsol + pointwise(V, gsol) - f;
    CHECK(std::sqrt(inner(resid, resid)) <= 1e-10 * std::sqrt(inner(f, f)));

    Field Vbig = random_smooth(g, 31, 6, 0.8);
    CHECK_THROWS_AS(helmholtz_inverse_v(f, Vbig), std::invalid_argument);
}

TEST_CASE("derivative and helmholtz_inverse commute") {
    Grid g(50.0, 1024);
    for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        Field f = random_smooth(g, seed, 40);
        Field a = derivative(helmholtz_inverse(f), 1);
        Field b = helmholtz_inverse(derivative(f, 1));
        CHECK(max_abs(a - b) <= 1e-12 * std::max(1.0, max_abs(a)));
    }
}

TEST_CASE("norms: closed-form references") {
    Grid g1(2.0 * M_PI, 256);
    Field s = Field::sample(g1, [](double x) { return std::sin(x); });
    Norms ns = norms(s);
    CHECK(ns.l2 == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(ns.linf == doctest::Approx(1.0).epsilon(1e-10));
    // every derivative of sin has the same L2 norm
    CHECK(ns.h1 == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-12));
    CHECK(ns.h2 == doctest::Approx(std::sqrt(3.0 * M_PI)).epsilon(1e-12));

    Norms z = norms(Field::zeros(g1));
    CHECK(z.l2 == 0.0);
    CHECK(z.h2 == 0.0);

    Grid g2(60.0, 1024);
    Field sech = Field::sample(g2, [](double x) { return 1.0 / std::cosh(x); });
    CHECK(norms(sech).l2 * norms(sech).l2 == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("norms: h1/h2 agree with the derivative operators") {
    Grid g(30.0, 512);
    Field f = random_smooth(g, 77, 30);
    Norms nm = norms(f);
    Field d1 = derivative(f, 1), d2 = derivative(f, 2);
    CHECK(nm.l2 == doctest::Approx(std::sqrt(inner(f, f))).epsilon(1e-12));
    CHECK(nm.h1 == doctest::Approx(std::sqrt(inner(f, f) + inner(d1, d1))).epsilon(1e-12));
    CHECK(nm.h2 ==
          doctest::Approx(std::sqrt(inner(f, f) + inner(d1, d1) + inner(d2, d2))).epsilon(1e-12));
}

TEST_CASE("dealias_23: projection onto the lower third of mode indices") {
    Grid g(2.0 * M_PI, 128);  // bins 0..64, cutoff index 42
    Field keep = Field::sample(g, [](double x) { return std::cos(20.0 * x); });
    Field drop = Field::sample(g, [](double x) { return std::cos(50.0 * x); });
    Field t = dealias_23(keep + drop);
    CHECK(max_abs(t - keep) <= 1e-12);
    CHECK(max_abs(dealias_23(t) - t) <= 1e-13);  // idempotent
}

TEST_CASE("translate: exact phase shift") {
    Grid g(20.0, 256);
    const double xi = 2.0 * M_PI * 4 / g.length;
    Field f = Field::sample(g, [&](double x) { return std::sin(xi * x); });
    const double s = 1.2345;
    CHECK(max_error_vs(translate(f, s),
                       [&](double x) { return std::sin(xi * (x - s)); }) <= 1e-12);
}

TEST_CASE("weight family: pointwise bounds at several scales") {
    Grid g(400.0, 2048);
    for (double A : {10.0, 25.0, 50.0}) {
        WeightFamily w(A, 0.0);
        CHECK(w.eval(0.0, 0) == 0.0);
        CHECK(w.eval(0.0, 1) == doctest::Approx(1.0));
        Field w0 = w.eval_on(g, 0);
        Field w1 = w.eval_on(g, 1);
        Field w2 = w.eval_on(g, 2);
        Field w3 = w.eval_on(g, 3);
        bool ok = true;
        for (int j = 0; j < g.points; ++j) {
            ok = ok && std::abs(w0[j]) <= A;
            ok = ok && w1[j] > 0.0 && w1[j] <= 1.0 + 1e-15;
            ok = ok && std::abs(w2[j]) <= 2.0 / A * w1[j] + 1e-300;
            ok = ok && std::abs(w3[j]) <= 4.0 / (A * A) * w1[j] + 1e-300;
        }
        CHECK(ok);
    }
    CHECK_THROWS_AS(WeightFamily(5.0, 0.0), std::invalid_argument);
}

TEST_CASE("weight family: closed-form derivatives match spectral differentiation") {
    // The weight itself is odd and jumps by ~2A at the torus seam, so it must
    // never be differentiated spectrally; its derivative family sech^2, ... is
    // seam-continuous (both sides saturate to ~exp(-length/A)) and smooth, so
    // there the closed forms and spectral differentiation must agree.
    Grid g(640.0, 4096);
    WeightFamily w(20.0, 3.0);
    CHECK(max_abs(derivative(w.eval_on(g, 1), 1) - w.eval_on(g, 2)) <= 1e-9);
    CHECK(max_abs(derivative(w.eval_on(g, 1), 2) - w.eval_on(g, 3)) <= 1e-9);
}
