#include <doctest.h>

#include "ep1d/constitutive.hpp"
#include "ep1d/dynamics.hpp"
#include "ep1d/poisson.hpp"
#include "ep1d/spectral.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

using namespace ep1d;

namespace {

State gaussian_state(const Grid& g, double amp_n, double width, double center,
                     double u_over_n) {
    Field n = Field::sample(g, [&](double x) {
        double z = (x - center) / width;
        return amp_n * std::exp(-z * z);
    });
    Field u = n;
    u *= u_over_n;
    return State(std::move(n), std::move(u), 0.0);
}

double l2_diff(const Field& a, const Field& b) {
    Field d = a - b;
    return norms(d).l2;
}

double total_energy(const PressureLaw& law, const State& s, const Field& phi) {
    Field dphi = derivative(phi, 1);
    double acc = 0.0;
    for (int j = 0; j < s.n.size(); ++j) {
        acc += 0.5 * (1.0 + s.n[j]) * s.u[j] * s.u[j] + law.W(s.n[j]) +
               0.5 * dphi[j] * dphi[j] + R_of(phi[j]);
    }
    return acc * s.grid().dx();
}

}  // namespace

TEST_CASE("dynamics: rest state is an exact fixed point") {
    Grid g(40.0, 128);
    auto law = PressureLaw::isothermal(1.0);
    State rest(Field::zeros(g), Field::zeros(g), 0.0);

    RhsResult r = rhs(law, rest);
    CHECK(max_abs(r.dn) == 0.0);
    CHECK(max_abs(r.du) == 0.0);
    CHECK(max_abs(r.phi) == 0.0);

    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 10.0;  // 1000 steps
    cfg.probe_stride = 1000;
    IntegrateResult out = integrate(law, rest, cfg, {});
    CHECK(!out.aborted);
    CHECK(out.steps == 1000);
    CHECK(max_abs(out.final_state.n) == 0.0);
    CHECK(max_abs(out.final_state.u) == 0.0);
}

TEST_CASE("dynamics: rhs reproduces the linear dispersion relation mode by mode") {
    // About the rest state, a density cosine at wavenumber xi drives
    // du = a (k + 1/(1+xi^2)) xi sin(xi x) + O(a^2): the acoustic branch
    // c(xi)^2 = k + 1/(1+xi^2).
    Grid g(10.0 * M_PI, 256);
    auto law = PressureLaw::isothermal(1.0);
    const double a = 1e-6;

    double worst_du = 0.0;
    double worst_phi = 0.0;
    for (int m : {3, 7, 15}) {
        double xi = 2.0 * M_PI * m / g.length;
        Field n = Field::sample(g, [&](double x) { return a * std::cos(xi * x); });
        State s(n, Field::zeros(g), 0.0);
        RhsResult r = rhs(law, s);

        CHECK(max_abs(r.dn) == 0.0);  // (1+n)*0 vanishes identically
        double coef = a * (law.k() + 1.0 / (1.0 + xi * xi)) * xi;
        Field du_expect =
            Field::sample(g, [&](double x) { return coef * std::sin(xi * x); });
        Field phi_expect = Field::sample(
            g, [&](double x) { return a * std::cos(xi * x) / (1.0 + xi * xi); });
        worst_du = std::max(worst_du, max_abs(r.du - du_expect));
        worst_phi = std::max(worst_phi, max_abs(r.phi - phi_expect));
    }
    CHECK(worst_du <= 5e-11);   // quadratic remainder ~ a^2 xi
    CHECK(worst_phi <= 5e-12);
}

TEST_CASE("dynamics: standing wave returns after one linear period") {
    // n0 = a cos(xi x), u0 = 0 splits into two counter-propagating waves that
    // reunite at T = 2 pi / (xi c(xi)).
    Grid g(10.0 * M_PI, 256);
    auto law = PressureLaw::isothermal(1.0);
    const double a = 1e-6;
    const double xi = 1.0;  // mode 5
    Field n0 = Field::sample(g, [&](double x) { return a * std::cos(xi * x); });
    State s0(n0, Field::zeros(g), 0.0);

    double omega = xi * std::sqrt(law.k() + 1.0 / (1.0 + xi * xi));
    double period = 2.0 * M_PI / omega;
    StepperConfig cfg;
    cfg.t_end = period;
    cfg.dt = period / 150.0;
    cfg.probe_stride = 1000;
    IntegrateResult out = integrate(law, s0, cfg, {});
    REQUIRE(!out.aborted);
    CHECK(l2_diff(out.final_state.n, n0) <= 1e-5 * norms(n0).l2);
    CHECK(max_abs(out.final_state.u) <= 1e-5 * a);
}

TEST_CASE("dynamics: rk4 self-convergence order is four") {
    Grid g(40.0, 256);
    auto law = PressureLaw::isothermal(1.0);
    Field n0 = Field::sample(g, [](double x) { return 0.1 * std::exp(-x * x / 9.0); });
    Field u0 = Field::sample(
        g, [](double x) { return 0.05 * std::exp(-(x - 2.0) * (x - 2.0) / 9.0); });
    State s0(n0, u0, 0.0);

    auto run = [&](double dt) {
        StepperConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 2.0;
        cfg.probe_stride = 100000;
        IntegrateResult out = integrate(law, s0, cfg, {});
        REQUIRE(!out.aborted);
        return out.final_state;
    };
    State ref = run(0.005);
    State coarse = run(0.04);
    State fine = run(0.02);

    double err_coarse = l2_diff(coarse.n, ref.n) + l2_diff(coarse.u, ref.u);
    double err_fine = l2_diff(fine.n, ref.n) + l2_diff(fine.u, ref.u);
    CHECK(err_coarse > 1e-12);  // above round-off, so the ratio is meaningful
    double ratio = err_coarse / err_fine;
    // Fourth order against a dt/8 reference gives (1 - 8^-4)/(2^-4 - 8^-4) ~ 16.
    CHECK(ratio >= 14.0);
    CHECK(ratio <= 18.0);
}

TEST_CASE("dynamics: time-reversal symmetry defect shrinks at sixth order") {
    // The flow commutes with (t,u) -> (-t,-u). For step-flip-step-flip the
    // rk4 dt^5 error cancels (it is a phase-type error, odd under the
    // reversal) and the even dissipative dt^6 part is what survives, so the
    // defect contracts by 2^6 when dt halves.
    Grid g(40.0, 256);
    auto law = PressureLaw::isothermal(1.0);
    Field n0 = Field::sample(g, [](double x) { return 0.1 * std::exp(-x * x / 9.0); });
    Field u0 = Field::sample(
        g, [](double x) { return 0.05 * std::exp(-(x - 2.0) * (x - 2.0) / 9.0); });
    State s0(n0, u0, 0.0);

    auto defect = [&](double dt) {
        State fwd = step_rk4(law, s0, dt);
        State flipped(fwd.n, -1.0 * fwd.u, 0.0);
        State back = step_rk4(law, flipped, dt);
        return l2_diff(back.n, s0.n) + l2_diff(back.u, -1.0 * s0.u);
    };
    double d_coarse = defect(0.05);
    double d_fine = defect(0.025);
    CHECK(d_coarse <= 1e-6);
    CHECK(d_fine > 1e-13);
    double ratio = d_coarse / d_fine;
    CHECK(ratio >= 56.0);
    CHECK(ratio <= 72.0);
}

TEST_CASE("dynamics: mass, momentum, and energy are conserved for a small packet") {
    Grid g(100.0, 1024);
    auto law = PressureLaw::isothermal(1.0);
    State s0 = gaussian_state(g, 0.01, 2.0, 0.0, law.sonic());

    double mass0 = integral(s0.n);
    double mom0 = inner(s0.n, s0.u);
    Field phi0 = solve_phi_fixedpoint(s0.n).phi;
    double energy0 = total_energy(law, s0, phi0);
    REQUIRE(std::abs(mom0) > 1e-5);

    StepperConfig cfg;
    cfg.t_end = 10.0;  // adaptive step from the CFL bound
    cfg.probe_stride = 100000;
    IntegrateResult out = integrate(law, s0, cfg, {});
    REQUIRE(!out.aborted);
    CHECK(out.steps >= 300);
    CHECK(out.steps <= 500);

    const State& s1 = out.final_state;
    double mass1 = integral(s1.n);
    double mom1 = inner(s1.n, s1.u);
    Field phi1 = solve_phi_fixedpoint(s1.n).phi;
    double energy1 = total_energy(law, s1, phi1);

    CHECK(std::abs(mass1 - mass0) <= 1e-12);
    CHECK(std::abs(mom1 - mom0) <= 1e-8 * std::abs(mom0));
    CHECK(std::abs(energy1 - energy0) <= 1e-7 * energy0);
}

TEST_CASE("dynamics: probes sample at the stride and always at both ends") {
    Grid g(40.0, 128);
    auto law = PressureLaw::isothermal(1.0);
    State s0 = gaussian_state(g, 0.01, 3.0, 0.0, 0.0);

    std::vector<double> times;
    Probe record = [&](const State& s, const Field& phi) {
        (void)phi;
        times.push_back(s.t);
    };

    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.1;
    cfg.probe_stride = 4;
    IntegrateResult out = integrate(law, s0, cfg, {record});
    REQUIRE(!out.aborted);
    CHECK(out.steps == 10);
    REQUIRE(times.size() == 4);  // steps 0, 4, 8, 10
    CHECK(times[0] == 0.0);
    CHECK(times[1] == doctest::Approx(0.04));
    CHECK(times[2] == doctest::Approx(0.08));
    CHECK(times[3] == doctest::Approx(0.10));
    CHECK(out.samples == 4);

    times.clear();
    cfg.t_end = 0.0;
    IntegrateResult still = integrate(law, s0, cfg, {record});
    CHECK(!still.aborted);
    CHECK(still.steps == 0);
    CHECK(still.samples == 1);
    REQUIRE(times.size() == 1);
    CHECK(times[0] == 0.0);
}

TEST_CASE("dynamics: runs abort cleanly instead of producing garbage") {
    Grid g(40.0, 128);
    auto law = PressureLaw::isothermal(1.0);

    // Density far outside the elliptic solver's contraction ball: the very
    // first sample fails and the initial state is handed back untouched.
    State bad = gaussian_state(g, 5.0, 2.0, 0.0, 0.0);
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    IntegrateResult out = integrate(law, bad, cfg, {});
    CHECK(out.aborted);
    CHECK(!out.abort_reason.empty());
    CHECK(out.steps == 0);
    CHECK(out.final_state.t == 0.0);

    // Counter-streaming expansion: valid at t=0, but the gradient steepens
    // until the spectral representation breaks down (floor violation, solver
    // divergence, or non-finite values). The partially completed run must be
    // preserved.
    Grid g2(20.0, 256);
    Field u0 = Field::sample(g2, [&](double x) {
        return 2.0 * std::sin(2.0 * M_PI * x / g2.length);
    });
    State streams(Field::zeros(g2), u0, 0.0);
    StepperConfig cfg2;
    cfg2.dt = 0.008;
    cfg2.t_end = 30.0;
    cfg2.probe_stride = 50;
    std::size_t fired = 0;
    Probe count = [&](const State&, const Field&) { ++fired; };
    IntegrateResult crash = integrate(law, streams, cfg2, {count});
    CHECK(crash.aborted);
    CHECK(!crash.abort_reason.empty());
    CHECK(crash.steps > 0);
    CHECK(crash.final_state.t < 30.0);
    CHECK(all_finite(crash.final_state.n));  // last accepted state, not the blown one
    CHECK(fired >= 1);
}

TEST_CASE("dynamics: potential time derivative matches centered differences") {
    // Along a trajectory, dphi_dt from the linearized elliptic solve must
    // agree with (phi(t+h) - phi(t-h)) / 2h at second order in h.
    Grid g(60.0, 512);
    auto law = PressureLaw::isothermal(1.0);
    State s0 = gaussian_state(g, 0.01, 2.0, 0.0, law.sonic());

    std::vector<double> t_samples;
    std::vector<Field> phi_samples;
    std::vector<State> state_samples;
    Probe keep = [&](const State& s, const Field& phi) {
        t_samples.push_back(s.t);
        phi_samples.push_back(phi);
        state_samples.push_back(s);
    };
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 1.08;  // 108 steps, sampled each step
    cfg.probe_stride = 1;
    IntegrateResult out = integrate(law, s0, cfg, {keep});
    REQUIRE(!out.aborted);
    REQUIRE(t_samples.size() == 109);

    const State& mid = state_samples[100];
    Field analytic = dphi_dt(mid.n, mid.u, phi_samples[100], 1e-12);

    auto centered_err = [&](std::size_t span) {
        double h2 = t_samples[100 + span] - t_samples[100 - span];
        Field diff = phi_samples[100 + span] - phi_samples[100 - span];
        diff *= 1.0 / h2;
        return max_abs(diff - analytic);
    };
    double err_h = centered_err(8);   // h = 0.08
    double err_h2 = centered_err(4);  // h = 0.04
    CHECK(err_h2 <= 1e-6);
    double ratio = err_h / err_h2;
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("dynamics: invalid configurations and states are rejected") {
    Grid g(40.0, 128);
    auto law = PressureLaw::isothermal(1.0);
    State ok = gaussian_state(g, 0.01, 3.0, 0.0, 0.0);

    StepperConfig cfg;
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(integrate(law, ok, cfg, {}), std::invalid_argument);
    cfg.t_end = 1.0;
    cfg.dt = -0.1;
    CHECK_THROWS_AS(integrate(law, ok, cfg, {}), std::invalid_argument);
    cfg.dt = 0.01;
    cfg.probe_stride = 0;
    CHECK_THROWS_AS(integrate(law, ok, cfg, {}), std::invalid_argument);

    CHECK_THROWS_AS(step_rk4(law, ok, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(cfl_dt(law, ok, 0.0), std::invalid_argument);

    Field deep = Field::sample(g, [](double x) {
        return -0.9995 * std::exp(-x * x);  // 1+n below the 1e-3 floor at x=0
    });
    State vacuum(deep, Field::zeros(g), 0.0);
    CHECK_THROWS_AS(require_valid_state(vacuum), std::domain_error);
    CHECK_THROWS_AS(rhs(law, vacuum), std::domain_error);

    Field nan_field = Field::zeros(g);
    nan_field[5] = std::nan("");
    State broken(nan_field, Field::zeros(g), 0.0);
    CHECK_THROWS_AS(require_valid_state(broken), std::domain_error);

    // CFL formula: cfl * dx / (max|u| + sonic).
    double dt = cfl_dt(law, ok, 0.4);
    double expect = 0.4 * g.dx() / (max_abs(ok.u) + law.sonic());
    CHECK(dt == doctest::Approx(expect).epsilon(1e-14));
}
