#include "ep1d/dynamics.hpp"

#include "ep1d/poisson.hpp"
#include "ep1d/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ep1d {

namespace {

constexpr double kPhiTol = 1e-12;
constexpr int kPhiMaxIter = 200;

}  // namespace

State::State(Field n_, Field u_, double t_)
    : n(std::move(n_)), u(std::move(u_)), t(t_) {
    require_same_grid(n, u, "State");
}

void require_valid_state(const State& s) {
    if (!all_finite(s.n) || !all_finite(s.u) || !std::isfinite(s.t)) {
        throw std::domain_error("state contains non-finite values");
    }
    for (int j = 0; j < s.n.size(); ++j) {
        if (1.0 + s.n[j] < kDensityFloor) {
            throw std::domain_error("density floor violated: 1+n < 1e-3");
        }
    }
}

RhsResult rhs(const PressureLaw& law, const State& s, bool dealias,
              const Field* phi_warm) {
    require_valid_state(s);

    PotentialSolve solve = solve_phi_fixedpoint(s.n, kPhiTol, kPhiMaxIter, phi_warm);

    const Grid& g = s.grid();
    Field mass_flux(g);
    Field bernoulli(g);
    for (int j = 0; j < g.points; ++j) {
        mass_flux[j] = (1.0 + s.n[j]) * s.u[j];
        bernoulli[j] = 0.5 * s.u[j] * s.u[j];
    }
    if (dealias) {
        mass_flux = dealias_23(mass_flux);
        bernoulli = dealias_23(bernoulli);
    }
    for (int j = 0; j < g.points; ++j) {
        bernoulli[j] += law.w(s.n[j]) + solve.phi[j];
    }

    RhsResult out{derivative(mass_flux, 1), derivative(bernoulli, 1),
                  std::move(solve.phi)};
    out.dn *= -1.0;
    out.du *= -1.0;
    return out;
}

double cfl_dt(const PressureLaw& law, const State& s, double cfl) {
    if (!(cfl > 0.0) || !std::isfinite(cfl)) {
        throw std::invalid_argument("cfl must be positive and finite");
    }
    return cfl * s.grid().dx() / (max_abs(s.u) + law.sonic());
}

State step_rk4(const PressureLaw& law, const State& s, double dt, bool dealias,
               std::optional<Field>* phi_warm) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("dt must be positive and finite");
    }
    const Field* warm =
        (phi_warm && phi_warm->has_value()) ? &phi_warm->value() : nullptr;

    RhsResult k1 = rhs(law, s, dealias, warm);
    State s2(s.n + (0.5 * dt) * k1.dn, s.u + (0.5 * dt) * k1.du, s.t + 0.5 * dt);
    RhsResult k2 = rhs(law, s2, dealias, &k1.phi);
    State s3(s.n + (0.5 * dt) * k2.dn, s.u + (0.5 * dt) * k2.du, s.t + 0.5 * dt);
    RhsResult k3 = rhs(law, s3, dealias, &k2.phi);
    State s4(s.n + dt * k3.dn, s.u + dt * k3.du, s.t + dt);
    RhsResult k4 = rhs(law, s4, dealias, &k3.phi);

    const double c = dt / 6.0;
    Field n_new = s.n;
    Field u_new = s.u;
    for (int j = 0; j < s.n.size(); ++j) {
        n_new[j] += c * (k1.dn[j] + 2.0 * k2.dn[j] + 2.0 * k3.dn[j] + k4.dn[j]);
        u_new[j] += c * (k1.du[j] + 2.0 * k2.du[j] + 2.0 * k3.du[j] + k4.du[j]);
    }
    State out(std::move(n_new), std::move(u_new), s.t + dt);
    require_valid_state(out);
    if (phi_warm) {
        *phi_warm = std::move(k4.phi);
    }
    return out;
}

IntegrateResult integrate(const PressureLaw& law, State s0,
                          const StepperConfig& cfg,
                          const std::vector<Probe>& probes) {
    if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) {
        throw std::invalid_argument("t_end must be nonnegative and finite");
    }
    if (cfg.dt < 0.0 || !std::isfinite(cfg.dt)) {
        throw std::invalid_argument("dt must be nonnegative and finite");
    }
    if (cfg.probe_stride == 0) {
        throw std::invalid_argument("probe_stride must be positive");
    }
    require_valid_state(s0);

    IntegrateResult out{std::move(s0), 0, 0, false, {}};
    std::optional<Field> warm;

    auto fire = [&](const State& s) {
        PotentialSolve solve =
            solve_phi_fixedpoint(s.n, kPhiTol, kPhiMaxIter,
                                 warm.has_value() ? &warm.value() : nullptr);
        warm = solve.phi;
        for (const Probe& p : probes) {
            p(s, solve.phi);
        }
        ++out.samples;
    };

    try {
        fire(out.final_state);
        // Tolerance so a final step of size t_end - t does not leave an extra
        // microscopic step behind.
        const double t_eps = 1e-12 * std::max(1.0, cfg.t_end);
        std::size_t since_probe = 0;
        while (out.final_state.t < cfg.t_end - t_eps) {
            double dt = cfg.dt > 0.0 ? cfg.dt : cfl_dt(law, out.final_state, cfg.cfl);
            dt = std::min(dt, cfg.t_end - out.final_state.t);
            out.final_state =
                step_rk4(law, out.final_state, dt, cfg.dealias, &warm);
            ++out.steps;
            ++since_probe;
            const bool last = out.final_state.t >= cfg.t_end - t_eps;
            if (since_probe >= cfg.probe_stride || last) {
                fire(out.final_state);
                since_probe = 0;
            }
        }
    } catch (const std::exception& e) {
        out.aborted = true;
        out.abort_reason = e.what();
    }
    return out;
}

}  // namespace ep1d
