#pragma once

#include "ep1d/constitutive.hpp"
#include "ep1d/field.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ep1d {

// Minimum admissible total density 1 + n. Below this the hyperbolic part of
// the system degenerates and the run is aborted rather than continued.
inline constexpr double kDensityFloor = 1e-3;

struct State {
    Field n;
    Field u;
    double t = 0.0;

    State(Field n_, Field u_, double t_ = 0.0);
    const Grid& grid() const { return n.grid; }
};

// Throws std::domain_error if the density floor is violated or any value is
// non-finite.
void require_valid_state(const State& s);

struct StepperConfig {
    double t_end = 0.0;
    // dt > 0 selects a fixed step (clipped on the final step to land exactly
    // on t_end); dt == 0 recomputes the step each time from the CFL bound.
    double dt = 0.0;
    double cfl = 0.4;
    bool dealias = true;
    // Probes fire at the initial state, then after every probe_stride steps,
    // and always at the final state.
    std::size_t probe_stride = 1;
};

struct RhsResult {
    Field dn;
    Field du;
    Field phi;  // potential slaved to n; reuse as warm start downstream
};

// Right-hand side of the method-of-lines system
//   dn/dt = -((1+n) u)'
//   du/dt = -(u^2/2 + w(n) + phi)'
// with phi obtained from the elliptic solve at tolerance 1e-12. When dealias
// is set, the quadratic products are truncated by the 2/3 rule before
// differentiation.
RhsResult rhs(const PressureLaw& law, const State& s, bool dealias = true,
              const Field* phi_warm = nullptr);

// Largest stable step for explicit stepping: cfl * dx / (max|u| + sonic).
double cfl_dt(const PressureLaw& law, const State& s, double cfl = 0.4);

// Classical four-stage Runge-Kutta step. Each stage performs one elliptic
// solve, warm-started from the previous stage. If phi_warm is non-null it is
// used to seed the first stage and receives the last stage's potential.
State step_rk4(const PressureLaw& law, const State& s, double dt,
               bool dealias = true, std::optional<Field>* phi_warm = nullptr);

// Called at each sample with the current state and its slaved potential.
using Probe = std::function<void(const State&, const Field& phi)>;

struct IntegrateResult {
    State final_state;
    std::size_t steps = 0;
    std::size_t samples = 0;  // number of probe firings
    bool aborted = false;
    std::string abort_reason;
};

// Advances s0 to cfg.t_end, firing probes per cfg.probe_stride. Any step
// failure (elliptic divergence, density floor, non-finite values) aborts the
// run cleanly: the partial result is returned with aborted set and the last
// completed state preserved.
IntegrateResult integrate(const PressureLaw& law, State s0,
                          const StepperConfig& cfg,
                          const std::vector<Probe>& probes);

}  // namespace ep1d
