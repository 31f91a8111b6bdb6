#pragma once

#include "ep1d/constitutive.hpp"
#include "ep1d/dynamics.hpp"
#include "ep1d/field.hpp"
#include "ep1d/weights.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ep1d {

// Localized virial diagnostics: the energy/momentum densities and fluxes of
// the ion system, the weighted functionals J, K, I, L built on the moving
// weight A*tanh((x - y(t))/A), their exact analytic time derivatives, and the
// coercivity (slow observer) / decay (fast observer) margins those derivatives
// are supposed to exhibit on small data.
//
// All weight factors use the closed-form derivatives of WeightFamily; the
// weight is never differentiated spectrally (it is not periodic). Quadrature
// is the rectangle rule, spectrally accurate as long as the fields are
// negligible near the torus seam, which every supported configuration keeps
// several decades below the tolerances.

// ---------------------------------------------------------------------------
// Moving observer y(t).
// ---------------------------------------------------------------------------
class ObserverPath {
public:
    // y(t) = y0.
    static ObserverPath at_rest(double y0 = 0.0);
    // y(t) = y0 + speed * t.
    static ObserverPath constant_speed(double y0, double speed);
    // C^1 path through (t_i, y_i) by monotone (PCHIP) cubic interpolation;
    // the slope table is derived from the samples. Outside the sample range
    // the path continues linearly with the boundary slope.
    static ObserverPath sampled(std::vector<double> t, std::vector<double> y);
    // Same, but with the C^1 slopes prescribed by the caller.
    static ObserverPath sampled(std::vector<double> t, std::vector<double> y,
                                std::vector<double> ydot);

    double y(double t) const;
    double ydot(double t) const;
    // sup_t |ydot(t)| over the whole representation (exact per cubic piece).
    double max_speed() const;

    const std::string& kind() const { return kind_; }  // static | constant-speed | sampled
    double speed() const { return c_; }                // constant-speed parameter

private:
    ObserverPath() = default;

    std::string kind_ = "static";
    double y0_ = 0.0;
    double c_ = 0.0;
    std::vector<double> ts_, ys_, ms_;  // sampled nodes and Hermite slopes

    std::size_t interval(double t) const;
};

// ---------------------------------------------------------------------------
// Configuration of the weighted functionals.
// ---------------------------------------------------------------------------
struct VirialConfig {
    // Weight scale; the localization estimates need it large (>= 10) so the
    // commutator terms, all of size O(1/A), stay inside the fitted margins.
    double A = 50.0;
    // Mixing weight for I = J + (1 - epsilon) K. Unset means "resolve
    // automatically": the midpoint of the admissible interval
    // (c^2/k, k/(1+k)) with c the path's top speed, or k/(2(1+k)) when that
    // interval is empty (observer outside the slow regime).
    std::optional<double> epsilon{};
    ObserverPath path = ObserverPath::at_rest();
};

// Throws std::invalid_argument unless A >= 10 and epsilon, when given, lies
// in (0,1).
void require_valid(const VirialConfig& cfg);

// The epsilon actually used for I (see VirialConfig::epsilon).
double resolve_epsilon(const PressureLaw& law, const VirialConfig& cfg);

// ---------------------------------------------------------------------------
// Densities and fluxes (nodewise fields).
// ---------------------------------------------------------------------------

// e = 1/2 (1+n) u^2 + W(n) + 1/2 phi'^2 + R(phi), nonnegative nodewise.
Field energy_density(const PressureLaw& law, const State& s, const Field& phi);

// m = n u.
Field momentum_density(const State& s);

// Momentum flux F_m = (1/2 + n) u^2 + S(n) - 1/2 phi'^2 + Q(phi);
// d/dt m + d/dx F_m = 0 along solutions.
Field momentum_flux(const PressureLaw& law, const State& s, const Field& phi);

// Energy flux F_e = 1/2 (1+n) u^3 + (1+n) w(n) u + (1+n) u phi - phi d/dx(dphi/dt);
// d/dt e + d/dx F_e = 0 along solutions. The potential's time derivative is
// slaved to the mass flux; pass it when already computed, otherwise it is
// derived here (from the dealiased mass flux iff dealias is set, matching the
// stepper's discretization).
Field energy_flux(const PressureLaw& law, const State& s, const Field& phi,
                  const Field* phi_dot = nullptr, bool dealias = true);

double total_energy(const PressureLaw& law, const State& s, const Field& phi);

// ---------------------------------------------------------------------------
// Weighted functionals and their exact analytic derivatives.
// ---------------------------------------------------------------------------

struct VirialValues {
    double J = 0.0;  // integral phi_A(x - y) n u
    double K = 0.0;  // -1/2 integral phi_A'(x - y) u phi'
    double I = 0.0;  // J + (1 - epsilon) K
    double L = 0.0;  // integral phi_A(x - y) e
    double epsilon = 0.0;
};
VirialValues functionals(const PressureLaw& law, const State& s, const Field& phi,
                         const VirialConfig& cfg);

// integral phi_A'(x - y) (u^2 + n^2): the localized mass both margins are
// measured against.
double localized_mass(const State& s, const VirialConfig& cfg);

// dJ/dt = integral phi_A' F_m - ydot integral phi_A' n u (exact identity).
double dJdt_analytic(const PressureLaw& law, const State& s, const Field& phi,
                     const VirialConfig& cfg);

// dK/dt = 1/2 (-integral phi_A' du/dt phi' - integral phi_A' u (dphi/dt)'
//         + ydot integral phi_A'' u phi') (exact chain rule; du/dt and dn/dt
// from the method-of-lines right-hand side, dphi/dt from the constraint).
double dKdt_analytic(const PressureLaw& law, const State& s, const Field& phi,
                     const VirialConfig& cfg, bool dealias = true);

// dI/dt = dJ/dt + (1 - epsilon) dK/dt.
double dIdt_analytic(const PressureLaw& law, const State& s, const Field& phi,
                     const VirialConfig& cfg, bool dealias = true);

// dL/dt = integral phi_A' F_e - ydot integral phi_A' e (exact identity).
double dLdt_analytic(const PressureLaw& law, const State& s, const Field& phi,
                     const VirialConfig& cfg, bool dealias = true);

// ---------------------------------------------------------------------------
// Margin reports.
// ---------------------------------------------------------------------------

// Slow-observer coercivity: on small data with |ydot| below k/sqrt(1+k) the
// exact dI/dt regroups into nonnegative quadratic groups plus remainders, so
// margin = dIdt / localized_mass should stay bounded away from zero. The raw
// groups are reported so the remainder budget can be audited.
struct CoercivityReport {
    double dIdt = 0.0;
    double localized_mass = 0.0;
    double margin = 0.0;      // dIdt / localized_mass; NaN when degenerate
    bool degenerate = false;  // localized mass vanished (zero state)
    double epsilon = 0.0;
    bool slow_regime_ok = true;      // |ydot(t)| < k/sqrt(1+k) at this sample
    bool epsilon_in_interval = true; // epsilon in (c^2/k, k/(1+k)), c = top speed

    // integral phi_A'(x-y) {u^2, n^2, phi''^2, phi'^2, phi^2}.
    double group_u2 = 0.0, group_n2 = 0.0, group_phixx2 = 0.0,
           group_phix2 = 0.0, group_phi2 = 0.0;
    // integral phi_A' u (-d2+1)^{-1} u  (provably >= 0 up to round-off).
    double positivity = 0.0;
    // integral phi_A' n u  (enters dI/dt with factor -ydot).
    double cross = 0.0;
    // Remainder-free part of dI/dt assembled from the groups above:
    //   eps/2 u^2-group + (1-eps)/2 positivity - ydot cross
    //   + 1/2 (k n^2 + (1-eps) k phi''^2 + (k - eps(1+k)) phi'^2 + phi^2).
    double principal = 0.0;
};
CoercivityReport dIdt_coercivity(const PressureLaw& law, const State& s, const Field& phi,
                                 const VirialConfig& cfg, bool dealias = true);

// Fast-observer decay: with |ydot| above sqrt(1+k) the exact dL/dt is
// dominated by -ydot/2 times the quadratic bundle, so margin =
// -dLdt / localized_mass should stay positive on small data.
struct DecayReport {
    double dLdt = 0.0;
    double localized_mass = 0.0;
    double margin = 0.0;  // -dLdt / localized_mass; NaN when degenerate
    bool degenerate = false;
    bool fast_regime_ok = true;  // |ydot(t)| > sqrt(1+k) at this sample
    // integral phi_A'(x-y) (u^2 + k n^2 + phi'^2 + phi^2).
    double group_quad = 0.0;
    double principal = 0.0;  // -ydot/2 * group_quad
};
DecayReport dLdt_decay(const PressureLaw& law, const State& s, const Field& phi,
                       const VirialConfig& cfg, bool dealias = true);

// Mass and potential content outside the window |x - y| <= R:
//   nu_tail = integral_{|x-y|>R} (n^2 + u^2),
//   phi_tail = integral_{|x-y|>R} (phi''^2 + phi^2).
// Requires R < length/2 (the window must fit on the torus).
struct TailMass {
    double nu_tail = 0.0;
    double phi_tail = 0.0;
};
TailMass tail_mass(const State& s, const Field& phi, double y, double R);

// ---------------------------------------------------------------------------
// Recorded runs: time series of everything above along a simulation.
// ---------------------------------------------------------------------------

struct RunRecord {
    double A = 0.0;
    double epsilon = 0.0;
    std::vector<double> t, E, mass, J, K, I, L;
    std::vector<double> dJdt_a, dKdt_a, dIdt_a, dLdt_a;  // analytic
    std::vector<double> dJdt_n, dKdt_n, dIdt_n, dLdt_n;  // centered differences
    std::vector<double> loc_mass;
    std::vector<double> tail_radii;               // configured R values
    std::vector<std::vector<double>> tail_nu;     // [radius][sample]
    std::vector<std::vector<double>> tail_phi;    // [radius][sample]

    std::size_t size() const { return t.size(); }

    // Fills dXdt_n with (X[i+s] - X[i-s]) / (t[i+s] - t[i-s]); samples within
    // s of either end stay NaN.
    void finalize_numeric_derivatives(std::size_t stride);
};

struct RecordOptions {
    StepperConfig stepper;
    VirialConfig virial;
    std::vector<double> tail_radii{};
    // Centered-difference stride in samples; with probe_stride 1 this makes
    // the numeric-derivative spacing h = stride * dt.
    std::size_t derivative_stride = 4;
};

struct RecordedRun {
    RunRecord record;
    IntegrateResult outcome;
};

// Integrates s0 per opt.stepper, sampling every probe firing into a RunRecord
// (numeric derivatives already finalized). Aborted runs return the partial
// series together with the abort report.
RecordedRun record_run(const PressureLaw& law, State s0, const RecordOptions& opt);

}  // namespace ep1d
