#pragma once

#include "ep1d/field.hpp"
#include "ep1d/spectral.hpp"

namespace ep1d {

// Elliptic constraint -phi'' + q(phi) = n with Boltzmann response
// q(phi) = e^phi - 1 and decaying (here: periodic) boundary behavior.
//
// Two independent routes are kept on purpose: the fixed-point map
//   phi <- (-d2+1)^{-1}(n + phi - q(phi))
// is the contraction the small-data theory runs on, and Newton with the
// variable-coefficient linearization (-d2 + e^phi) is the plumbing oracle.
// They must agree to 1e-10 in H2 whenever both converge; tests and the
// poisson-test CLI subcommand enforce that.

struct PotentialSolve {
    Field phi;
    int iterations = 0;
    double residual = 0.0;  // L2 norm of -phi'' + q(phi) - n at the returned phi
    double ratio = 0.0;     // ||phi||_H2 / ||n||_L2, NaN for n = 0
    std::vector<double> increments;  // per-sweep H2 increments (contraction diagnostics)
};

// Fixed-point solve from phi = 0 (or *initial when given, e.g. the previous
// time level). Stops when the H2 increment drops below tol. Throws SolveError
// on NaN or when max_iter sweeps do not reach tol.
PotentialSolve solve_phi_fixedpoint(const Field& n, double tol = 1e-12, int max_iter = 200,
                                    const Field* initial = nullptr);

// Newton iteration started from (-d2+1)^{-1} n. Stops when the equation
// residual drops below tol in L2. Rejects states with ||e^phi - 1||_inf > 1/2
// (outside the preconditioned linearization's contract).
PotentialSolve solve_phi_newton(const Field& n, double tol = 1e-12, int max_iter = 50);

// Time derivative of the potential induced by the mass flux:
//   dphi/dt = -(-d2 + q'(phi))^{-1} d/dx((1+n) u),
// evaluated as helmholtz_inverse_v with V = q'(phi) - 1. phi must solve the
// constraint for n (the caller owns that invariant).
Field dphi_dt(const Field& n, const Field& u, const Field& phi, double tol = 1e-10);

}  // namespace ep1d
