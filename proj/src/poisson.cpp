#include "ep1d/poisson.hpp"

#include <cmath>

#include "ep1d/constitutive.hpp"

namespace ep1d {

namespace {

double equation_residual(const Field& phi, const Field& n) {
    Field r = -1.0 * derivative(phi, 2) - n;
    for (int j = 0; j < r.size(); ++j) r[j] += q_of(phi[j]);
    return std::sqrt(inner(r, r));
}

void finish(PotentialSolve& out, const Field& n) {
    out.residual = equation_residual(out.phi, n);
    const double nn = norms(n).l2;
    out.ratio = nn > 0.0 ? norms(out.phi).h2 / nn : std::nan("");
}

}  // namespace

PotentialSolve solve_phi_fixedpoint(const Field& n, double tol, int max_iter,
                                    const Field* initial) {
    if (initial) require_same_grid(n, *initial, "solve_phi_fixedpoint");
    PotentialSolve out;
    out.phi = initial ? *initial : Field::zeros(n.grid);
    Field rhs(n.grid);
    for (int it = 1; it <= max_iter; ++it) {
        for (int j = 0; j < n.size(); ++j)
            rhs[j] = n[j] + out.phi[j] - q_of(out.phi[j]);
        Field next = helmholtz_inverse(rhs);
        if (!all_finite(next))
            throw SolveError("solve_phi_fixedpoint: iteration produced non-finite values");
        const double inc = norms(next - out.phi).h2;
        out.increments.push_back(inc);
        out.phi = std::move(next);
        out.iterations = it;
        if (inc <= tol) {
            finish(out, n);
            return out;
        }
    }
    throw SolveError("solve_phi_fixedpoint: H2 increment above " + std::to_string(tol) +
                     " after " + std::to_string(max_iter) + " sweeps (density too large?)");
}

PotentialSolve solve_phi_newton(const Field& n, double tol, int max_iter) {
    PotentialSolve out;
    out.phi = helmholtz_inverse(n);
    Field F(n.grid), V(n.grid);
    for (int it = 1; it <= max_iter; ++it) {
        out.iterations = it;
        Field phixx = derivative(out.phi, 2);
        double fsq = 0.0;
        for (int j = 0; j < n.size(); ++j) {
            F[j] = -phixx[j] + q_of(out.phi[j]) - n[j];
            fsq += F[j] * F[j];
        }
        const double resid = std::sqrt(fsq * n.grid.dx());
        if (!std::isfinite(resid))
            throw SolveError("solve_phi_newton: iteration produced non-finite values");
        out.increments.push_back(resid);
        if (resid <= tol) {
            finish(out, n);
            return out;
        }
        for (int j = 0; j < n.size(); ++j) V[j] = dq_of(out.phi[j]) - 1.0;
        if (max_abs(V) > 0.5)
            throw SolveError(
                "solve_phi_newton: ||e^phi - 1||_inf exceeds 1/2; linearization rejected");
        Field delta = helmholtz_inverse_v(F, V, 1e-12, 200);
        out.phi -= delta;
    }
    throw SolveError("solve_phi_newton: residual above tolerance after " +
                     std::to_string(max_iter) + " steps");
}

Field dphi_dt(const Field& n, const Field& u, const Field& phi, double tol) {
    require_same_grid(n, u, "dphi_dt");
    require_same_grid(n, phi, "dphi_dt");
    Field flux(n.grid);
    for (int j = 0; j < n.size(); ++j) flux[j] = (1.0 + n[j]) * u[j];
    Field dflux = derivative(flux, 1);
    Field V(n.grid);
    for (int j = 0; j < n.size(); ++j) V[j] = dq_of(phi[j]) - 1.0;
    return -1.0 * helmholtz_inverse_v(dflux, V, tol, 200);
}

}  // namespace ep1d
