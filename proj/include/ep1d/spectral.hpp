#pragma once

#include "ep1d/field.hpp"

namespace ep1d {

// Fourier pseudospectral primitives on a periodic Grid.
//
// All operators act through the real-to-complex FFT of the node values, so
// they are exact on trigonometric polynomials below the Nyquist mode and
// spectrally accurate on smooth fields. Derivatives of odd order zero the
// Nyquist bin (the standard choice that keeps real output consistent with
// the interpolating trigonometric polynomial).
//
// Transform plans and workspaces are cached per thread and per size;
// concurrent callers never share scratch buffers.

struct Norms {
    double l2 = 0.0;
    double linf = 0.0;
    double h1 = 0.0;  // sqrt(l2^2 + |f'|^2)
    double h2 = 0.0;  // sqrt(l2^2 + |f'|^2 + |f''|^2)
};

// d^order/dx^order, order in {1, 2, 3}.
Field derivative(const Field& f, int order);

// (-d^2/dx^2 + 1)^{-1} f, diagonal in Fourier space.
Field helmholtz_inverse(const Field& f);

// Solves (-d^2/dx^2 + 1 + V(x)) g = f for g by preconditioned fixed-point
// iteration g <- (-d^2+1)^{-1}(f - V g), the Neumann series of the constant
// coefficient inverse. Requires ||V||_inf <= 1/2 (contraction); stops when
// the L2 residual of the full equation drops below tol * ||f||_L2.
// Throws std::invalid_argument if V is too large, SolveError on
// non-convergence after max_iter sweeps.
Field helmholtz_inverse_v(const Field& f, const Field& V, double tol = 1e-10,
                          int max_iter = 200, int* iterations_out = nullptr);

Norms norms(const Field& f);

// 2/3-rule low-pass: zeroes every mode with index above points/3. Applied by
// the dynamics layer to nonlinear products; spectral operators above never
// truncate on their own.
Field dealias_23(const Field& f);

// f(x - s) by phase shift; utility for traveling-frame comparisons.
Field translate(const Field& f, double s);

struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ep1d
