#pragma once

#include "ep1d/constitutive.hpp"
#include "ep1d/dynamics.hpp"
#include "ep1d/field.hpp"

namespace ep1d {

// --- Initial-data packets ----------------------------------------------

enum class PacketShape { gaussian, sech2 };
enum class VelocityMode { still, right_moving };

// n = amplitude * profile((x-center)/width); u = 0 (still) or sonic * n
// (right_moving, the long-wave unidirectional relation). Guards: amplitude
// in [0, 0.5], width at least 4 dx.
State packet(const Grid& g, const PressureLaw& law, PacketShape shape,
             double amplitude, double width, double center, VelocityMode mode);

// --- Traveling-wave reduction -------------------------------------------
//
// In the frame moving at speed c the mass and momentum integrals reduce to
//   u = c n / (1+n),    phi = c^2/2 (1 - (1+n)^-2) - w(n),
// valid on the compressive branch n >= 0 up to the sonic fold where
// d phi / d n = c^2 (1+n)^-3 - w'(n) first vanishes.

struct BernoulliFold {
    double n;    // density at the fold
    double phi;  // largest potential reachable on the branch
};
BernoulliFold bernoulli_fold(double c, const PressureLaw& law);

// Inverts the branch map: the unique n >= 0 with
// phi = c^2/2 (1-(1+n)^-2) - w(n). Throws std::domain_error ("fold
// exceeded") for phi beyond the fold, std::invalid_argument for phi < 0.
double bernoulli_density(double phi, double c, const PressureLaw& law);

// First integral of the potential equation: V(phi; c) with
//   (phi')^2 / 2 = V(phi),   V(phi) = int_0^phi (q(s) - n(s; c)) ds.
// A solitary wave exists exactly when V > 0 on (0, phi_max) with a zero
// return V(phi_max) = 0 before the fold.
double sagdeev_potential(double phi, double c, const PressureLaw& law);

struct SagdeevScan {
    bool exists = false;
    double phi_max = 0.0;  // first positive zero of V when exists
    double phi_fold = 0.0;
    // Set when the branch hits the sonic fold while V is still positive
    // (speed at or above the upper existence limit).
    bool fold_before_return = false;
};
SagdeevScan sagdeev_scan(double c, const PressureLaw& law);

// --- Solitary profiles ----------------------------------------------------

struct SolitaryProfile {
    double c = 0.0;
    double phi_max = 0.0;
    Field n;
    Field u;
    Field phi;
    double residual = 0.0;  // L2 norm of -phi'' + q(phi) - n on the grid
};

// Constructs the even solitary profile peaked at x = 0 for sonic < c below
// the upper existence limit. Throws std::domain_error when no wave exists at
// this speed or when the grid is too short for the tails to decay to 1e-10.
SolitaryProfile solitary_profile(double c, const PressureLaw& law, const Grid& g);

}  // namespace ep1d
