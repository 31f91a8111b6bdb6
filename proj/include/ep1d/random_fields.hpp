#pragma once

#include <random>

#include "ep1d/field.hpp"

namespace ep1d {

// Seeded smooth test-field generators shared by property tests and the
// poisson-test CLI subcommand. Fields are built from grid-resonant modes with
// Gaussian coefficients, so they are exactly band-limited; the localized
// variant multiplies by a random Gaussian envelope. Given the same generator
// state the draw is bit-reproducible.

// Band-limited field with |xi| <= xi_max, rescaled to sup-norm target_linf.
Field random_bandlimited(const Grid& g, std::mt19937_64& rng, double xi_max,
                         double target_linf);

// Envelope-localized smooth field rescaled to L2 norm target_l2. Center stays
// within the middle half of the domain, width in [2, 8].
Field random_localized(const Grid& g, std::mt19937_64& rng, double xi_max, double target_l2);

}  // namespace ep1d
