#pragma once

#include <cstdint>

#include "nsbox/field.hpp"
#include "nsbox/norms.hpp"

namespace nsbox {

// Seeded Gaussian ensemble: independent complex coefficients under a power-law
// envelope |xi|^slope, conjugate-symmetrized, band-limited to
// [k_min, min(k_max, dealias cutoff)], mean mode zero. The draw stream is
// hand-rolled Box-Muller over mt19937_64 words so identical seeds give
// identical fields on any platform.
struct EnsembleSpec {
  double slope = -2.0;
  double k_min = 0.0;
  double k_max = kInf;
  bool divergence_free = true;
  double amplitude = 1.0;  // resulting L2 norm (0 amplitude gives the zero field)
};

SpectralField random_field(const Grid& grid, int components, const EnsembleSpec& spec,
                           std::uint64_t seed);

}  // namespace nsbox
