#pragma once

#include <cstdint>

#include "nsbox/field.hpp"

namespace nsbox {

// Mode-diagonal Helmholtz (Leray) projection onto divergence-free fields.
// The mean mode is zeroed.
SpectralField leray_project(const SpectralField& u);

// e^{t Laplacian}; t < 0 raises InvalidTime.
SpectralField heat_propagate(const SpectralField& u, double t);

// Laplacian multiplier -|xi|^2, all components.
SpectralField laplacian(const SpectralField& u);

// Spectral divergence of a velocity field; scalar output.
SpectralField divergence(const SpectralField& u);

// 2D only: (-d2 s, d1 s) of a scalar field.
SpectralField perp_gradient(const SpectralField& s);

// Solves Laplacian v = u for mean-zero u; MeanModeNotZero otherwise.
SpectralField inverse_laplacian(const SpectralField& u);

// Zeroes every coefficient with any |m_a| above the dealias cutoff.
void dealias_truncate(SpectralField& u);

// Leray-projected divergence of the tensor product u (x) v, with physical-space
// products dealiased before and after. Component i is P sum_j d_j (u_j v_i).
SpectralField nonlinear_tensor_div(const SpectralField& u, const SpectralField& v);

struct ScaleReport {
  std::int64_t dropped_modes = 0;
  double dropped_mass_rel = 0.0;  // l2 fraction of the input lost off-lattice
};

// Dyadic rescaling u -> lambda u(lambda x) with lambda = 2^k on the same grid.
// Modes pushed off the lattice are dropped and reported.
SpectralField scale_field(const SpectralField& u, int log2_lambda,
                          ScaleReport* report = nullptr);

// Convenience overload; UnsupportedScale unless lambda is a power of two.
SpectralField scale_field(const SpectralField& u, double lambda,
                          ScaleReport* report = nullptr);

}  // namespace nsbox
