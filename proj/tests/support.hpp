#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

#include "nsbox/field.hpp"
#include "nsbox/random_fields.hpp"

namespace testsup {

using nsbox::Complex;
using nsbox::Grid;
using nsbox::SpectralField;

inline double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// Adds c e^{i xi x} + conjugate, i.e. 2 Re(c e^{i xi x}). m is the signed
// integer mode, nonzero.
inline void add_mode(SpectralField& u, int comp, std::array<int, 3> m, Complex c) {
  const Grid& g = u.grid();
  std::array<int, 3> pos{}, neg{};
  for (int a = 0; a < g.dim(); ++a) {
    pos[a] = g.storage_index(m[a]);
    neg[a] = g.storage_index(-m[a]);
  }
  u.at(comp, g.encode(pos)) += c;
  u.at(comp, g.encode(neg)) += std::conj(c);
}

// u = (0, amp cos(k (2 pi / L) k_hat . x)) along axis 0: divergence-free shear.
inline SpectralField shear_mode(const Grid& g, int k, double amp = 1.0) {
  SpectralField u(g, g.dim());
  add_mode(u, 1, {k, 0, 0}, Complex(amp / 2.0, 0.0));
  return u;
}

inline SpectralField random_velocity(const Grid& g, std::uint64_t seed,
                                     double amplitude = 1.0) {
  nsbox::EnsembleSpec ens;
  ens.amplitude = amplitude;
  return nsbox::random_field(g, g.dim(), ens, seed);
}

inline SpectralField random_scalar(const Grid& g, std::uint64_t seed,
                                   double amplitude = 1.0) {
  nsbox::EnsembleSpec ens;
  ens.amplitude = amplitude;
  ens.divergence_free = false;
  return nsbox::random_field(g, 1, ens, seed);
}

}  // namespace testsup
