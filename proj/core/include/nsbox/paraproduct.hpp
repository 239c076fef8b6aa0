#pragma once

#include "nsbox/dyadic.hpp"
#include "nsbox/field.hpp"

namespace nsbox {

// Pointwise product of two scalar fields with the dealiasing rule applied to
// both factors and to the result.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);

// Low-high paraproduct T_f g = sum_k (S_{k-3} f)(Delta_k g).
SpectralField bony_T(const SpectralField& f, const SpectralField& g,
                     const DyadicPartition& part);

// Resonant part R(f,g) = sum_{|k-l|<=2} (Delta_k f)(Delta_l g).
SpectralField bony_R(const SpectralField& f, const SpectralField& g,
                     const DyadicPartition& part);

}  // namespace nsbox
