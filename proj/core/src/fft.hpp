#pragma once

#include <complex>

#include "nsbox/grid.hpp"

namespace nsbox::fft {

// In-place unnormalized DFTs on one component buffer of grid layout.
// forward: physical -> sum with e^{-i xi.x}; backward: spectral -> sum with e^{+i xi.x}.
// Plans are cached per (dim, n, sign) behind a mutex; execution is reentrant.
// Plans are created with FFTW_ESTIMATE so repeated runs pick identical algorithms.
void forward(const Grid& grid, std::complex<double>* data);
void backward(const Grid& grid, std::complex<double>* data);

}  // namespace nsbox::fft
