#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "nsbox/grid.hpp"

namespace nsbox {

using Complex = std::complex<double>;

// Fourier coefficients of a real field on the grid, one coefficient array per
// component, indexed by wavevector in FFTW storage order. A unit-amplitude
// plane wave e^{i xi.x} carries coefficient 1 at its mode. Components number
// either 1 (scalar) or grid.dim() (velocity).
class SpectralField {
 public:
  SpectralField(const Grid& grid, int components);

  const Grid& grid() const { return grid_; }
  int components() const { return ncomp_; }
  bool is_velocity() const { return ncomp_ == grid_.dim(); }

  std::vector<Complex>& comp(int c) { return data_[c]; }
  const std::vector<Complex>& comp(int c) const { return data_[c]; }
  Complex& at(int c, std::int64_t flat) { return data_[c][flat]; }
  const Complex& at(int c, std::int64_t flat) const { return data_[c][flat]; }

  bool mean_mode_zeroed() const { return mean_mode_zeroed_; }
  void mark_mean_mode(bool zeroed) { mean_mode_zeroed_ = zeroed; }
  void zero_mean_mode();

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);
  void axpy(Complex alpha, const SpectralField& x);

  // Parseval L2 norm over the box, all components.
  double l2() const;
  double max_abs() const;
  bool finite() const;

  // max over modes of |u(m) - conj(u(-m))| relative to the largest coefficient.
  double conjugate_symmetry_defect() const;

 private:
  Grid grid_;
  int ncomp_;
  bool mean_mode_zeroed_ = true;
  std::vector<std::vector<Complex>> data_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// Point sampler: receives the physical point (dim doubles), writes one value
// per component.
using PointFn = std::function<void(std::span<const double>, std::span<double>)>;

// Samples fn on the grid and transforms to coefficients. Non-finite samples
// raise InvalidFieldData.
SpectralField sample_function(const Grid& grid, int components, const PointFn& fn);

// Inverse transform of one component; imaginary parts are roundoff for fields
// with conjugate symmetry.
std::vector<Complex> to_physical(const SpectralField& u, int c);

// Largest |imag| over samples relative to the largest |value|, as a realness check.
double physical_imag_defect(const SpectralField& u);

// Forward transform of physical samples (complex buffers, real data) into an
// existing field component.
void from_physical(SpectralField& u, int c, std::vector<Complex> samples);

}  // namespace nsbox
