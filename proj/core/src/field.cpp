#include "nsbox/field.hpp"

#include <cmath>
#include <string>

#include "fft.hpp"
#include "nsbox/errors.hpp"

namespace nsbox {

SpectralField::SpectralField(const Grid& grid, int components)
    : grid_(grid), ncomp_(components) {
  if (components != 1 && components != grid.dim())
    throw DimensionMismatch("field components must be 1 or grid.dim, got " +
                            std::to_string(components));
  data_.assign(ncomp_, std::vector<Complex>(grid_.modes(), Complex(0.0, 0.0)));
}

void SpectralField::zero_mean_mode() {
  for (int c = 0; c < ncomp_; ++c) data_[c][0] = Complex(0.0, 0.0);
  mean_mode_zeroed_ = true;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (grid_ != other.grid_ || ncomp_ != other.ncomp_)
    throw DimensionMismatch("field sum on mismatched grids or component counts");
  for (int c = 0; c < ncomp_; ++c)
    for (std::int64_t i = 0; i < grid_.modes(); ++i) data_[c][i] += other.data_[c][i];
  mean_mode_zeroed_ = mean_mode_zeroed_ && other.mean_mode_zeroed_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (grid_ != other.grid_ || ncomp_ != other.ncomp_)
    throw DimensionMismatch("field difference on mismatched grids or component counts");
  for (int c = 0; c < ncomp_; ++c)
    for (std::int64_t i = 0; i < grid_.modes(); ++i) data_[c][i] -= other.data_[c][i];
  mean_mode_zeroed_ = mean_mode_zeroed_ && other.mean_mode_zeroed_;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (int c = 0; c < ncomp_; ++c)
    for (auto& v : data_[c]) v *= s;
  return *this;
}

void SpectralField::axpy(Complex alpha, const SpectralField& x) {
  if (grid_ != x.grid_ || ncomp_ != x.ncomp_)
    throw DimensionMismatch("axpy on mismatched grids or component counts");
  for (int c = 0; c < ncomp_; ++c)
    for (std::int64_t i = 0; i < grid_.modes(); ++i) data_[c][i] += alpha * x.data_[c][i];
  mean_mode_zeroed_ = mean_mode_zeroed_ && x.mean_mode_zeroed_;
  return;
}

double SpectralField::l2() const {
  double s = 0.0;
  for (int c = 0; c < ncomp_; ++c)
    for (const auto& v : data_[c]) s += std::norm(v);
  return std::sqrt(grid_.volume() * s);
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (int c = 0; c < ncomp_; ++c)
    for (const auto& v : data_[c]) m = std::max(m, std::abs(v));
  return m;
}

bool SpectralField::finite() const {
  for (int c = 0; c < ncomp_; ++c)
    for (const auto& v : data_[c])
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

double SpectralField::conjugate_symmetry_defect() const {
  const int n = grid_.n();
  double worst = 0.0;
  double scale = max_abs();
  if (scale == 0.0) return 0.0;
  std::array<int, 3> m{}, mm{};
  for (int c = 0; c < ncomp_; ++c) {
    for (std::int64_t i = 0; i < grid_.modes(); ++i) {
      grid_.decode(i, m);
      for (int a = 0; a < grid_.dim(); ++a) mm[a] = (n - m[a]) % n;
      std::int64_t j = grid_.encode(mm);
      worst = std::max(worst, std::abs(data_[c][i] - std::conj(data_[c][j])));
    }
  }
  return worst / scale;
}

SpectralField operator+(SpectralField a, const SpectralField& b) {
  a += b;
  return a;
}

SpectralField operator-(SpectralField a, const SpectralField& b) {
  a -= b;
  return a;
}

SpectralField operator*(double s, SpectralField a) {
  a *= s;
  return a;
}

SpectralField sample_function(const Grid& grid, int components, const PointFn& fn) {
  SpectralField u(grid, components);
  std::vector<std::vector<Complex>> buf(components,
                                        std::vector<Complex>(grid.points()));
  const double h = grid.box_length() / grid.n();
  std::array<int, 3> m{};
  std::array<double, 3> x{};
  std::array<double, 3> val{};
  for (std::int64_t i = 0; i < grid.points(); ++i) {
    grid.decode(i, m);
    for (int a = 0; a < grid.dim(); ++a) x[a] = h * m[a];
    fn(std::span<const double>(x.data(), grid.dim()),
       std::span<double>(val.data(), components));
    for (int c = 0; c < components; ++c) {
      if (!std::isfinite(val[c]))
        throw InvalidFieldData("sample_function produced a non-finite value");
      buf[c][i] = Complex(val[c], 0.0);
    }
  }
  for (int c = 0; c < components; ++c) from_physical(u, c, std::move(buf[c]));
  return u;
}

std::vector<Complex> to_physical(const SpectralField& u, int c) {
  std::vector<Complex> out = u.comp(c);
  fft::backward(u.grid(), out.data());
  return out;
}

double physical_imag_defect(const SpectralField& u) {
  double worst = 0.0;
  double scale = 0.0;
  for (int c = 0; c < u.components(); ++c) {
    auto phys = to_physical(u, c);
    for (const auto& v : phys) {
      worst = std::max(worst, std::abs(v.imag()));
      scale = std::max(scale, std::abs(v));
    }
  }
  return scale == 0.0 ? 0.0 : worst / scale;
}

void from_physical(SpectralField& u, int c, std::vector<Complex> samples) {
  if (static_cast<std::int64_t>(samples.size()) != u.grid().points())
    throw DimensionMismatch("physical sample count does not match the grid");
  fft::forward(u.grid(), samples.data());
  const double inv = 1.0 / static_cast<double>(u.grid().points());
  for (auto& v : samples) v *= inv;
  u.comp(c) = std::move(samples);
  bool zeroed = true;
  for (int cc = 0; cc < u.components(); ++cc)
    if (std::abs(u.at(cc, 0)) != 0.0) zeroed = false;
  u.mark_mean_mode(zeroed);
}

}  // namespace nsbox
