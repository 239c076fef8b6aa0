#pragma once

#include <array>
#include <cstdint>

namespace nsbox {

inline constexpr double kPi = 3.14159265358979323846;

// Periodic box [0, L)^dim sampled on n points per axis. Wavevectors are
// xi = (2*pi/L) * m with integer m in (-n/2, n/2] per axis.
class Grid {
 public:
  Grid(int dim, int n, double box_length, double dealias_fraction = 2.0 / 3.0);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double box_length() const { return box_length_; }
  double dealias_fraction() const { return dealias_fraction_; }

  std::int64_t modes() const { return modes_; }
  std::int64_t total_modes() const { return modes_; }
  std::int64_t points() const { return modes_; }

  // Smallest nonzero |xi| and the per-axis Nyquist frequency.
  double fundamental() const { return 2.0 * kPi / box_length_; }
  double nyquist() const { return kPi * n_ / box_length_; }
  double cell_volume() const;
  double volume() const;

  // Largest per-axis integer mode kept by the dealiasing rule.
  int dealias_cutoff_index() const { return cutoff_index_; }
  double dealias_cutoff_frequency() const { return fundamental() * cutoff_index_; }

  int signed_mode(int storage_index) const {
    return storage_index <= n_ / 2 ? storage_index : storage_index - n_;
  }
  int storage_index(int signed_mode) const {
    return signed_mode >= 0 ? signed_mode : signed_mode + n_;
  }
  double xi(int storage_index) const { return fundamental() * signed_mode(storage_index); }

  void decode(std::int64_t flat, std::array<int, 3>& m) const {
    m[2] = 0;
    if (dim_ == 2) {
      m[0] = static_cast<int>(flat / n_);
      m[1] = static_cast<int>(flat % n_);
    } else {
      m[1] = static_cast<int>(flat / n_);
      m[0] = m[1] / n_;
      m[1] %= n_;
      m[2] = static_cast<int>(flat % n_);
    }
  }
  std::int64_t encode(const std::array<int, 3>& m) const {
    std::int64_t flat = m[0];
    for (int a = 1; a < dim_; ++a) flat = flat * n_ + m[a];
    return flat;
  }

  // |xi|^2 of the mode with storage indices m.
  double xi_sq(const std::array<int, 3>& m) const {
    double s = 0.0;
    for (int a = 0; a < dim_; ++a) {
      double x = xi(m[a]);
      s += x * x;
    }
    return s;
  }
  double xi_sq(std::int64_t flat) const {
    std::array<int, 3> m;
    decode(flat, m);
    return xi_sq(m);
  }

  bool dealias_keep(const std::array<int, 3>& m) const {
    for (int a = 0; a < dim_; ++a) {
      int sm = signed_mode(m[a]);
      if (sm > cutoff_index_ || sm < -cutoff_index_) return false;
    }
    return true;
  }

  bool operator==(const Grid& other) const {
    return dim_ == other.dim_ && n_ == other.n_ && box_length_ == other.box_length_ &&
           dealias_fraction_ == other.dealias_fraction_;
  }
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  int dim_;
  int n_;
  double box_length_;
  double dealias_fraction_;
  int cutoff_index_;
  std::int64_t modes_;
};

}  // namespace nsbox
