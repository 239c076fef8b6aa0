#include "nsbox/dyadic.hpp"

#include <array>
#include <cmath>

#include "nsbox/errors.hpp"

namespace nsbox {

double mollifier_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = std::exp(-1.0 / t);
  double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double falling_cutoff(double r, double r0, double r1) {
  return mollifier_step((r1 - r) / (r1 - r0));
}

namespace {

double smooth_shell(double r) {
  // chi(r) - chi(2r), chi falling on (3/2, 2): plateau 1 on [1, 3/2].
  return falling_cutoff(r, 1.5, 2.0) - falling_cutoff(2.0 * r, 1.5, 2.0);
}

int sharp_shell_index(double r) {
  return static_cast<int>(std::ceil(std::log2(r)));
}

}  // namespace

DyadicPartition::DyadicPartition(const Grid& grid, PartitionKind kind)
    : grid_(grid), kind_(kind) {
  double r_min = grid.fundamental();
  double r_max = std::sqrt(static_cast<double>(grid.dim())) * grid.nyquist();
  j_min_ = static_cast<int>(std::floor(std::log2(r_min)));
  j_max_ = static_cast<int>(std::ceil(std::log2(r_max)));
  if (shells() < 3)
    throw GridTooCoarse("fewer than 3 dyadic shells on this grid");

  cache_.assign(grid_.modes(), ModeWeights{});
  std::array<int, 3> m{};
  for (std::int64_t i = 1; i < grid_.modes(); ++i) {
    grid_.decode(i, m);
    double r = std::sqrt(grid_.xi_sq(m));
    if (r == 0.0) continue;
    ModeWeights& mw = cache_[i];
    if (kind_ == PartitionKind::Sharp) {
      int j = sharp_shell_index(r);
      if (j < j_min_) j = j_min_;
      if (j > j_max_) j = j_max_;
      mw.count = 1;
      mw.j[0] = j;
      mw.w[0] = 1.0;
      continue;
    }
    int jc = static_cast<int>(std::floor(std::log2(r)));
    for (int j = jc - 1; j <= jc + 2; ++j) {
      if (j < j_min_ || j > j_max_) continue;
      double w = smooth_shell(std::ldexp(r, -j));
      if (w <= 0.0) continue;
      if (mw.count < 2) {
        mw.j[mw.count] = j;
        mw.w[mw.count] = w;
      }
      ++mw.count;
    }
    if (mw.count > 2)
      throw Error("smooth shells overlap more than pairwise");  // profile invariant
  }
}

double DyadicPartition::weight(double abs_xi, int j) const {
  if (abs_xi <= 0.0) return 0.0;
  if (kind_ == PartitionKind::Sharp)
    return sharp_shell_index(abs_xi) == j ? 1.0 : 0.0;
  return smooth_shell(std::ldexp(abs_xi, -j));
}

SpectralField DyadicPartition::block(const SpectralField& u, int j) const {
  if (u.grid() != grid_)
    throw DimensionMismatch("dyadic block on a field from another grid");
  SpectralField out(grid_, u.components());
  if (!in_range(j)) return out;
  for (std::int64_t i = 0; i < grid_.modes(); ++i) {
    const ModeWeights& mw = cache_[i];
    double w = 0.0;
    for (int k = 0; k < mw.count; ++k)
      if (mw.j[k] == j) w = mw.w[k];
    if (w == 0.0) continue;
    for (int c = 0; c < u.components(); ++c) out.at(c, i) = w * u.at(c, i);
  }
  out.mark_mean_mode(true);
  return out;
}

std::vector<double> DyadicPartition::block_l2_all(const SpectralField& u) const {
  if (u.grid() != grid_)
    throw DimensionMismatch("dyadic block norms on a field from another grid");
  std::vector<double> acc(shells(), 0.0);
  for (std::int64_t i = 0; i < grid_.modes(); ++i) {
    const ModeWeights& mw = cache_[i];
    if (mw.count == 0) continue;
    double mass = 0.0;
    for (int c = 0; c < u.components(); ++c) mass += std::norm(u.at(c, i));
    if (mass == 0.0) continue;
    for (int k = 0; k < mw.count; ++k)
      acc[mw.j[k] - j_min_] += mw.w[k] * mw.w[k] * mass;
  }
  double vol = grid_.volume();
  for (auto& v : acc) v = std::sqrt(vol * v);
  return acc;
}

double DyadicPartition::partition_residual() const {
  double worst = 0.0;
  for (std::int64_t i = 1; i < grid_.modes(); ++i) {
    const ModeWeights& mw = cache_[i];
    double s = 0.0;
    for (int k = 0; k < mw.count; ++k) s += mw.w[k];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

DyadicPartition make_partition(const Grid& grid, PartitionKind kind) {
  return DyadicPartition(grid, kind);
}

}  // namespace nsbox
