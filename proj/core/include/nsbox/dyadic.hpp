#pragma once

#include <vector>

#include "nsbox/field.hpp"

namespace nsbox {

// C-infinity step from the exp(-1/x) mollifier family: 0 for t <= 0, 1 for t >= 1.
double mollifier_step(double t);

// Radial cutoff: 1 for r <= r0, 0 for r >= r1, mollifier transition between.
double falling_cutoff(double r, double r0, double r1);

enum class PartitionKind { Smooth, Sharp };

// Homogeneous dyadic partition of unity on the frequency lattice. Smooth shells
// use phi0(r) = chi(r) - chi(2r) with chi falling on (3/2, 2), so phi0 is 1 on
// [1, 3/2] and supported in [3/4, 2]. Sharp shells are the indicator of
// 2^{j-1} < |xi| <= 2^j. The range [j_min, j_max] is chosen so the shells sum
// to 1 at every nonzero lattice frequency.
class DyadicPartition {
 public:
  DyadicPartition(const Grid& grid, PartitionKind kind);

  const Grid& grid() const { return grid_; }
  PartitionKind kind() const { return kind_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  int shells() const { return j_max_ - j_min_ + 1; }
  bool in_range(int j) const { return j >= j_min_ && j <= j_max_; }

  // Shell weight at radius |xi| (independent of the cache).
  double weight(double abs_xi, int j) const;

  // Frequency cutoff to shell j. Out-of-range j gives the zero field; the
  // caller can test in_range(j) for the warning case.
  SpectralField block(const SpectralField& u, int j) const;

  // Per-shell Parseval L2 norms of all components in one pass over modes;
  // entry 0 corresponds to j_min.
  std::vector<double> block_l2_all(const SpectralField& u) const;

  // max over nonzero lattice modes of |sum_j phi_j - 1|.
  double partition_residual() const;

 private:
  struct ModeWeights {
    int count = 0;
    int j[2] = {0, 0};
    double w[2] = {0.0, 0.0};
  };

  Grid grid_;
  PartitionKind kind_;
  int j_min_;
  int j_max_;
  std::vector<ModeWeights> cache_;

  friend class DyadicPartitionTestAccess;
};

DyadicPartition make_partition(const Grid& grid, PartitionKind kind = PartitionKind::Smooth);

}  // namespace nsbox
