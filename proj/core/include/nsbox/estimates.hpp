#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "nsbox/norms.hpp"
#include "nsbox/periodic_solver.hpp"

namespace nsbox {

// Empirical constant measurement for one inequality: per-trial LHS/RHS over a
// seeded random ensemble. Both sides run through independent code paths (the
// Duhamel machinery on the left, the norm library on the right).
struct RatioReport {
  std::string inequality_id;
  int trials = 0;
  std::uint64_t seed = 0;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  // Parameter echo; NaN where a slot does not apply.
  int n = 0;
  double p = 0.0, q = 0.0, r = 0.0, r1 = 0.0, sigma = 0.0, s = 0.0, delta = 0.0;
  bool truncation_warning = false;
  std::vector<double> ratios;  // per trial, in trial order
};

// Outcome of a pure admissibility predicate; `violated` names the failed
// condition when ok is false.
struct Admissibility {
  bool ok = true;
  std::string violated;
};

// Exponent window of the heat-Duhamel bilinear bound:
//   max{0, n(1/q - 1/p)} < 1 - 2/r  and  min{n, n(1/p + 1/q)} - 2 + 2/r > 0
// with 1 <= p, q <= inf. Infinite r contributes 2/r = 0.
Admissibility bilinear_admissible(int n, double p, double q, double r);

// Exponent window in which perturbation decay is expected:
//   1 <= p < n, 1 <= q < 2n, 1/q - 1/p < 1/n, 1 <= sigma < inf,
//   max{0, 1 - (n/2) min{1, 2/q, 1/p + 1/q}} < 1/r < 1/2 - (n/2) max{0, 1/q - 1/p}.
Admissibility stability_window_admissible(int n, double p, double q, double r,
                                          double sigma);

struct MaxRegSpec {
  double p = 2.0, sigma = 1.0, s = 0.0;
  double r = kInf;   // left-hand time exponent
  double r1 = 1.0;   // forcing time exponent (Duhamel variant), r1 <= r
  double interval = 1.0;
  int time_samples = 33;
  bool duhamel = false;  // false: heat flow of data; true: Duhamel of forcing
  EnsembleSpec ensemble;
};

struct BilinearSpec {
  double p = 2.0, q = 2.0, sigma = 1.0;
  double r = kInf;   // right-hand time exponent of v
  double r1 = kInf;  // left-hand time exponent, r <= r1
  double interval = 1.0;
  int time_samples = 33;
  EnsembleSpec ensemble;
};

// Single-ratio evaluations on explicit inputs (0/0 counts as 0). These are
// the deterministic cores the randomized checks drive.
double max_reg_heat_ratio(const SpectralField& a, const MaxRegSpec& spec,
                          const DyadicPartition& part);
double max_reg_duhamel_ratio(const Trajectory& f, const MaxRegSpec& spec,
                             const DyadicPartition& part);
double bilinear_ratio(const Trajectory& u, const Trajectory& v, const BilinearSpec& spec,
                      const DyadicPartition& part);
double triple_norm_ratio(const Trajectory& u, const Trajectory& v, double delta,
                         const DyadicPartition& part);
// (B^0_{2,1} x B^0_{2,inf} bound, weighted B^0_{4,1} bound)
std::pair<double, double> uniqueness_ratios(const Trajectory& u, const Trajectory& v,
                                            const DyadicPartition& part);

// Randomized sweeps; all deterministic in (grid, spec, trials, seed).
RatioReport check_max_reg(const Grid& grid, const MaxRegSpec& spec, int trials,
                          std::uint64_t seed);
RatioReport check_bilinear(const Grid& grid, const BilinearSpec& spec, int trials,
                           std::uint64_t seed);
RatioReport check_triple_norm_bilinear(const Grid& grid, double delta, double interval,
                                       int time_samples, const EnsembleSpec& ensemble,
                                       int trials, std::uint64_t seed);
std::pair<RatioReport, RatioReport> check_uniqueness_bilinears(const Grid& grid,
                                                               double interval,
                                                               int time_samples,
                                                               const EnsembleSpec& ensemble,
                                                               int trials,
                                                               std::uint64_t seed);

}  // namespace nsbox
