#pragma once

#include <limits>
#include <string>

#include "nsbox/dyadic.hpp"
#include "nsbox/field.hpp"
#include "nsbox/trajectory.hpp"

namespace nsbox {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Exponent tuple for homogeneous Besov and time-averaged (Chemin-Lerner style)
// norms: l^sigma over shells j of 2^{s j} L^r_t L^p_x block norms.
struct NormSpec {
  double p = 2.0;
  double sigma = 1.0;
  double s = 0.0;
  double r = kInf;

  void validate() const;
};

struct NormReport {
  std::string norm_kind;
  double p = 2.0;
  double sigma = 1.0;
  double s = 0.0;
  double r = kInf;  // NaN when not applicable
  int j_min = 0;
  int j_max = 0;
  double value = 0.0;
  bool truncation_warning = false;
};

// l^sigma of nonnegative entries, max-factored so huge sigma stays stable.
double lsigma_norm(const std::vector<double>& a, double sigma);

// L^r in time of a sampled nonnegative function, trapezoid quadrature with the
// max factored out; r = inf takes the sup over samples.
double time_lr_norm(const std::vector<double>& a, double dt, double r);

// Discrete L^p over the box of the pointwise Euclidean magnitude:
// inverse transform then cell-volume-weighted quadrature (max for p = inf).
double lp_norm_physical(const SpectralField& u, double p);

double besov_norm(const SpectralField& u, const NormSpec& spec, const DyadicPartition& part);
NormReport besov_report(const SpectralField& u, const NormSpec& spec,
                        const DyadicPartition& part);

double chemin_lerner_norm(const Trajectory& u, const NormSpec& spec,
                          const DyadicPartition& part);
NormReport chemin_lerner_report(const Trajectory& u, const NormSpec& spec,
                                const DyadicPartition& part);

struct TripleNormReport {
  double value = 0.0;
  double sup_part = 0.0;      // L~inf B^0_{2,1}
  double smoothing_part = 0.0;  // (1/delta) L~{2/delta^2} H^{delta^2}
  double delta = 0.0;
  bool truncation_warning = false;
};

// ||v||_{L~inf(I;B^0_{2,1})} + (1/delta)||v||_{L~{2/delta^2}(I;H^{delta^2})},
// 0 < delta <= 1/4.
TripleNormReport triple_norm_report(const Trajectory& v, double delta,
                                    const DyadicPartition& part);
double triple_norm(const Trajectory& v, double delta, const DyadicPartition& part);

}  // namespace nsbox
