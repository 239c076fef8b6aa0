#include "nsbox/norms.hpp"

#include <algorithm>
#include <cmath>

#include "nsbox/errors.hpp"

namespace nsbox {

namespace {

bool valid_exponent(double p) { return p >= 1.0 && (std::isfinite(p) || p == kInf); }

// Boundary shells carrying more than this fraction of the value trip the
// truncation warning.
constexpr double kTruncationFraction = 1e-6;

bool boundary_heavy(const std::vector<double>& weighted, double value) {
  if (value <= 0.0 || weighted.size() < 2) return false;
  return weighted.front() > kTruncationFraction * value ||
         weighted.back() > kTruncationFraction * value;
}

std::vector<double> block_lp_all(const SpectralField& u, const DyadicPartition& part,
                                 double p) {
  if (p == 2.0) return part.block_l2_all(u);
  std::vector<double> out(part.shells());
  for (int j = part.j_min(); j <= part.j_max(); ++j)
    out[j - part.j_min()] = lp_norm_physical(part.block(u, j), p);
  return out;
}

}  // namespace

void NormSpec::validate() const {
  if (!valid_exponent(p)) throw InvalidParameter("norm exponent p must lie in [1, inf]");
  if (!valid_exponent(sigma))
    throw InvalidParameter("norm exponent sigma must lie in [1, inf]");
  if (!valid_exponent(r)) throw InvalidParameter("norm exponent r must lie in [1, inf]");
  if (!std::isfinite(s)) throw InvalidParameter("norm regularity s must be finite");
}

double lsigma_norm(const std::vector<double>& a, double sigma) {
  double peak = 0.0;
  for (double v : a) peak = std::max(peak, v);
  if (peak == 0.0) return 0.0;
  if (sigma == kInf) return peak;
  double s = 0.0;
  for (double v : a) {
    if (v <= 0.0) continue;
    s += std::exp(sigma * std::log(v / peak));
  }
  return peak * std::exp(std::log(s) / sigma);
}

double time_lr_norm(const std::vector<double>& a, double dt, double r) {
  double peak = 0.0;
  for (double v : a) peak = std::max(peak, v);
  if (peak == 0.0) return 0.0;
  if (r == kInf) return peak;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double w = (i == 0 || i + 1 == a.size()) ? 0.5 : 1.0;
    if (a[i] <= 0.0) continue;
    s += w * std::exp(r * std::log(a[i] / peak));
  }
  s *= dt;
  return peak * std::exp(std::log(s) / r);
}

double lp_norm_physical(const SpectralField& u, double p) {
  if (!valid_exponent(p)) throw InvalidParameter("lp exponent must lie in [1, inf]");
  const Grid& g = u.grid();
  std::vector<double> mag(g.points(), 0.0);
  for (int c = 0; c < u.components(); ++c) {
    auto phys = to_physical(u, c);
    for (std::int64_t i = 0; i < g.points(); ++i) {
      double re = phys[i].real();
      mag[i] += re * re;
    }
  }
  if (p == kInf) {
    double m = 0.0;
    for (double v : mag) m = std::max(m, v);
    return std::sqrt(m);
  }
  const double cell = g.cell_volume();
  if (p == 2.0) {
    double s = 0.0;
    for (double v : mag) s += v;
    return std::sqrt(cell * s);
  }
  double s = 0.0;
  for (double v : mag) s += std::pow(std::sqrt(v), p);
  return std::pow(cell * s, 1.0 / p);
}

double besov_norm(const SpectralField& u, const NormSpec& spec,
                  const DyadicPartition& part) {
  return besov_report(u, spec, part).value;
}

NormReport besov_report(const SpectralField& u, const NormSpec& spec,
                        const DyadicPartition& part) {
  spec.validate();
  auto norms = block_lp_all(u, part, spec.p);
  std::vector<double> weighted(norms.size());
  for (std::size_t k = 0; k < norms.size(); ++k)
    weighted[k] = std::pow(2.0, spec.s * (part.j_min() + static_cast<int>(k))) * norms[k];
  NormReport rep;
  rep.norm_kind = "besov";
  rep.p = spec.p;
  rep.sigma = spec.sigma;
  rep.s = spec.s;
  rep.r = std::nan("");
  rep.j_min = part.j_min();
  rep.j_max = part.j_max();
  rep.value = lsigma_norm(weighted, spec.sigma);
  rep.truncation_warning = boundary_heavy(weighted, rep.value);
  return rep;
}

double chemin_lerner_norm(const Trajectory& u, const NormSpec& spec,
                          const DyadicPartition& part) {
  return chemin_lerner_report(u, spec, part).value;
}

NormReport chemin_lerner_report(const Trajectory& u, const NormSpec& spec,
                                const DyadicPartition& part) {
  spec.validate();
  u.validate();
  const int shells = part.shells();
  // series[j][i]: block norm of sample i in shell j.
  std::vector<std::vector<double>> series(shells, std::vector<double>(u.size()));
  for (int i = 0; i < u.size(); ++i) {
    auto norms = block_lp_all(u.samples[i], part, spec.p);
    for (int k = 0; k < shells; ++k) series[k][i] = norms[k];
  }
  std::vector<double> weighted(shells);
  for (int k = 0; k < shells; ++k) {
    double lr = time_lr_norm(series[k], u.dt, spec.r);
    weighted[k] = std::pow(2.0, spec.s * (part.j_min() + k)) * lr;
  }
  NormReport rep;
  rep.norm_kind = "chemin_lerner";
  rep.p = spec.p;
  rep.sigma = spec.sigma;
  rep.s = spec.s;
  rep.r = spec.r;
  rep.j_min = part.j_min();
  rep.j_max = part.j_max();
  rep.value = lsigma_norm(weighted, spec.sigma);
  rep.truncation_warning = boundary_heavy(weighted, rep.value);
  return rep;
}

TripleNormReport triple_norm_report(const Trajectory& v, double delta,
                                    const DyadicPartition& part) {
  if (!(delta > 0.0) || delta > 0.25)
    throw InvalidParameter("triple norm needs 0 < delta <= 1/4");
  NormSpec sup_spec{2.0, 1.0, 0.0, kInf};
  NormSpec smooth_spec{2.0, 2.0, delta * delta, 2.0 / (delta * delta)};
  NormReport a = chemin_lerner_report(v, sup_spec, part);
  NormReport b = chemin_lerner_report(v, smooth_spec, part);
  TripleNormReport rep;
  rep.delta = delta;
  rep.sup_part = a.value;
  rep.smoothing_part = b.value / delta;
  rep.value = rep.sup_part + rep.smoothing_part;
  rep.truncation_warning = a.truncation_warning || b.truncation_warning;
  return rep;
}

double triple_norm(const Trajectory& v, double delta, const DyadicPartition& part) {
  return triple_norm_report(v, delta, part).value;
}

}  // namespace nsbox
