#include "nsbox/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsbox/errors.hpp"
#include "nsbox/operators.hpp"

namespace nsbox {

namespace {

double inv(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

double safe_div(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs == 0.0 ? 0.0 : kInf;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1));
}

void require_mesh(double interval, int samples) {
  if (!(interval > 0.0) || !std::isfinite(interval))
    throw InvalidParameter("interval must be positive");
  if (samples < 2) throw InvalidParameter("needs at least two time samples");
}

// u(t) = cos(2 pi t/interval) f0 + sin(2 pi t/interval) f1: norm-stationary
// in time with full spectral content from the ensemble.
Trajectory wave_trajectory(const Grid& grid, double interval, int samples,
                           const EnsembleSpec& ens, std::uint64_t seed) {
  SpectralField f0 = random_field(grid, grid.dim(), ens, seed);
  SpectralField f1 = random_field(grid, grid.dim(), ens, seed ^ 0xd1b54a32d192ed03ULL);
  Trajectory t;
  t.t0 = 0.0;
  t.dt = interval / (samples - 1);
  t.samples.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double theta = 2.0 * kPi * (t.dt * i) / interval;
    SpectralField s = f0;
    s *= std::cos(theta);
    s.axpy(Complex(std::sin(theta), 0.0), f1);
    t.samples.push_back(std::move(s));
  }
  return t;
}

Trajectory heat_trajectory(const Grid& grid, double interval, int samples,
                           const EnsembleSpec& ens, std::uint64_t seed) {
  SpectralField a = random_field(grid, grid.dim(), ens, seed);
  Trajectory t;
  t.t0 = 0.0;
  t.dt = interval / (samples - 1);
  t.samples.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) t.samples.push_back(heat_propagate(a, t.dt * i));
  return t;
}

Trajectory bilinear_duhamel(const Trajectory& u, const Trajectory& v) {
  if (u.grid() != v.grid() || u.size() != v.size())
    throw DimensionMismatch("trajectories are not comparable");
  Trajectory s = u;
  for (std::size_t i = 0; i < u.size(); ++i)
    s.samples[i] = nonlinear_tensor_div(u.samples[i], v.samples[i]);
  return duhamel_integral(s);
}

struct Measured {
  double ratio = 0.0;
  bool warn = false;
};

Measured heat_ratio_impl(const SpectralField& a, const MaxRegSpec& spec,
                         const DyadicPartition& part) {
  require_mesh(spec.interval, spec.time_samples);
  Trajectory t;
  t.t0 = 0.0;
  t.dt = spec.interval / (spec.time_samples - 1);
  t.samples.reserve(static_cast<std::size_t>(spec.time_samples));
  for (int i = 0; i < spec.time_samples; ++i)
    t.samples.push_back(heat_propagate(a, t.dt * i));
  const NormSpec lhs_spec{spec.p, spec.sigma, spec.s + 2.0 * inv(spec.r), spec.r};
  const NormSpec rhs_spec{spec.p, spec.sigma, spec.s, kInf};
  NormReport lhs = chemin_lerner_report(t, lhs_spec, part);
  NormReport rhs = besov_report(a, rhs_spec, part);
  return {safe_div(lhs.value, rhs.value),
          lhs.truncation_warning || rhs.truncation_warning};
}

Measured duhamel_ratio_impl(const Trajectory& f, const MaxRegSpec& spec,
                            const DyadicPartition& part) {
  if (!(spec.r1 >= 1.0) || !(spec.r >= spec.r1))
    throw InvalidParameter("needs 1 <= r1 <= r");
  Trajectory d = duhamel_integral(f);
  const NormSpec lhs_spec{spec.p, spec.sigma, spec.s + 2.0 * inv(spec.r), spec.r};
  const NormSpec rhs_spec{spec.p, spec.sigma, spec.s - 2.0 + 2.0 * inv(spec.r1), spec.r1};
  NormReport lhs = chemin_lerner_report(d, lhs_spec, part);
  NormReport rhs = chemin_lerner_report(f, rhs_spec, part);
  return {safe_div(lhs.value, rhs.value),
          lhs.truncation_warning || rhs.truncation_warning};
}

Measured bilinear_ratio_impl(const Trajectory& u, const Trajectory& v,
                             const BilinearSpec& spec, const DyadicPartition& part) {
  const int n = u.grid().dim();
  Admissibility adm = bilinear_admissible(n, spec.p, spec.q, spec.r);
  if (!adm.ok) throw InvalidParameter("inadmissible exponents: " + adm.violated);
  if (!(spec.r1 >= spec.r)) throw InvalidParameter("needs r <= r1");
  Trajectory b = bilinear_duhamel(u, v);
  const NormSpec lhs_spec{spec.q, spec.sigma, n / spec.q - 1.0 + 2.0 * inv(spec.r1),
                          spec.r1};
  const NormSpec u_spec{spec.p, spec.sigma, n / spec.p - 1.0, kInf};
  const NormSpec v_spec{spec.q, spec.sigma, n / spec.q - 1.0 + 2.0 * inv(spec.r), spec.r};
  NormReport lhs = chemin_lerner_report(b, lhs_spec, part);
  NormReport un = chemin_lerner_report(u, u_spec, part);
  NormReport vn = chemin_lerner_report(v, v_spec, part);
  return {safe_div(lhs.value, un.value * vn.value),
          lhs.truncation_warning || un.truncation_warning || vn.truncation_warning};
}

Measured triple_ratio_impl(const Trajectory& u, const Trajectory& v, double delta,
                           const DyadicPartition& part) {
  Trajectory b = bilinear_duhamel(u, v);
  TripleNormReport lhs = triple_norm_report(b, delta, part);
  TripleNormReport un = triple_norm_report(u, delta, part);
  TripleNormReport vn = triple_norm_report(v, delta, part);
  return {safe_div(lhs.value, un.value * vn.value),
          lhs.truncation_warning || un.truncation_warning || vn.truncation_warning};
}

struct UniqPair {
  Measured plain;
  Measured weighted;
};

UniqPair uniqueness_impl(const Trajectory& u, const Trajectory& v,
                         const DyadicPartition& part) {
  if (u.grid().dim() != 2) throw DimensionMismatch("these bounds are 2D only");
  Trajectory b = bilinear_duhamel(u, v);
  const NormSpec b2inf{2.0, kInf, 0.0, kInf};
  const NormSpec b21{2.0, 1.0, 0.0, kInf};
  const NormSpec b41{4.0, 1.0, 0.0, kInf};
  bool warn = false;
  auto sup_norm = [&](const Trajectory& t, const NormSpec& ns, bool weighted) {
    double worst = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      NormReport rep = besov_report(t.samples[i], ns, part);
      warn = warn || rep.truncation_warning;
      const double w = weighted ? std::pow(t.dt * static_cast<double>(i), 0.25) : 1.0;
      worst = std::max(worst, w * rep.value);
    }
    return worst;
  };
  const double lhs = sup_norm(b, b2inf, false);
  const double v_sup = sup_norm(v, b2inf, false);
  UniqPair out;
  out.plain = {safe_div(lhs, sup_norm(u, b21, false) * v_sup), warn};
  out.weighted = {safe_div(lhs, sup_norm(u, b41, true) * v_sup), warn};
  return out;
}

void fill_params(RatioReport& rep, const Grid& grid) {
  rep.n = grid.dim();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.p = rep.q = rep.r = rep.r1 = rep.sigma = rep.s = rep.delta = nan;
}

void finalize(RatioReport& rep) {
  rep.max_ratio = 0.0;
  for (double r : rep.ratios) rep.max_ratio = std::max(rep.max_ratio, r);
  rep.median_ratio = median_of(rep.ratios);
  rep.trials = static_cast<int>(rep.ratios.size());
}

void require_trials(int trials) {
  if (trials < 30) throw InvalidParameter("needs at least 30 trials");
}

}  // namespace

Admissibility bilinear_admissible(int n, double p, double q, double r) {
  if (n < 2) return {false, "n >= 2"};
  if (!(p >= 1.0)) return {false, "1 <= p"};
  if (!(q >= 1.0)) return {false, "1 <= q"};
  if (!(r >= 1.0)) return {false, "1 <= r"};
  const double lhs1 = std::max(0.0, n * (inv(q) - inv(p)));
  if (!(lhs1 < 1.0 - 2.0 * inv(r)))
    return {false, "max{0, n(1/q - 1/p)} < 1 - 2/r"};
  const double lhs2 = std::min(static_cast<double>(n), n * (inv(p) + inv(q)));
  if (!(lhs2 - 2.0 + 2.0 * inv(r) > 0.0))
    return {false, "min{n, n(1/p + 1/q)} - 2 + 2/r > 0"};
  return {};
}

Admissibility stability_window_admissible(int n, double p, double q, double r,
                                          double sigma) {
  if (n < 3) return {false, "n >= 3"};
  if (!(p >= 1.0) || !(p < n)) return {false, "1 <= p < n"};
  if (!(q >= 1.0) || !(q < 2.0 * n)) return {false, "1 <= q < 2n"};
  if (!(inv(q) - inv(p) < 1.0 / n)) return {false, "1/q - 1/p < 1/n"};
  if (!(sigma >= 1.0) || std::isinf(sigma)) return {false, "1 <= sigma < inf"};
  const double lower =
      std::max(0.0, 1.0 - 0.5 * n * std::min({1.0, 2.0 * inv(q), inv(p) + inv(q)}));
  const double upper = 0.5 - 0.5 * n * std::max(0.0, inv(q) - inv(p));
  const double rinv = inv(r);
  if (!(lower < rinv)) return {false, "max{0, 1 - (n/2)min{1, 2/q, 1/p + 1/q}} < 1/r"};
  if (!(rinv < upper)) return {false, "1/r < 1/2 - (n/2)max{0, 1/q - 1/p}"};
  return {};
}

double max_reg_heat_ratio(const SpectralField& a, const MaxRegSpec& spec,
                          const DyadicPartition& part) {
  return heat_ratio_impl(a, spec, part).ratio;
}

double max_reg_duhamel_ratio(const Trajectory& f, const MaxRegSpec& spec,
                             const DyadicPartition& part) {
  return duhamel_ratio_impl(f, spec, part).ratio;
}

double bilinear_ratio(const Trajectory& u, const Trajectory& v, const BilinearSpec& spec,
                      const DyadicPartition& part) {
  return bilinear_ratio_impl(u, v, spec, part).ratio;
}

double triple_norm_ratio(const Trajectory& u, const Trajectory& v, double delta,
                         const DyadicPartition& part) {
  return triple_ratio_impl(u, v, delta, part).ratio;
}

std::pair<double, double> uniqueness_ratios(const Trajectory& u, const Trajectory& v,
                                            const DyadicPartition& part) {
  UniqPair p = uniqueness_impl(u, v, part);
  return {p.plain.ratio, p.weighted.ratio};
}

RatioReport check_max_reg(const Grid& grid, const MaxRegSpec& spec, int trials,
                          std::uint64_t seed) {
  require_trials(trials);
  require_mesh(spec.interval, spec.time_samples);
  if (spec.duhamel && (!(spec.r1 >= 1.0) || !(spec.r >= spec.r1)))
    throw InvalidParameter("needs 1 <= r1 <= r");
  DyadicPartition part = make_partition(grid, PartitionKind::Smooth);

  RatioReport rep;
  rep.inequality_id = spec.duhamel ? "max-reg-duhamel" : "max-reg-heat";
  rep.seed = seed;
  fill_params(rep, grid);
  rep.p = spec.p;
  rep.sigma = spec.sigma;
  rep.s = spec.s;
  rep.r = spec.r;
  rep.r1 = spec.duhamel ? spec.r1 : std::numeric_limits<double>::quiet_NaN();
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t ts = trial_seed(seed, trial);
    Measured m;
    if (spec.duhamel) {
      Trajectory f =
          wave_trajectory(grid, spec.interval, spec.time_samples, spec.ensemble, ts);
      m = duhamel_ratio_impl(f, spec, part);
    } else {
      SpectralField a = random_field(grid, grid.dim(), spec.ensemble, ts);
      m = heat_ratio_impl(a, spec, part);
    }
    rep.ratios.push_back(m.ratio);
    rep.truncation_warning = rep.truncation_warning || m.warn;
  }
  finalize(rep);
  return rep;
}

RatioReport check_bilinear(const Grid& grid, const BilinearSpec& spec, int trials,
                           std::uint64_t seed) {
  require_trials(trials);
  require_mesh(spec.interval, spec.time_samples);
  Admissibility adm = bilinear_admissible(grid.dim(), spec.p, spec.q, spec.r);
  if (!adm.ok) throw InvalidParameter("inadmissible exponents: " + adm.violated);
  if (!(spec.r1 >= spec.r)) throw InvalidParameter("needs r <= r1");
  DyadicPartition part = make_partition(grid, PartitionKind::Smooth);

  RatioReport rep;
  rep.inequality_id = "bilinear-heat-duhamel";
  rep.seed = seed;
  fill_params(rep, grid);
  rep.p = spec.p;
  rep.q = spec.q;
  rep.r = spec.r;
  rep.r1 = spec.r1;
  rep.sigma = spec.sigma;
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t ts = trial_seed(seed, trial);
    Trajectory u =
        wave_trajectory(grid, spec.interval, spec.time_samples, spec.ensemble, ts);
    Trajectory v = wave_trajectory(grid, spec.interval, spec.time_samples, spec.ensemble,
                                   ts ^ 0xbf58476d1ce4e5b9ULL);
    Measured m = bilinear_ratio_impl(u, v, spec, part);
    rep.ratios.push_back(m.ratio);
    rep.truncation_warning = rep.truncation_warning || m.warn;
  }
  finalize(rep);
  return rep;
}

RatioReport check_triple_norm_bilinear(const Grid& grid, double delta, double interval,
                                       int time_samples, const EnsembleSpec& ensemble,
                                       int trials, std::uint64_t seed) {
  require_trials(trials);
  require_mesh(interval, time_samples);
  if (!(delta > 0.0) || !(delta <= 0.25))
    throw InvalidParameter("delta must lie in (0, 1/4]");
  DyadicPartition part = make_partition(grid, PartitionKind::Smooth);

  RatioReport rep;
  rep.inequality_id = "triple-norm-bilinear";
  rep.seed = seed;
  fill_params(rep, grid);
  rep.p = 2.0;
  rep.sigma = 1.0;
  rep.delta = delta;
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t ts = trial_seed(seed, trial);
    Trajectory u = wave_trajectory(grid, interval, time_samples, ensemble, ts);
    Trajectory v = wave_trajectory(grid, interval, time_samples, ensemble,
                                   ts ^ 0xbf58476d1ce4e5b9ULL);
    Measured m = triple_ratio_impl(u, v, delta, part);
    rep.ratios.push_back(m.ratio);
    rep.truncation_warning = rep.truncation_warning || m.warn;
  }
  finalize(rep);
  return rep;
}

std::pair<RatioReport, RatioReport> check_uniqueness_bilinears(
    const Grid& grid, double interval, int time_samples, const EnsembleSpec& ensemble,
    int trials, std::uint64_t seed) {
  require_trials(trials);
  require_mesh(interval, time_samples);
  if (grid.dim() != 2) throw DimensionMismatch("these bounds are 2D only");
  DyadicPartition part = make_partition(grid, PartitionKind::Smooth);

  RatioReport plain;
  plain.inequality_id = "uniqueness-b21-b2inf";
  plain.seed = seed;
  fill_params(plain, grid);
  plain.p = 2.0;
  plain.q = 2.0;
  RatioReport weighted = plain;
  weighted.inequality_id = "uniqueness-weighted-b41";
  weighted.p = 4.0;

  EnsembleSpec rough = ensemble;
  rough.slope = ensemble.slope + 1.0;
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t ts = trial_seed(seed, trial);
    // Half the trials exercise the (t - t0)^{1/4} weight with heat flows of
    // rough data, which are singular at t0 in the B^0_{4,1} sense.
    Trajectory u, v;
    if (trial % 2 == 0) {
      u = wave_trajectory(grid, interval, time_samples, ensemble, ts);
      v = wave_trajectory(grid, interval, time_samples, ensemble,
                          ts ^ 0xbf58476d1ce4e5b9ULL);
    } else {
      u = heat_trajectory(grid, interval, time_samples, rough, ts);
      v = heat_trajectory(grid, interval, time_samples, rough,
                          ts ^ 0xbf58476d1ce4e5b9ULL);
    }
    UniqPair m = uniqueness_impl(u, v, part);
    plain.ratios.push_back(m.plain.ratio);
    plain.truncation_warning = plain.truncation_warning || m.plain.warn;
    weighted.ratios.push_back(m.weighted.ratio);
    weighted.truncation_warning = weighted.truncation_warning || m.weighted.warn;
  }
  finalize(plain);
  finalize(weighted);
  return {plain, weighted};
}

}  // namespace nsbox
