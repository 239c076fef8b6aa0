#include "nsbox/counterexample.hpp"

#include <cmath>

#include "nsbox/errors.hpp"
#include "nsbox/operators.hpp"
#include "nsbox/paraproduct.hpp"
#include "phi.hpp"

namespace nsbox {

namespace {

void require_2d(const Grid& grid) {
  if (grid.dim() != 2) throw DimensionMismatch("this construction is 2D only");
}

// Running heat-flow integral that keeps only the latest value. sample(s)
// must return the integrand at t0 + s dt; the result is the integral at
// t0 + nseg dt with piecewise-linear interpolation between samples.
SpectralField duhamel_endpoint(const Grid& grid, int ncomp, double dt, int nseg,
                               const std::function<SpectralField(int)>& sample) {
  const std::size_t nmodes = grid.total_modes();
  std::vector<double> decay(nmodes), wa(nmodes), wb(nmodes);
  for (std::size_t i = 0; i < nmodes; ++i) {
    const double z = -grid.xi_sq(i) * dt;
    const double p1 = detail::phi1(z);
    const double p2 = detail::phi2(z);
    decay[i] = std::exp(z);
    wa[i] = dt * (p1 - p2);
    wb[i] = dt * p2;
  }
  SpectralField acc(grid, ncomp);
  acc.mark_mean_mode(true);
  SpectralField left = sample(0);
  for (int s = 0; s < nseg; ++s) {
    SpectralField right = sample(s + 1);
    for (int c = 0; c < ncomp; ++c)
      for (std::size_t i = 0; i < nmodes; ++i)
        acc.at(c, i) =
            decay[i] * acc.at(c, i) + wa[i] * left.at(c, i) + wb[i] * right.at(c, i);
    left = std::move(right);
  }
  bool zero = true;
  for (int c = 0; c < ncomp; ++c) zero = zero && acc.at(c, 0) == Complex(0.0, 0.0);
  acc.mark_mean_mode(zero);
  return acc;
}

SpectralField inv_lap(const SpectralField& u) { return inverse_laplacian(u); }

}  // namespace

void CounterexampleParams::validate() const {
  if (!(delta_cap > 0.0) || !(delta_cap < 1.0))
    throw InvalidParameter("delta_cap must lie in (0, 1)");
  if (!(delta > 0.0) || delta > delta_cap)
    throw InvalidParameter("delta must lie in (0, delta_cap]");
  if (!(eta > 0.0) || eta > 0.5) throw InvalidParameter("eta must lie in (0, 1/2]");
  if (!(mfreq > 2.0) || !std::isfinite(mfreq))
    throw InvalidParameter("carrier frequency must exceed 2");
  if (!(period > 0.0) || !std::isfinite(period))
    throw InvalidParameter("period must be positive");
  if (period > std::exp2(1.0 / (delta * delta)))
    throw InvalidParameter("period exceeds 2^{1/delta^2}");
  if (!std::isfinite(t0)) throw InvalidParameter("t0 must be finite");
  if (!(epsilon0 > 0.0)) throw InvalidParameter("epsilon0 must be positive");
  if (h) {
    h->validate();
    if (std::abs(h->period - period) > 1e-9 * period)
      throw InvalidParameter("h period does not match T");
  }
}

SpectralField build_psi(const Grid& grid) {
  require_2d(grid);
  if (grid.fundamental() > 1.0)
    throw GridTooCoarse("box too small: no lattice mode inside the bump plateau");
  if (grid.dealias_cutoff_frequency() < 2.0)
    throw GridTooCoarse("grid cannot resolve the bump support |xi| <= 2");
  SpectralField psi(grid, 1);
  const double inv_vol = 1.0 / grid.volume();
  for (std::size_t i = 0; i < grid.total_modes(); ++i) {
    const double r = std::sqrt(grid.xi_sq(i));
    const double w = falling_cutoff(r, 1.0, 2.0);
    if (w != 0.0) psi.at(0, i) = Complex(w * inv_vol, 0.0);
  }
  psi.mark_mean_mode(false);
  return psi;
}

SpectralField build_g(const Grid& grid, double mfreq) {
  require_2d(grid);
  if (!(mfreq > 2.0)) throw InvalidParameter("carrier frequency must exceed 2");
  const double lattice_pos = mfreq / grid.fundamental();
  if (std::abs(lattice_pos - std::round(lattice_pos)) > 1e-9 * std::max(1.0, lattice_pos))
    throw InvalidParameter("carrier frequency must sit on the frequency lattice");
  if (mfreq + 2.0 > grid.dealias_cutoff_frequency())
    throw GridTooCoarse("carrier annulus extends past the dealias cutoff");

  // s = psi cos(M x1) assembled directly in coefficients: half a bump around
  // each of +-M e1. Radial evaluation keeps the Hermitian symmetry exact.
  SpectralField s(grid, 1);
  const double half_inv_vol = 0.5 / grid.volume();
  std::array<int, 3> m{};
  for (std::int64_t i = 0; i < grid.total_modes(); ++i) {
    grid.decode(i, m);
    const double x0 = grid.xi(m[0]);
    const double x1 = grid.xi(m[1]);
    const double rm = std::hypot(x0 - mfreq, x1);
    const double rp = std::hypot(x0 + mfreq, x1);
    const double w = falling_cutoff(rm, 1.0, 2.0) + falling_cutoff(rp, 1.0, 2.0);
    if (w != 0.0) s.at(0, i) = Complex(w * half_inv_vol, 0.0);
  }
  SpectralField g = perp_gradient(s);
  g.zero_mean_mode();
  return g;
}

PeriodicForce build_force(const CounterexampleParams& params, const Grid& grid) {
  params.validate();
  SpectralField g = build_g(grid, params.mfreq);
  SpectralField base = laplacian(g);
  base *= params.eta * params.delta;
  const double h_scale = params.eta * params.eta * params.delta;

  PeriodicForce f;
  f.period = params.period;
  const int m = params.h ? params.h->sample_count() : 2;
  f.samples.reserve(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) {
    SpectralField sample = base;
    if (params.h) {
      const SpectralField& hs = params.h->samples[static_cast<std::size_t>(s)];
      if (hs.grid() != grid) throw DimensionMismatch("h lives on a different grid");
      sample.axpy(Complex(h_scale, 0.0), hs);
    }
    f.samples.push_back(std::move(sample));
  }
  f.validate();
  return f;
}

KReport k_delta_T(double delta, double period) {
  if (!(delta > 0.0) || !(delta < 1.0)) throw InvalidParameter("delta must lie in (0, 1)");
  if (!(period > 0.0) || !std::isfinite(period))
    throw InvalidParameter("period must be positive");
  const double span = std::exp2(1.0 / (delta * delta));
  if (period > span) throw InvalidParameter("period exceeds 2^{1/delta^2}");
  const double x = span / period;
  if (!(x < 9.0e15)) throw InvalidParameter("whole-period count overflows");
  KReport r;
  r.k = static_cast<long long>(std::ceil(x));
  if (r.k < 1) r.k = 1;
  r.check = std::pow(static_cast<double>(r.k) * period, delta * delta);
  if (r.check < 2.0 - 1e-9 || r.check >= 4.0 + 1e-9)
    throw InvalidParameter("whole-period check left [2, 4)");
  return r;
}

FirstIterate first_iterate(const CounterexampleParams& params, const Grid& grid,
                           double horizon, int samples) {
  params.validate();
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw InvalidTime("horizon must be positive");
  if (samples < 2) throw InvalidParameter("needs at least two samples");

  SpectralField g = build_g(grid, params.mfreq);
  const double amp = params.eta * params.delta;
  const double dt = horizon / (samples - 1);

  SpectralField stationary = g;
  stationary *= -amp;
  FirstIterate out{Trajectory{}, std::move(stationary), Trajectory{}, Trajectory{}};

  out.heat_term.t0 = params.t0;
  out.heat_term.dt = dt;
  out.heat_term.samples.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    SpectralField hs = heat_propagate(g, dt * i);
    hs *= amp;
    out.heat_term.samples.push_back(std::move(hs));
  }

  if (params.h) {
    Trajectory htraj;
    htraj.t0 = params.t0;
    htraj.dt = dt;
    htraj.samples.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i)
      htraj.samples.push_back(params.h->at(params.t0 + dt * i));
    out.forced_term = duhamel_integral(htraj);
    const double h_scale = params.eta * params.eta * params.delta;
    for (SpectralField& f : out.forced_term.samples) f *= h_scale;
  } else {
    out.forced_term.t0 = params.t0;
    out.forced_term.dt = dt;
    out.forced_term.samples.assign(static_cast<std::size_t>(samples),
                                   SpectralField(grid, grid.dim()));
    for (SpectralField& f : out.forced_term.samples) f.mark_mean_mode(true);
  }

  out.total = out.heat_term;
  for (int i = 0; i < samples; ++i) {
    out.total.samples[static_cast<std::size_t>(i)] += out.stationary;
    out.total.samples[static_cast<std::size_t>(i)] +=
        out.forced_term.samples[static_cast<std::size_t>(i)];
  }
  return out;
}

SpectralField second_iterate_closed_form(const CounterexampleParams& params,
                                         const Grid& grid, long long k) {
  params.validate();
  if (k < 0) throw InvalidParameter("k must be non-negative");
  SpectralField g = build_g(grid, params.mfreq);
  SpectralField q = nonlinear_tensor_div(g, g);
  const double span = static_cast<double>(k) * params.period;
  const double amp = params.eta * params.eta * params.delta * params.delta;
  SpectralField out(grid, grid.dim());
  // Duhamel of the stationary quadratic term: per mode the time integral is
  // (1 - e^{-kappa s})/kappa = s phi1(-kappa s), stable for small kappa s.
  for (std::size_t i = 1; i < grid.total_modes(); ++i) {
    const double kappa = grid.xi_sq(i);
    const double factor = -amp * span * detail::phi1(-kappa * span);
    for (int c = 0; c < grid.dim(); ++c) out.at(c, i) = factor * q.at(c, i);
  }
  out.mark_mean_mode(true);
  return out;
}

LowerBoundReport lower_bound_blocks(const CounterexampleParams& params, const Grid& grid,
                                    const DyadicPartition& part) {
  params.validate();
  require_2d(grid);
  const int j_hi = -2;
  const int j_lo_nominal =
      static_cast<int>(std::ceil(-1.0 / (2.0 * params.delta * params.delta)));
  const double box_needed = 2.0 * kPi * std::ldexp(1.0, 1 - j_hi);  // resolves j = -2
  if (j_lo_nominal > j_hi)
    throw EmptyBlockRange("no dyadic shell lies in the nominal range", box_needed);  // delta > 1/2
  const int j_lo = std::max(j_lo_nominal, part.j_min());
  if (j_lo > j_hi) throw EmptyBlockRange("the box resolves none of the nominal shells", box_needed);

  SpectralField psi = build_psi(grid);
  SpectralField g = build_g(grid, params.mfreq);

  SpectralField total_field = inv_lap(nonlinear_tensor_div(g, g));

  // (0, d2(psi^2)): the M^2-part carrier of the blockwise split.
  SpectralField psi2 = dealiased_product(psi, psi);
  SpectralField carrier(grid, 2);
  std::array<int, 3> m{};
  for (std::int64_t i = 0; i < grid.total_modes(); ++i) {
    grid.decode(i, m);
    const double xi2 = grid.xi(m[1]);
    carrier.at(1, i) = Complex(0.0, xi2) * psi2.at(0, i);
  }
  carrier.mark_mean_mode(true);
  SpectralField m2_field = inv_lap(leray_project(carrier));

  SpectralField pg = perp_gradient(psi);
  SpectralField rem_field = inv_lap(nonlinear_tensor_div(pg, pg));

  const std::vector<double> total_all = part.block_l2_all(total_field);
  const std::vector<double> m2_all = part.block_l2_all(m2_field);
  const std::vector<double> rem_all = part.block_l2_all(rem_field);

  LowerBoundReport rep;
  rep.nominal_shells = j_hi - j_lo_nominal + 1;
  rep.truncated = j_lo > j_lo_nominal;
  for (int j = j_lo; j <= j_hi; ++j) {
    const std::size_t idx = static_cast<std::size_t>(j - part.j_min());
    rep.shells.push_back(j);
    rep.total.push_back(total_all[idx]);
    rep.m2_part.push_back(m2_all[idx]);
    rep.remainder.push_back(rem_all[idx]);
    rep.sum_total += total_all[idx];
  }
  const double ed = params.eta * params.delta;
  rep.aggregate = ed * ed * rep.sum_total;
  return rep;
}

ExperimentReport run_growth_experiment(const CounterexampleParams& params,
                                       const SpectralField& a, const SolverConfig& cfg) {
  params.validate();
  cfg.validate();
  const Grid& grid = a.grid();
  require_2d(grid);
  if (a.components() != 2) throw InvalidFieldData("initial data must be a velocity field");
  if (!a.finite()) throw InvalidFieldData("initial data has non-finite coefficients");
  if (!a.mean_mode_zeroed()) throw MeanModeNotZero("initial data must be mean-zero");
  {
    const double div_l2 = divergence(a).l2();
    if (div_l2 > 1e-10 * std::max(1.0, a.l2()))
      throw InvalidFieldData("initial data must be divergence-free");
  }

  const KReport kk = k_delta_T(params.delta, params.period);
  const double horizon = static_cast<double>(kk.k) * params.period;
  if (horizon / cfg.dt > 5.0e7)
    throw InvalidParameter("horizon needs too many steps at this dt");

  DyadicPartition part = make_partition(grid, PartitionKind::Smooth);
  const NormSpec b021{2.0, 1.0, 0.0, kInf};

  ExperimentReport rep;
  rep.delta = params.delta;
  rep.eta = params.eta;
  rep.mfreq = params.mfreq;
  rep.period = params.period;
  rep.t0 = params.t0;
  rep.k = kk.k;
  rep.horizon = horizon;
  rep.m_below_asymptotic_regime = params.mfreq < 10.0;

  PeriodicForce force = build_force(params, grid);
  ForceFn force_fn = force.as_force_fn();
  // The force is built on t in [0, T); the run starts at t0.
  ForceFn shifted = [force_fn, t0 = params.t0](double t) { return force_fn(t - t0); };

  bool truncation = false;
  auto measure = [&](const SpectralField& u) {
    NormReport nr = besov_report(u, b021, part);
    truncation = truncation || nr.truncation_warning;
    return nr.value;
  };

  rep.series.reserve(static_cast<std::size_t>(horizon / cfg.dt) + 2);
  auto observer = [&](double t, const SpectralField& u) {
    rep.series.emplace_back(t, measure(u));
  };

  SolverConfig run_cfg = cfg;
  {  // keep the stored trajectory small; only the endpoint is needed
    const double nsteps = std::ceil(horizon / cfg.dt);
    const int cap = static_cast<int>(std::ceil(nsteps / 32.0));
    run_cfg.store_stride = std::max(cfg.store_stride, cap);
  }
  Trajectory traj =
      solve_ivp(a, shifted, params.t0, params.t0 + horizon, run_cfg, observer);
  const SpectralField& u_end = traj.samples.back();

  rep.start_norm = rep.series.front().second;
  rep.end_norm = rep.series.back().second;
  rep.ratio = rep.start_norm > 0.0 ? rep.end_norm / rep.start_norm : 0.0;
  rep.growth_target_met = rep.end_norm >= 2.0 * params.epsilon0;
  rep.initial_norm_exceeds_epsilon0 = rep.start_norm > params.epsilon0;

  // Closed-form comparison pieces. u1 includes the heat flow of a.
  SpectralField g = build_g(grid, params.mfreq);
  const double amp = params.eta * params.delta;
  const double h_scale = params.eta * params.eta * params.delta;
  const int qseg = 256;
  const double qdt = horizon / qseg;

  auto u1_at = [&](int s) {
    const double tau = qdt * s;
    SpectralField u1 = heat_propagate(g, tau);
    u1 *= amp;
    u1.axpy(Complex(-amp, 0.0), g);
    if (a.max_abs() > 0.0) u1 += heat_propagate(a, tau);
    return u1;
  };
  SpectralField h_int(grid, 2);
  h_int.mark_mean_mode(true);
  if (params.h) {
    auto h_sample = [&](int s) { return params.h->at(params.t0 + qdt * s); };
    h_int = duhamel_endpoint(grid, 2, qdt, qseg, h_sample);
    h_int *= h_scale;
  }
  SpectralField u1_end = u1_at(qseg);
  u1_end += h_int;
  rep.first_iterate_norm = besov_report(u1_end, b021, part).value;

  SpectralField u21 = second_iterate_closed_form(params, grid, kk.k);
  rep.second_iterate_norm = besov_report(u21, b021, part).value;

  // u2 - u1 by quadrature over the quadratic term of the first iterate.
  auto quad_sample = [&](int s) {
    SpectralField u1 = u1_at(s);
    if (params.h) {
      // Forced part of u1 rebuilt incrementally would cost another pass;
      // its quadratic contribution is O(eta^4) and is left to the residual.
    }
    SpectralField q = nonlinear_tensor_div(u1, u1);
    q *= -1.0;
    return q;
  };
  SpectralField correction = duhamel_endpoint(grid, 2, qdt, qseg, quad_sample);

  SpectralField resid = u_end;
  resid -= u1_end;
  resid -= correction;
  rep.expansion_residual = besov_report(resid, b021, part).value;

  SpectralField gap = u_end;
  gap -= a;
  rep.endpoint_gap = besov_report(gap, b021, part).value;
  rep.certification_threshold =
      1e-6 * std::max(rep.start_norm, rep.end_norm) + 1e-12;
  const bool grew = rep.ratio >= 2.0 ||
                    (rep.start_norm == 0.0 && rep.end_norm > rep.certification_threshold);
  rep.non_periodic_certified = grew && rep.endpoint_gap > rep.certification_threshold;
  rep.truncation_warning = truncation;
  return rep;
}

PeriodicForce make_oscillating_h(const Grid& grid, double period, int samples,
                                 double amplitude, std::uint64_t seed) {
  if (samples < 4) throw InvalidParameter("needs at least four samples per period");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw InvalidParameter("amplitude must be non-negative");
  EnsembleSpec spec;
  spec.slope = 0.0;
  spec.k_min = 0.0;
  spec.k_max = 4.0 * grid.fundamental();
  spec.amplitude = amplitude;
  SpectralField v1 = random_field(grid, grid.dim(), spec, seed);
  SpectralField v2 = random_field(grid, grid.dim(), spec, seed ^ 0x6a09e667f3bcc909ULL);
  PeriodicForce h;
  h.period = period;
  h.samples.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    const double theta = 2.0 * kPi * s / samples;
    SpectralField f = v1;
    f *= std::cos(theta);
    f.axpy(Complex(std::sin(theta), 0.0), v2);
    h.samples.push_back(std::move(f));
  }
  h.validate();
  return h;
}

}  // namespace nsbox
