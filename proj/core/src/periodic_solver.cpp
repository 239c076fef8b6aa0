#include "nsbox/periodic_solver.hpp"

#include <cmath>

#include "nsbox/errors.hpp"
#include "nsbox/operators.hpp"
#include "phi.hpp"

namespace nsbox {

namespace {

// Exact heat-flow integral over one piecewise-linear segment of length delta:
// int_a^b e^{-kappa (b-tau)} (F_a + (tau-a)/delta (F_b - F_a)) dtau
//   = delta [(phi1 - phi2) F_a + phi2 F_b] at z = -kappa delta.
struct SegmentWeights {
  double decay;  // e^{-kappa delta}
  double wa;     // delta (phi1 - phi2)
  double wb;     // delta phi2
};

SegmentWeights segment_weights(double kappa, double delta) {
  const double z = -kappa * delta;
  const double p1 = detail::phi1(z);
  const double p2 = detail::phi2(z);
  return {std::exp(z), delta * (p1 - p2), delta * p2};
}

Trajectory closed_zero_trajectory(const Grid& grid, double period, int segments) {
  Trajectory t;
  t.t0 = 0.0;
  t.dt = period / segments;
  t.samples.assign(static_cast<std::size_t>(segments) + 1,
                   SpectralField(grid, grid.dim()));
  for (SpectralField& s : t.samples) s.mark_mean_mode(true);
  return t;
}

Trajectory closed_force_trajectory(const PeriodicForce& f) {
  Trajectory t;
  t.t0 = 0.0;
  t.dt = f.sample_dt();
  t.samples = f.samples;
  t.samples.push_back(f.samples.front());
  return t;
}

double closed_norm(const Trajectory& u, const NormSpec& spec, const DyadicPartition& part) {
  return chemin_lerner_report(u, spec, part).value;
}

Trajectory trajectory_difference(const Trajectory& a, const Trajectory& b) {
  Trajectory d = a;
  for (std::size_t i = 0; i < d.samples.size(); ++i) d.samples[i] -= b.samples[i];
  return d;
}

}  // namespace

Trajectory duhamel_integral(const Trajectory& f) {
  f.validate();
  const Grid& g = f.grid();
  const std::size_t nmodes = g.total_modes();
  const int nseg = static_cast<int>(f.size()) - 1;

  Trajectory out = f;
  for (SpectralField& s : out.samples) {
    s = SpectralField(g, f.components());
    s.mark_mean_mode(true);
  }
  for (std::size_t i = 0; i < nmodes; ++i) {
    const SegmentWeights w = segment_weights(g.xi_sq(i), f.dt);
    for (int c = 0; c < f.components(); ++c) {
      Complex acc(0.0, 0.0);
      for (int s = 0; s < nseg; ++s) {
        acc = w.decay * acc + w.wa * f.samples[s].at(c, i) +
              w.wb * f.samples[s + 1].at(c, i);
        out.samples[s + 1].at(c, i) = acc;
      }
    }
  }
  for (SpectralField& s : out.samples) {
    bool zero = true;
    for (int c = 0; c < s.components(); ++c) zero = zero && s.at(c, 0) == Complex(0.0, 0.0);
    s.mark_mean_mode(zero);
  }
  return out;
}

Trajectory periodic_duhamel(const PeriodicForce& f) {
  const Grid& g = f.grid();
  const int m = f.sample_count();
  const double delta = f.sample_dt();
  const std::size_t nmodes = g.total_modes();

  Trajectory out = closed_zero_trajectory(g, f.period, m);
  for (const SpectralField& s : f.samples)
    for (int c = 0; c < s.components(); ++c)
      if (std::abs(s.at(c, 0)) > 1e-14 * std::max(1.0, s.max_abs()))
        throw MeanModeNotZero("periodic forcing must have a zero mean mode");
  auto fs = [&](int s) -> const SpectralField& { return f.samples[s % m]; };

  // Nonzero modes only: the mean mode of the forcing vanishes, and the
  // periodic problem leaves it zero.
  for (std::size_t i = 1; i < nmodes; ++i) {
    const double kappa = g.xi_sq(i);
    const SegmentWeights w = segment_weights(kappa, delta);
    const double prefactor = 1.0 / (-std::expm1(-kappa * f.period));
    for (int c = 0; c < g.dim(); ++c) {
      // One pass over the period gives the resummed value at t = 0.
      Complex acc(0.0, 0.0);
      for (int s = 0; s < m; ++s)
        acc = w.decay * acc + w.wa * fs(s).at(c, i) + w.wb * fs(s + 1).at(c, i);
      Complex u0 = prefactor * acc;
      out.samples[0].at(c, i) = u0;
      for (int s = 0; s < m; ++s) {
        u0 = w.decay * u0 + w.wa * fs(s).at(c, i) + w.wb * fs(s + 1).at(c, i);
        out.samples[s + 1].at(c, i) = u0;
      }
    }
  }
  return out;
}

PeriodicSolveResult solve_periodic(const PeriodicForce& f, const SolverConfig& cfg) {
  f.validate();
  cfg.validate();
  const Grid& grid = f.grid();
  const int m = f.sample_count();
  const double s_reg = grid.dim() / cfg.picard_p - 1.0;
  DyadicPartition part = make_partition(grid, PartitionKind::Smooth);
  NormSpec picard_spec{cfg.picard_p, cfg.picard_sigma, s_reg, kInf};

  auto apply_phi = [&](const Trajectory& u) {
    PeriodicForce g;
    g.period = f.period;
    g.samples.reserve(static_cast<std::size_t>(m));
    for (int s = 0; s < m; ++s) {
      SpectralField rhs = f.samples[static_cast<std::size_t>(s)];
      rhs -= nonlinear_tensor_div(u.samples[static_cast<std::size_t>(s)],
                                  u.samples[static_cast<std::size_t>(s)]);
      g.samples.push_back(std::move(rhs));
    }
    return periodic_duhamel(g);
  };

  PeriodicSolveResult res;
  Trajectory u = closed_zero_trajectory(grid, f.period, m);
  double prev_diff = -1.0;
  bool converged = false;
  for (int iter = 0; iter < cfg.picard_max_iter; ++iter) {
    Trajectory next = apply_phi(u);
    const double diff = closed_norm(trajectory_difference(next, u), picard_spec, part);
    if (prev_diff > 0.0) {
      const double ratio = diff / prev_diff;
      res.contraction_ratios.push_back(ratio);
      if (ratio >= 1.0) throw NoContraction("Picard iteration is not contracting", res.contraction_ratios);
    }
    u = std::move(next);
    res.iterations = iter + 1;
    res.final_difference = diff;
    prev_diff = diff;
    if (diff <= cfg.picard_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NoContraction("Picard iteration missed the tolerance within the budget", res.contraction_ratios);

  Trajectory phi_u = apply_phi(u);
  res.fixed_point_residual = closed_norm(trajectory_difference(phi_u, u), picard_spec, part);

  const SpectralField& first = u.samples.front();
  const SpectralField& last = u.samples.back();
  SpectralField gap = last;
  gap -= first;
  const double base = first.l2();
  res.periodicity_defect = base > 0.0 ? gap.l2() / base : gap.l2();

  res.solution_norm = closed_norm(u, picard_spec, part);
  NormSpec force_spec{cfg.picard_p, cfg.picard_sigma, s_reg - 2.0, kInf};
  res.force_norm = closed_norm(closed_force_trajectory(f), force_spec, part);
  res.apriori_ratio = res.force_norm > 0.0 ? res.solution_norm / res.force_norm : 0.0;
  res.solution = std::move(u);
  return res;
}

PerturbationResult solve_perturbation(const SpectralField& w0, const Trajectory& u_periodic,
                                      const SolverConfig& cfg, double horizon,
                                      const NormSpec& decay_norm) {
  cfg.validate();
  decay_norm.validate();
  u_periodic.validate();
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw InvalidTime("horizon must be positive");
  if (w0.grid() != u_periodic.grid())
    throw DimensionMismatch("perturbation and background grids differ");
  if (!w0.mean_mode_zeroed())
    throw MeanModeNotZero("perturbation must have a zero mean mode");

  const Grid& grid = w0.grid();
  const double period = u_periodic.t_end() - u_periodic.t0;
  const int nseg = static_cast<int>(u_periodic.size()) - 1;
  double bg_peak = 0.0;
  for (const SpectralField& s : u_periodic.samples) bg_peak = std::max(bg_peak, s.max_abs());
  const bool background_zero = bg_peak == 0.0;

  auto background_at = [&](double t) {
    double tau = std::fmod(t - u_periodic.t0, period);
    if (tau < 0.0) tau += period;
    double pos = tau / u_periodic.dt;
    int i0 = static_cast<int>(std::floor(pos));
    if (i0 > nseg - 1) i0 = nseg - 1;
    const double w = pos - i0;
    SpectralField out = u_periodic.samples[static_cast<std::size_t>(i0)];
    out *= 1.0 - w;
    out.axpy(Complex(w, 0.0), u_periodic.samples[static_cast<std::size_t>(i0) + 1]);
    return out;
  };

  auto rhs = [&](const SpectralField& w, double t) {
    SpectralField out = nonlinear_tensor_div(w, w);
    if (!background_zero) {
      SpectralField u = background_at(t);
      out += nonlinear_tensor_div(u, w);
      out += nonlinear_tensor_div(w, u);
    }
    out *= -1.0;
    out.mark_mean_mode(true);
    return out;
  };

  long long nsteps = static_cast<long long>(std::ceil(horizon / cfg.dt - 1e-9));
  if (nsteps < 1) nsteps = 1;
  const long long stride = cfg.store_stride;
  nsteps = ((nsteps + stride - 1) / stride) * stride;
  const double dt = horizon / static_cast<double>(nsteps);
  EtdStepper stepper(grid, dt, cfg.scheme);
  DyadicPartition part = make_partition(grid, PartitionKind::Smooth);

  PerturbationResult res;
  res.w.t0 = 0.0;
  res.w.dt = dt * static_cast<double>(stride);
  res.w.samples.push_back(w0);
  res.series.emplace_back(0.0, besov_report(w0, decay_norm, part).value);

  SpectralField w = w0;
  for (long long i = 0; i < nsteps; ++i) {
    const double t = dt * static_cast<double>(i);
    w = stepper.advance(w, rhs, t);
    if (!w.finite()) throw BlowupDetected("state became non-finite", t + dt);
    res.series.emplace_back(t + dt, besov_report(w, decay_norm, part).value);
    if ((i + 1) % stride == 0) res.w.samples.push_back(w);
  }
  res.w.validate();
  return res;
}

double trajectory_agreement(const Trajectory& a, const Trajectory& b, const NormSpec& spec,
                            const DyadicPartition& part) {
  a.validate();
  b.validate();
  if (a.grid() != b.grid() || a.size() != b.size())
    throw DimensionMismatch("trajectories are not comparable");
  if (std::abs(a.t0 - b.t0) > 1e-9 * std::max(1.0, std::abs(a.t0)) ||
      std::abs(a.dt - b.dt) > 1e-9 * a.dt)
    throw InvalidTime("trajectories use different time meshes");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    SpectralField d = a.samples[i];
    d -= b.samples[i];
    worst = std::max(worst, besov_report(d, spec, part).value);
  }
  return worst;
}

PeriodicForce random_periodic_force(const Grid& grid, double period, int samples,
                                    const EnsembleSpec& spec, double wobble,
                                    std::uint64_t seed) {
  if (samples < 1) throw InvalidParameter("needs at least one sample");
  if (!(wobble >= 0.0) || !std::isfinite(wobble))
    throw InvalidParameter("wobble must be non-negative");
  SpectralField base = random_field(grid, grid.dim(), spec, seed);
  SpectralField ripple = random_field(grid, grid.dim(), spec, seed ^ 0x9e3779b97f4a7c15ULL);
  PeriodicForce f;
  f.period = period;
  f.samples.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    const double phase = std::cos(2.0 * kPi * s / samples);
    SpectralField sample = base;
    sample.axpy(Complex(wobble * phase, 0.0), ripple);
    f.samples.push_back(std::move(sample));
  }
  f.validate();
  return f;
}

}  // namespace nsbox
