#include "nsbox/solver.hpp"

#include <cmath>
#include <memory>

#include "nsbox/errors.hpp"
#include "nsbox/operators.hpp"
#include "phi.hpp"

namespace nsbox {

namespace {

// P f(t) - P div(u (x) u); the zero mode is annihilated by the projection.
SpectralField ns_rhs(const SpectralField& u, const ForceFn& force, double t,
                     bool linear_only) {
  SpectralField out(u.grid(), u.components());
  out.mark_mean_mode(true);
  if (force) {
    SpectralField f = force(t);
    if (f.grid() != u.grid() || f.components() != u.components())
      throw DimensionMismatch("force sample does not match the state layout");
    out += leray_project(f);
  }
  if (!linear_only) {
    SpectralField q = nonlinear_tensor_div(u, u);
    out -= q;
  }
  return out;
}

bool all_finite(const SpectralField& u) {
  for (int c = 0; c < u.components(); ++c)
    for (std::size_t i = 0; i < u.grid().total_modes(); ++i) {
      const Complex v = u.at(c, i);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  return true;
}

}  // namespace

EtdStepper::EtdStepper(const Grid& grid, double dt, Scheme scheme)
    : grid_(grid), dt_(dt), scheme_(scheme) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidTime("dt must be positive");
  const std::size_t n = grid.total_modes();
  decay_.resize(n);
  w1_.resize(n);
  w2_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = -grid.xi_sq(i) * dt;
    decay_[i] = std::exp(z);
    w1_[i] = dt * detail::phi1(z);
    w2_[i] = dt * detail::phi2(z);
  }
}

SpectralField EtdStepper::advance(const SpectralField& u, const RhsFn& rhs,
                                 double t) const {
  if (u.grid() != grid_) throw DimensionMismatch("state grid does not match the stepper");
  const std::size_t n = grid_.total_modes();
  SpectralField n1 = rhs(u, t);
  SpectralField stage(grid_, u.components());
  for (int c = 0; c < u.components(); ++c)
    for (std::size_t i = 0; i < n; ++i)
      stage.at(c, i) = decay_[i] * u.at(c, i) + w1_[i] * n1.at(c, i);
  stage.mark_mean_mode(u.mean_mode_zeroed() && n1.mean_mode_zeroed());
  if (scheme_ == Scheme::ETD1) return stage;
  SpectralField n2 = rhs(stage, t + dt_);
  for (int c = 0; c < u.components(); ++c)
    for (std::size_t i = 0; i < n; ++i)
      stage.at(c, i) += w2_[i] * (n2.at(c, i) - n1.at(c, i));
  return stage;
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be positive");
  if (!(picard_tol > 0.0)) throw InvalidParameter("picard_tol must be positive");
  if (picard_max_iter < 1) throw InvalidParameter("picard_max_iter must be >= 1");
  if (!(period > 0.0) || !std::isfinite(period))
    throw InvalidParameter("period must be positive");
  if (samples_per_period < 1) throw InvalidParameter("samples_per_period must be >= 1");
  if (!(picard_p >= 1.0)) throw InvalidParameter("picard_p must be >= 1");
  if (!(picard_sigma >= 1.0)) throw InvalidParameter("picard_sigma must be >= 1");
  if (store_stride < 1) throw InvalidParameter("store_stride must be >= 1");
}

SpectralField step_ivp(const SpectralField& u, const ForceFn& force, double t, double dt,
                       Scheme scheme, bool linear_only) {
  EtdStepper stepper(u.grid(), dt, scheme);
  auto rhs = [&](const SpectralField& v, double s) {
    return ns_rhs(v, force, s, linear_only);
  };
  return stepper.advance(u, rhs, t);
}

Trajectory solve_ivp(const SpectralField& a, const ForceFn& force, double t0, double t1,
                     const SolverConfig& cfg, const StepObserver& observer) {
  cfg.validate();
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0))
    throw InvalidTime("needs t1 > t0");
  if (!a.mean_mode_zeroed())
    throw MeanModeNotZero("initial data must have a zero mean mode");
  const double span = t1 - t0;
  long long nsteps = static_cast<long long>(std::ceil(span / cfg.dt - 1e-9));
  if (nsteps < 1) nsteps = 1;
  const long long stride = cfg.store_stride;
  nsteps = ((nsteps + stride - 1) / stride) * stride;
  const double dt = span / static_cast<double>(nsteps);

  EtdStepper stepper(a.grid(), dt, cfg.scheme);
  auto rhs = [&](const SpectralField& v, double s) {
    return ns_rhs(v, force, s, cfg.linear_only);
  };

  Trajectory traj;
  traj.t0 = t0;
  traj.dt = dt * static_cast<double>(stride);
  traj.samples.reserve(static_cast<std::size_t>(nsteps / stride) + 1);
  traj.samples.push_back(a);

  SpectralField u = a;
  if (observer) observer(t0, u);
  for (long long i = 0; i < nsteps; ++i) {
    const double t = t0 + dt * static_cast<double>(i);
    u = stepper.advance(u, rhs, t);
    if (!all_finite(u)) throw BlowupDetected("state became non-finite", t + dt);
    if (observer) observer(t + dt, u);
    if ((i + 1) % stride == 0) traj.samples.push_back(u);
  }
  traj.validate();
  return traj;
}

SpectralField PeriodicForce::at(double t) const {
  const int m = sample_count();
  const double delta = sample_dt();
  const double s = t / delta;
  const double base = std::floor(s);
  const double w = s - base;
  long long i0 = static_cast<long long>(base) % m;
  if (i0 < 0) i0 += m;
  const std::size_t ia = static_cast<std::size_t>(i0);
  const std::size_t ib = static_cast<std::size_t>((i0 + 1) % m);
  SpectralField out = samples[ia];
  out *= 1.0 - w;
  out.axpy(Complex(w, 0.0), samples[ib]);
  out.mark_mean_mode(samples[ia].mean_mode_zeroed() && samples[ib].mean_mode_zeroed());
  return out;
}

ForceFn PeriodicForce::as_force_fn() const {
  auto self = std::make_shared<PeriodicForce>(*this);
  return [self](double t) { return self->at(t); };
}

void PeriodicForce::validate() const {
  if (!(period > 0.0) || !std::isfinite(period))
    throw InvalidParameter("force period must be positive");
  if (samples.empty()) throw InvalidParameter("force needs at least one sample");
  const Grid& g = samples.front().grid();
  for (const SpectralField& f : samples) {
    if (f.grid() != g) throw DimensionMismatch("force samples live on different grids");
    if (f.components() != g.dim()) throw InvalidFieldData("force samples must be velocities");
    if (!f.finite()) throw InvalidFieldData("force sample has non-finite coefficients");
    double mean = 0.0;
    for (int c = 0; c < f.components(); ++c) mean = std::max(mean, std::abs(f.at(c, 0)));
    if (mean > 1e-14 * std::max(1.0, f.max_abs()))
      throw MeanModeNotZero("force samples must have zero mean mode");
    // Relative to the gradient scale so plain amplitude changes cancel out.
    SpectralField div = divergence(f);
    double grad_sq = 0.0;
    for (int c = 0; c < f.components(); ++c)
      for (std::size_t i = 0; i < g.total_modes(); ++i)
        grad_sq += g.xi_sq(i) * std::norm(f.at(c, i));
    const double div_l2 = div.l2();
    const double grad_l2 = std::sqrt(g.volume() * grad_sq);
    if (grad_l2 > 0.0 && div_l2 > 1e-12 * grad_l2)
      throw InvalidFieldData("force samples must be divergence-free");
  }
}

PeriodicForce constant_force(const SpectralField& f, double period, int samples) {
  if (samples < 1) throw InvalidParameter("needs at least one sample");
  PeriodicForce out;
  out.period = period;
  out.samples.assign(static_cast<std::size_t>(samples), f);
  out.validate();
  return out;
}

}  // namespace nsbox
