#pragma once

#include <functional>

#include "nsbox/field.hpp"
#include "nsbox/trajectory.hpp"

namespace nsbox {

enum class Scheme { ETD1, ETD2 };

// Exponential time differencing at first (ETD1) or second (two-stage ETD2)
// order: the heat factor is exact per mode, only the forced and quadratic
// parts are approximated.
struct SolverConfig {
  double dt = 1e-2;
  Scheme scheme = Scheme::ETD2;
  double picard_tol = 1e-10;
  int picard_max_iter = 40;
  double period = 1.0;          // T for the time-periodic problem
  int samples_per_period = 32;  // M_t; periodic forcing is built on t_i = i T/M_t
  double picard_p = 2.0;        // Picard distance: L~inf(0,T; B^{dim/p-1}_{p,sigma})
  double picard_sigma = 1.0;
  int store_stride = 1;   // solve_ivp keeps every store_stride-th sample (and the last)
  bool linear_only = false;  // drop the quadratic term; heat-plus-force oracle
  void validate() const;
};

// Time-indexed force accessor; an empty function means no force.
using ForceFn = std::function<SpectralField(double)>;

// Everything on the right-hand side except the Laplacian.
using RhsFn = std::function<SpectralField(const SpectralField&, double)>;

// One ETD step du/dt = Lap u + rhs(u, t) with the heat factor and the phi
// weights tabulated per mode once per (grid, dt).
class EtdStepper {
 public:
  EtdStepper(const Grid& grid, double dt, Scheme scheme);
  SpectralField advance(const SpectralField& u, const RhsFn& rhs, double t) const;
  double dt() const { return dt_; }

 private:
  Grid grid_;
  double dt_;
  Scheme scheme_;
  std::vector<double> decay_;  // e^{-|xi|^2 dt}
  std::vector<double> w1_;     // dt * phi1(-|xi|^2 dt)
  std::vector<double> w2_;     // dt * phi2(-|xi|^2 dt)
};

// One scheme step of the projected equation from state u at time t. The
// state must be mean-zero.
SpectralField step_ivp(const SpectralField& u, const ForceFn& force, double t, double dt,
                       Scheme scheme, bool linear_only = false);

using StepObserver = std::function<void(double t, const SpectralField& u)>;

// Integrates du/dt = Lap u + P f - P div(u (x) u) from a over [t0, t1]. The
// step count is rounded up to a multiple of store_stride so the stored
// samples stay equispaced; the observer sees every accepted step including
// the initial state. Non-finite states raise BlowupDetected.
Trajectory solve_ivp(const SpectralField& a, const ForceFn& force, double t0, double t1,
                     const SolverConfig& cfg, const StepObserver& observer = nullptr);

// One period of a T-periodic forcing, sampled at i*T/M for i = 0..M-1.
// Samples must be divergence-free (1e-12 relative) with zero mean mode.
struct PeriodicForce {
  double period = 0.0;
  std::vector<SpectralField> samples;

  int sample_count() const { return static_cast<int>(samples.size()); }
  double sample_dt() const { return period / sample_count(); }
  const Grid& grid() const { return samples.front().grid(); }
  // Periodic linear interpolation in coefficient space.
  SpectralField at(double t) const;
  ForceFn as_force_fn() const;
  void validate() const;
};

PeriodicForce constant_force(const SpectralField& f, double period, int samples = 2);

}  // namespace nsbox
