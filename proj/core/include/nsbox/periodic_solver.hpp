#pragma once

#include "nsbox/norms.hpp"
#include "nsbox/random_fields.hpp"
#include "nsbox/solver.hpp"

namespace nsbox {

// Heat-flow integral int_{t0}^{t} e^{(t-tau) Lap} f(tau) dtau at the sample
// times of f, starting from zero. The integrand is treated as piecewise
// linear in coefficient space per mode, so the quadrature is exact for
// piecewise-linear forcing.
Trajectory duhamel_integral(const Trajectory& f);

// The unique mean-zero T-periodic solution of du/dt = Lap u + f for the
// sampled periodic forcing, returned as a closed trajectory on [0, T]
// (sample_count + 1 samples, first and last agree up to roundoff).
Trajectory periodic_duhamel(const PeriodicForce& f);

struct PeriodicSolveResult {
  Trajectory solution;                     // closed trajectory over one period
  int iterations = 0;                      // Picard evaluations performed
  std::vector<double> contraction_ratios;  // successive-difference ratios
  double final_difference = 0.0;           // last Picard increment, solver norm
  double fixed_point_residual = 0.0;       // ||Phi[u] - u|| from one extra evaluation
  double periodicity_defect = 0.0;         // relative L2 gap between endpoints
  double solution_norm = 0.0;              // L~inf B^{dim/p-1}_{p,sigma} of u
  double force_norm = 0.0;                 // L~inf B^{dim/p-3}_{p,sigma} of f
  double apriori_ratio = 0.0;              // solution_norm / force_norm
};

// Picard iteration u_{k+1} = Phi[u_k] from u_0 = 0, where Phi composes the
// forcing with the quadratic term and the periodic heat inversion above.
// Divergence of the iteration raises NoContraction.
PeriodicSolveResult solve_periodic(const PeriodicForce& f, const SolverConfig& cfg);

struct PerturbationResult {
  Trajectory w;                                   // perturbation trajectory
  std::vector<std::pair<double, double>> series;  // (t, Besov norm) every step
};

// Evolves dw/dt = Lap w - P div(u w + w u + w w) against the frozen periodic
// background u, recording the requested Besov norm of w at every step.
PerturbationResult solve_perturbation(const SpectralField& w0, const Trajectory& u_periodic,
                                      const SolverConfig& cfg, double horizon,
                                      const NormSpec& decay_norm);

// Largest per-sample Besov distance between two trajectories on the same
// time mesh.
double trajectory_agreement(const Trajectory& a, const Trajectory& b, const NormSpec& spec,
                            const DyadicPartition& part);

// Random T-periodic forcing f(t) = f0 + wobble * cos(2 pi t / T) f1 with both
// fields drawn from the ensemble; sampled on the periodic mesh.
PeriodicForce random_periodic_force(const Grid& grid, double period, int samples,
                                    const EnsembleSpec& spec, double wobble,
                                    std::uint64_t seed);

}  // namespace nsbox
