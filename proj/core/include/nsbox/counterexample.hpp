#pragma once

#include <cstdint>
#include <optional>

#include "nsbox/dyadic.hpp"
#include "nsbox/periodic_solver.hpp"

namespace nsbox {

// Parameters of the slow-growth forcing built around the modulated bump
// g = perp_grad(psi(x) cos(M x1)) on a 2D box. The force is
// f(t) = eta delta Lap g + eta^2 delta h(t) with h an optional admissible
// T-periodic part.
struct CounterexampleParams {
  double delta = 0.5;    // in (0, delta_cap]
  double eta = 0.25;     // in (0, 1/2]
  double mfreq = 12.0;   // carrier frequency M; flagged below 10
  double period = 1.0;   // T, constrained by T <= 2^{1/delta^2}
  double t0 = 0.0;
  double delta_cap = 0.6;   // admissible ceiling for delta
  double epsilon0 = 0.05;   // smallness scale; growth target is 2 epsilon0
  std::optional<PeriodicForce> h;  // defaults to zero

  void validate() const;
};

// Radial bump profile: psi_hat = 1 on |xi| <= 1, 0 on |xi| >= 2, smooth and
// monotone in between, with coefficients normalized by 1/L^2 so box size
// changes leave the physical bump and its norms fixed.
SpectralField build_psi(const Grid& grid);

// g = perp_grad(psi cos(M x1)); divergence-free with spectrum in the annulus
// M-2 <= |xi| <= M+2. M must sit on the frequency lattice.
SpectralField build_g(const Grid& grid, double mfreq);

// f(t) = eta delta Lap g + eta^2 delta h(t), sampled over one period.
PeriodicForce build_force(const CounterexampleParams& params, const Grid& grid);

struct KReport {
  long long k = 0;
  double check = 0.0;  // (k T)^{delta^2}, always in [2, 4)
};

// The unique integer k with 2^{1/delta^2}/T <= k < 2^{1/delta^2}/T + 1.
KReport k_delta_T(double delta, double period);

// First Picard iterate from a = 0 under f with h-part, split into its three
// closed-form pieces: u1(t) = stationary + heat_term(t) + forced_term(t),
//   stationary    = -eta delta g
//   heat_term(t)  =  eta delta e^{(t-t0) Lap} g
//   forced_term(t) = eta^2 delta int_{t0}^t e^{(t-tau) Lap} h(tau) dtau.
struct FirstIterate {
  Trajectory total;
  SpectralField stationary;
  Trajectory heat_term;
  Trajectory forced_term;
};

FirstIterate first_iterate(const CounterexampleParams& params, const Grid& grid,
                           double horizon, int samples);

// The g-part of the second iterate after k whole periods,
//   u21 = -eta^2 delta^2 (1 - e^{k T Lap}) (-Lap)^{-1} P div(g (x) g),
// evaluated as a single spectral multiplier.
SpectralField second_iterate_closed_form(const CounterexampleParams& params,
                                         const Grid& grid, long long k);

// Per-shell L2 norms of (-Lap)^{-1} P div(g (x) g) over the low range
// max(-1/(2 delta^2), resolvable) <= j <= -2, with the blockwise split
//   Delta_j div(g (x) g) = (M^2/2) Delta_j (0, d2(psi^2))^T
//                        + (1/2) Delta_j div(perp_grad psi (x) perp_grad psi)
// which is exact there because the 2M-modulated terms cannot reach those
// shells.
struct LowerBoundReport {
  std::vector<int> shells;
  std::vector<double> total;      // ||Delta_j (-Lap)^{-1} P div(g(x)g)||_L2
  std::vector<double> m2_part;    // ||Delta_j (-Lap)^{-1} P (0, d2(psi^2))||_L2
  std::vector<double> remainder;  // ||Delta_j (-Lap)^{-1} P div(pg psi (x) pg psi)||_L2
  double sum_total = 0.0;
  double aggregate = 0.0;  // eta^2 delta^2 * sum_total
  int nominal_shells = 0;  // count of j in [-1/(2 delta^2), -2]
  bool truncated = false;  // resolvable range missed part of the nominal one
};

LowerBoundReport lower_bound_blocks(const CounterexampleParams& params, const Grid& grid,
                                    const DyadicPartition& part);

struct ExperimentReport {
  double delta = 0.0, eta = 0.0, mfreq = 0.0, period = 0.0, t0 = 0.0;
  long long k = 0;
  double horizon = 0.0;  // k T
  double start_norm = 0.0;
  double end_norm = 0.0;
  double ratio = 0.0;  // end/start, 0 when start is 0
  std::vector<std::pair<double, double>> series;  // (t, B^0_{2,1} norm)
  double first_iterate_norm = 0.0;    // ||u1(end)||
  double second_iterate_norm = 0.0;   // ||u21(end)||
  double expansion_residual = 0.0;    // ||u(end) - u1(end) - (u2-u1)(end)||
  double endpoint_gap = 0.0;          // ||u(t0) - u(t0 + k T)||
  double certification_threshold = 0.0;
  bool non_periodic_certified = false;
  bool growth_target_met = false;  // end_norm >= 2 epsilon0
  bool m_below_asymptotic_regime = false;  // M < 10, dominance margins not vouched for
  bool initial_norm_exceeds_epsilon0 = false;
  bool truncation_warning = false;
};

// Integrates the full nonlinear problem under build_force over k whole
// periods from a, tracking the B^0_{2,1} norm each step and comparing the
// endpoint against the closed-form iterates.
ExperimentReport run_growth_experiment(const CounterexampleParams& params,
                                       const SpectralField& a, const SolverConfig& cfg);

// Admissible oscillating h-part: amplitude * (cos(2 pi t/T) v1 + sin(2 pi t/T) v2)
// with v1, v2 random divergence-free low-frequency fields.
PeriodicForce make_oscillating_h(const Grid& grid, double period, int samples,
                                 double amplitude, std::uint64_t seed);

}  // namespace nsbox
