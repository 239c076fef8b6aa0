#include <cmath>

#include "doctest.h"
#include "nsbox/errors.hpp"
#include "nsbox/operators.hpp"
#include "nsbox/periodic_solver.hpp"
#include "support.hpp"

using namespace nsbox;
using testsup::rel;

namespace {

double endpoint_gap(const SpectralField& a, const SpectralField& b) {
  SpectralField d = a;
  d.axpy(-1.0, b);
  return d.l2() / std::max(b.l2(), 1e-300);
}

PeriodicForce small_force(const Grid& g, double amplitude, std::uint64_t seed,
                          int samples = 32) {
  EnsembleSpec ens;
  ens.amplitude = amplitude;
  ens.k_max = 6.0;
  return random_periodic_force(g, 1.0, samples, ens, 0.3, seed);
}

}  // namespace

TEST_CASE("periodic heat inversion is the long-time limit of the transient one") {
  Grid g(2, 32, 2.0 * M_PI);
  auto f = small_force(g, 0.5, 3, 16);
  auto up = periodic_duhamel(f);
  CHECK(up.size() == 17);
  CHECK(endpoint_gap(up.samples.back(), up.samples.front()) < 1e-13);

  // Tile 40 periods and integrate from rest: the transient has died to
  // machine precision because every mode decays at least like e^{-t}.
  int periods = 40;
  Trajectory tiled;
  tiled.t0 = 0.0;
  tiled.dt = f.sample_dt();
  for (int i = 0; i < periods * f.sample_count() + 1; ++i)
    tiled.samples.push_back(f.samples[i % f.sample_count()]);
  auto v = duhamel_integral(tiled);
  CHECK(endpoint_gap(v.samples.back(), up.samples.front()) < 1e-12);
}

TEST_CASE("constant forcing gives the stationary inverse-laplacian profile") {
  Grid g(2, 32, 2.0 * M_PI);
  EnsembleSpec ens;
  ens.amplitude = 0.05;
  auto f = random_field(g, 2, ens, 12);
  auto up = periodic_duhamel(constant_force(f, 0.8, 8));
  SpectralField expect = inverse_laplacian(f);
  expect *= -1.0;
  for (const auto& s : up.samples) CHECK(endpoint_gap(s, expect) < 1e-12);
}

TEST_CASE("zero forcing fixes the zero solution immediately") {
  Grid g(2, 32, 2.0 * M_PI);
  SpectralField zero(g, 2);
  SolverConfig cfg;
  auto res = solve_periodic(constant_force(zero, 1.0), cfg);
  CHECK(res.iterations == 1);
  CHECK(res.final_difference == 0.0);
  CHECK(res.fixed_point_residual == 0.0);
  CHECK(res.periodicity_defect == 0.0);
  CHECK(res.solution_norm == 0.0);
  CHECK(res.apriori_ratio == 0.0);
  CHECK(res.contraction_ratios.empty());
}

TEST_CASE("small forcing contracts to a time-periodic mild solution") {
  Grid g(2, 48, 2.0 * M_PI);
  auto f = small_force(g, 0.02, 5);
  SolverConfig cfg;
  cfg.picard_tol = 1e-12;
  auto res = solve_periodic(f, cfg);

  for (double r : res.contraction_ratios) CHECK(r < 1.0);
  CHECK(res.fixed_point_residual <= 1e-10);
  CHECK(res.periodicity_defect <= 1e-10);
  CHECK(res.solution_norm > 0.0);
  CHECK(res.apriori_ratio > 0.0);
  CHECK(res.solution.size() == 33);

  // Independent cross-check: march the initial slice through one period with
  // the exponential stepper and land on the stored endpoint. The two
  // discretizations only share the true solution.
  SolverConfig march;
  march.dt = 1.0 / 512.0;
  auto traj = solve_ivp(res.solution.samples.front(), f.as_force_fn(), 0.0, 1.0, march);
  CHECK(endpoint_gap(traj.samples.back(), res.solution.samples.back()) < 5e-3);
}

TEST_CASE("oversized forcing raises the contraction failure with history") {
  Grid g(2, 32, 2.0 * M_PI);
  auto f = small_force(g, 50.0, 5, 16);
  SolverConfig cfg;
  cfg.picard_max_iter = 25;
  bool threw = false;
  try {
    solve_periodic(f, cfg);
  } catch (const NoContraction& e) {
    threw = true;
    CHECK(!e.ratios.empty());
    CHECK(e.ratios.back() >= 1.0);
  }
  CHECK(threw);
}

TEST_CASE("perturbations of the zero background just diffuse") {
  Grid g(2, 32, 2.0 * M_PI);
  Trajectory bg;
  bg.t0 = 0.0;
  bg.dt = 0.5;
  bg.samples.assign(3, SpectralField(g, 2));
  for (auto& s : bg.samples) s.mark_mean_mode(true);

  SolverConfig cfg;
  cfg.dt = 0.01;
  NormSpec spec{2.0, 1.0, 0.0, kInf};

  SpectralField zero(g, 2);
  auto still = solve_perturbation(zero, bg, cfg, 1.0, spec);
  for (const auto& [t, v] : still.series) CHECK(v == 0.0);

  EnsembleSpec ens;
  ens.amplitude = 0.01;
  ens.k_min = 1.0;
  ens.k_max = 4.0;
  auto w0 = random_field(g, 2, ens, 21);
  auto res = solve_perturbation(w0, bg, cfg, 2.0, spec);
  double first = res.series.front().second;
  double last = res.series.back().second;
  CHECK(last < first * std::exp(-2.0) * 1.1);
  for (std::size_t i = 1; i < res.series.size(); ++i)
    CHECK(res.series[i].second <= res.series[i - 1].second * (1.0 + 1e-10));

  CHECK_THROWS_AS(solve_perturbation(w0, bg, cfg, -1.0, spec), InvalidTime);
  Grid other(2, 64, 2.0 * M_PI);
  CHECK_THROWS_AS(
      solve_perturbation(testsup::random_velocity(other, 1, 0.01), bg, cfg, 1.0, spec),
      DimensionMismatch);
}

TEST_CASE("trajectory agreement vanishes only on identical trajectories") {
  Grid g(2, 32, 2.0 * M_PI);
  auto part = make_partition(g);
  NormSpec spec{2.0, 1.0, 0.0, kInf};
  auto f = small_force(g, 0.1, 9, 8);
  auto a = periodic_duhamel(f);
  CHECK(trajectory_agreement(a, a, spec, part) == 0.0);
  auto b = a;
  b.samples[3].at(1, 5) += Complex(1e-3, 0.0);
  CHECK(trajectory_agreement(a, b, spec, part) > 1e-5);
}
