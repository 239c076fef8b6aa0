#include <cmath>
#include <vector>

#include "doctest.h"
#include "nsbox/errors.hpp"
#include "nsbox/operators.hpp"
#include "nsbox/solver.hpp"
#include "support.hpp"

using namespace nsbox;
using testsup::rel;

namespace {

// A shear state (0, A cos(k x1)) keeps div(u (x) u) identically zero, so the
// solver must reproduce the per-mode linear ODE exactly.
double final_error(const Trajectory& traj, const SpectralField& expect) {
  SpectralField d = traj.samples.back();
  d.axpy(-1.0, expect);
  return d.l2() / std::max(expect.l2(), 1e-300);
}

}  // namespace

TEST_CASE("free shear decay follows the heat flow to roundoff") {
  Grid g(2, 32, 2.0 * M_PI);
  auto u0 = testsup::shear_mode(g, 3, 0.8);
  for (Scheme scheme : {Scheme::ETD1, Scheme::ETD2}) {
    SolverConfig cfg;
    cfg.dt = 0.01;
    cfg.scheme = scheme;
    auto traj = solve_ivp(u0, nullptr, 0.0, 0.5, cfg);
    CHECK(final_error(traj, heat_propagate(u0, 0.5)) < 1e-12);
    CHECK(traj.size() == 51);
    CHECK(traj.dt == doctest::Approx(0.01));
  }
}

TEST_CASE("constant shear force is integrated without time error") {
  Grid g(2, 32, 2.0 * M_PI);
  auto f = testsup::shear_mode(g, 2, 0.6);
  auto force = [&](double) { return f; };
  double kappa = 4.0;
  double t1 = 0.7;
  // a(t) = (1 - e^{-kappa t}) / kappa * f per coefficient, from rest.
  auto expect = testsup::shear_mode(g, 2, 0.6 * (1.0 - std::exp(-kappa * t1)) / kappa);
  SpectralField zero(g, 2);
  for (Scheme scheme : {Scheme::ETD1, Scheme::ETD2}) {
    SolverConfig cfg;
    cfg.dt = 0.007;
    cfg.scheme = scheme;
    auto traj = solve_ivp(zero, force, 0.0, t1, cfg);
    CHECK(final_error(traj, expect) < 1e-12);
  }
}

TEST_CASE("scheme order against an oscillating force") {
  Grid g(2, 32, 2.0 * M_PI);
  double kappa = 4.0, omega = 3.0, amp = 0.5, t1 = 1.0;
  auto f0 = testsup::shear_mode(g, 2, amp);
  auto force = [&](double t) {
    SpectralField f = f0;
    f *= std::cos(omega * t);
    return f;
  };
  double shape = (kappa * std::cos(omega * t1) + omega * std::sin(omega * t1) -
                  kappa * std::exp(-kappa * t1)) /
                 (kappa * kappa + omega * omega);
  auto expect = testsup::shear_mode(g, 2, amp * shape);
  SpectralField zero(g, 2);

  auto errors = [&](Scheme scheme) {
    std::vector<double> out;
    for (double dt : {0.02, 0.01, 0.005, 0.0025}) {
      SolverConfig cfg;
      cfg.dt = dt;
      cfg.scheme = scheme;
      auto traj = solve_ivp(zero, force, 0.0, t1, cfg);
      out.push_back(final_error(traj, expect));
    }
    return out;
  };

  auto e2 = errors(Scheme::ETD2);
  for (std::size_t i = 0; i + 1 < e2.size(); ++i) {
    double ratio = e2[i] / e2[i + 1];
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
  }
  auto e1 = errors(Scheme::ETD1);
  for (std::size_t i = 0; i + 1 < e1.size(); ++i) {
    double ratio = e1[i] / e1[i + 1];
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.5);
  }
}

TEST_CASE("store stride keeps samples equispaced and the observer sees all steps") {
  Grid g(2, 32, 2.0 * M_PI);
  auto u0 = testsup::random_velocity(g, 6, 0.1);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.store_stride = 7;
  int calls = 0;
  double last_t = -1.0;
  auto traj = solve_ivp(u0, nullptr, 0.0, 1.0, cfg, [&](double t, const SpectralField&) {
    ++calls;
    last_t = t;
  });
  // 100 raw steps round up to 105 so the stride divides them evenly.
  CHECK(calls == 106);
  CHECK(last_t == doctest::Approx(1.0));
  CHECK(traj.size() == 16);
  CHECK(traj.dt == doctest::Approx(7.0 / 105.0));
  CHECK(traj.t_end() == doctest::Approx(1.0));
}

TEST_CASE("non-finite states stop the march") {
  Grid g(2, 32, 2.0 * M_PI);
  auto u0 = testsup::random_velocity(g, 1, 1e200);
  SolverConfig cfg;
  cfg.dt = 0.01;
  CHECK_THROWS_AS(solve_ivp(u0, nullptr, 0.0, 0.1, cfg), BlowupDetected);
}

TEST_CASE("solver input validation") {
  Grid g(2, 32, 2.0 * M_PI);
  auto u0 = testsup::random_velocity(g, 2, 0.1);
  SolverConfig cfg;
  CHECK_THROWS_AS(solve_ivp(u0, nullptr, 1.0, 0.5, cfg), InvalidTime);
  SolverConfig bad = cfg;
  bad.dt = -1.0;
  CHECK_THROWS_AS(solve_ivp(u0, nullptr, 0.0, 1.0, bad), InvalidParameter);
  bad = cfg;
  bad.store_stride = 0;
  CHECK_THROWS_AS(solve_ivp(u0, nullptr, 0.0, 1.0, bad), InvalidParameter);

  SpectralField with_mean(g, 2);
  with_mean.at(0, 0) = Complex(1.0, 0.0);
  with_mean.mark_mean_mode(false);
  CHECK_THROWS_AS(solve_ivp(with_mean, nullptr, 0.0, 1.0, cfg), MeanModeNotZero);

  // Forces must match the state layout.
  Grid other(2, 64, 2.0 * M_PI);
  auto mismatched = [&](double) { return testsup::random_velocity(other, 3, 0.1); };
  CHECK_THROWS_AS(solve_ivp(u0, mismatched, 0.0, 0.05, cfg), DimensionMismatch);

  // Periodic force samples must be solenoidal velocities with zero mean.
  auto skew = random_field(g, 2, [] {
    EnsembleSpec e;
    e.divergence_free = false;
    return e;
  }(), 9);
  CHECK_THROWS_AS(constant_force(skew, 1.0), InvalidFieldData);
}

TEST_CASE("linear-only stepping drops the quadratic term") {
  Grid g(2, 48, 2.0 * M_PI);
  auto u0 = testsup::random_velocity(g, 11, 0.8);
  SolverConfig cfg;
  cfg.dt = 0.005;
  cfg.linear_only = true;
  auto traj = solve_ivp(u0, nullptr, 0.0, 0.3, cfg);
  CHECK(final_error(traj, heat_propagate(u0, 0.3)) < 1e-12);

  cfg.linear_only = false;
  auto full = solve_ivp(u0, nullptr, 0.0, 0.3, cfg);
  CHECK(final_error(full, heat_propagate(u0, 0.3)) > 1e-6);
}
