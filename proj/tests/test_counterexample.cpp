#include <cmath>

#include "doctest.h"
#include "nsbox/counterexample.hpp"
#include "nsbox/errors.hpp"
#include "nsbox/operators.hpp"
#include "nsbox/paraproduct.hpp"
#include "support.hpp"

using namespace nsbox;
using testsup::rel;

namespace {

double field_gap(const SpectralField& a, const SpectralField& b) {
  SpectralField d = a;
  d.axpy(-1.0, b);
  return d.l2() / std::max(b.l2(), 1e-300);
}

Grid wide_grid() { return Grid(2, 256, 16.0 * M_PI); }

CounterexampleParams base_params() {
  CounterexampleParams p;
  p.delta = 0.5;
  p.eta = 0.25;
  p.mfreq = 8.0;
  p.period = 1.0;
  return p;
}

}  // namespace

TEST_CASE("bump profile hits its radial cutoff values") {
  Grid g(2, 128, 16.0 * M_PI);
  auto psi = build_psi(g);
  CHECK(psi.components() == 1);
  double inv_l2 = 1.0 / (g.box_length() * g.box_length());

  auto coeff = [&](int m0, int m1) {
    std::array<int, 3> m{g.storage_index(m0), g.storage_index(m1), 0};
    return psi.at(0, g.encode(m));
  };
  // fundamental is 1/8, so |xi| = 1 is the lattice mode (8, 0).
  CHECK(std::abs(coeff(8, 0) - Complex(inv_l2, 0.0)) < 1e-15);
  CHECK(std::abs(coeff(0, 8) - Complex(inv_l2, 0.0)) < 1e-15);
  // the mollifier step is symmetric, so the midpoint radius gives exactly 1/2.
  CHECK(std::abs(coeff(12, 0) - Complex(0.5 * inv_l2, 0.0)) < 1e-15);
  CHECK(std::abs(coeff(0, 0) - Complex(inv_l2, 0.0)) < 1e-15);
  CHECK(std::abs(coeff(16, 0)) == 0.0);

  double outside = 0.0;
  for (std::int64_t i = 0; i < g.modes(); ++i)
    if (g.xi_sq(i) > 4.0 + 1e-12) outside = std::max(outside, std::abs(psi.at(0, i)));
  CHECK(outside == 0.0);
  CHECK(physical_imag_defect(psi) < 1e-13);
}

TEST_CASE("modulated bump field lives on the carrier annulus") {
  Grid g = wide_grid();
  auto gfield = build_g(g, 8.0);
  CHECK(divergence(gfield).l2() < 1e-13 * gfield.l2());
  CHECK(physical_imag_defect(gfield) < 1e-12);
  for (std::int64_t i = 0; i < g.modes(); ++i) {
    double mass = std::abs(gfield.at(0, i)) + std::abs(gfield.at(1, i));
    if (mass == 0.0) continue;
    double r = std::sqrt(g.xi_sq(i));
    CHECK(r >= 6.0 - 1e-9);
    CHECK(r <= 10.0 + 1e-9);
  }

  // || perp_grad(psi cos(M x1)) ||^2 = (M^2 S0 + S2) / 2 with S0, S2 the bump
  // mass and its second moment, so the norm scales like M up to the spread.
  Grid fine(2, 384, 16.0 * M_PI);
  double n8 = build_g(fine, 8.0).l2();
  double n12 = build_g(fine, 12.0).l2();
  CHECK(rel(n12 / n8, 1.5) < 0.02);

  // M + 2 = 14 against a dealias cutoff of 32/3 on this grid.
  CHECK_THROWS_AS(build_g(g, 12.0), GridTooCoarse);
  CHECK_THROWS_AS(build_g(Grid(2, 128, 16.0 * M_PI), 8.0), GridTooCoarse);
}

TEST_CASE("forcing is the laplacian of g scaled by eta delta") {
  Grid g = wide_grid();
  auto params = base_params();
  auto f = build_force(params, g);
  CHECK(f.sample_count() >= 2);
  SpectralField expect = laplacian(build_g(g, params.mfreq));
  expect *= params.eta * params.delta;
  for (const auto& s : f.samples) CHECK(field_gap(s, expect) < 1e-14);

  // Linear in delta while h is absent.
  auto half = params;
  half.delta = 0.25;
  auto fh = build_force(half, g);
  SpectralField scaled = f.samples[0];
  scaled *= 0.5;
  CHECK(field_gap(fh.samples[0], scaled) < 1e-14);
}

TEST_CASE("whole-period count lands the window [2, 4)") {
  auto r = k_delta_T(0.5, 1.0);
  CHECK(r.k == 16);
  CHECK(r.check == doctest::Approx(2.0));
  r = k_delta_T(0.5, 16.0);
  CHECK(r.k == 1);
  CHECK(r.check == doctest::Approx(2.0));
  r = k_delta_T(0.4, 2.0);
  CHECK(r.k == 39);
  CHECK(r.check == doctest::Approx(std::pow(78.0, 0.16)));
  CHECK(r.check >= 2.0 - 1e-9);
  CHECK(r.check < 4.0);
  CHECK_THROWS_AS(k_delta_T(0.5, 20.0), InvalidParameter);
  CHECK_THROWS_AS(k_delta_T(1.5, 1.0), InvalidParameter);
}

TEST_CASE("first iterate assembles the closed-form pieces") {
  Grid g = wide_grid();
  auto params = base_params();
  params.h = make_oscillating_h(g, params.period, 16, 0.02, 11);

  int samples = 17;  // 16 segments, knots shared with the 16-sample h mesh
  auto it = first_iterate(params, g, params.period, samples);
  CHECK(it.total.size() == samples);

  // total = stationary + heat term + forced term, sample by sample.
  for (int i = 0; i < samples; ++i) {
    SpectralField sum = it.stationary;
    sum.axpy(1.0, it.heat_term.samples[i]);
    sum.axpy(1.0, it.forced_term.samples[i]);
    CHECK(field_gap(it.total.samples[i], sum) < 1e-12);
  }

  // and the pieces are what they claim to be.
  auto gf = build_g(g, params.mfreq);
  SpectralField stat = gf;
  stat *= -params.eta * params.delta;
  CHECK(field_gap(it.stationary, stat) < 1e-14);
  SpectralField heat_mid = heat_propagate(gf, 0.5);
  heat_mid *= params.eta * params.delta;
  CHECK(field_gap(it.heat_term.samples[8], heat_mid) < 1e-13);

  // Independent cross-check: march the linearized problem with exponential
  // steps aligned to the forcing mesh, where piecewise-linear forcing is
  // integrated exactly.
  SolverConfig cfg;
  cfg.dt = params.period / ((samples - 1) * 5);
  cfg.linear_only = true;
  cfg.store_stride = 5;
  SpectralField zero(g, 2);
  auto traj =
      solve_ivp(zero, build_force(params, g).as_force_fn(), 0.0, params.period, cfg);
  REQUIRE(traj.size() == samples);
  for (int i = 0; i < samples; ++i)
    CHECK(field_gap(traj.samples[i], it.total.samples[i]) < 1e-11);
}

TEST_CASE("second iterate multiplier equals the constant-force heat integral") {
  Grid g = wide_grid();
  auto params = base_params();
  for (long long k : {2LL, 16LL}) {
    auto closed = second_iterate_closed_form(params, g, k);

    auto gf = build_g(g, params.mfreq);
    Trajectory constant;
    constant.t0 = 0.0;
    constant.dt = static_cast<double>(k) * params.period / 4.0;
    SpectralField b = nonlinear_tensor_div(gf, gf);
    b *= -params.eta * params.eta * params.delta * params.delta;
    constant.samples.assign(5, b);
    auto integ = duhamel_integral(constant);
    CHECK(field_gap(closed, integ.samples.back()) < 1e-12);
  }
}

TEST_CASE("low-shell split is exact where the carrier cannot reach") {
  Grid g = wide_grid();
  auto part = make_partition(g);

  auto params = base_params();
  auto rep = lower_bound_blocks(params, g, part);
  REQUIRE(rep.shells == std::vector<int>{-2});
  CHECK(rep.nominal_shells == 1);
  CHECK(!rep.truncated);

  auto narrower = base_params();
  narrower.delta = 0.4;
  auto rep2 = lower_bound_blocks(narrower, g, part);
  REQUIRE(rep2.shells == std::vector<int>{-3, -2});
  CHECK(rep2.nominal_shells == 2);
  CHECK(!rep2.truncated);

  double m2_scale = params.mfreq * params.mfreq / 2.0;
  for (const auto* r : {&rep, &rep2}) {
    double sum = 0.0;
    for (std::size_t i = 0; i < r->shells.size(); ++i) {
      // || total - (M^2/2) carrier || <= remainder/2 blockwise.
      double lead = m2_scale * r->m2_part[i];
      CHECK(std::abs(r->total[i] - lead) <=
            0.5 * r->remainder[i] + 1e-12 * lead);
      CHECK(r->remainder[i] < 1e-4 * lead);  // modulation is higher order in 1/M
      sum += r->total[i];
    }
    CHECK(rel(r->sum_total, sum) < 1e-14);
    CHECK(rel(r->aggregate,
              params.eta * params.eta * params.delta * params.delta * r->sum_total *
                  (r == &rep ? 1.0 : 0.64)) < 1e-12);
  }
}

TEST_CASE("shell range failures carry the box size that would resolve them") {
  Grid g = wide_grid();
  auto part = make_partition(g);
  auto params = base_params();
  params.delta = 0.6;
  try {
    lower_bound_blocks(params, g, part);
    CHECK(false);
  } catch (const EmptyBlockRange& e) {
    CHECK(e.required_box_length == doctest::Approx(16.0 * M_PI));
  }

  Grid tight(2, 64, 2.0 * M_PI);
  auto tight_part = make_partition(tight);
  CHECK_THROWS_AS(lower_bound_blocks(base_params(), tight, tight_part),
                  EmptyBlockRange);
}

TEST_CASE("growth run beats the smallness threshold from zero data") {
  Grid g = wide_grid();
  auto params = base_params();
  params.period = 16.0;  // k = 1, same horizon as T = 1 with k = 16

  SolverConfig cfg;
  cfg.dt = 0.04;
  SpectralField zero(g, 2);
  auto rep = run_growth_experiment(params, zero, cfg);

  CHECK(rep.k == 1);
  CHECK(rep.horizon == doctest::Approx(16.0));
  CHECK(rep.start_norm == 0.0);
  CHECK(rep.ratio == 0.0);
  CHECK(rep.end_norm > 2.0 * params.epsilon0);
  CHECK(rep.growth_target_met);
  CHECK(rep.m_below_asymptotic_regime);  // M = 8 sits below the regime bound of 10
  CHECK(!rep.initial_norm_exceeds_epsilon0);
  CHECK(rep.non_periodic_certified);
  CHECK(rep.endpoint_gap > rep.certification_threshold);
  CHECK(rep.expansion_residual < 1e-3 * rep.end_norm);
  CHECK(rep.first_iterate_norm > rep.second_iterate_norm);
  CHECK(rep.series.size() >= 100);
  CHECK(rep.series.front().second == 0.0);
  CHECK(rep.series.back().second == doctest::Approx(rep.end_norm));
}

TEST_CASE("parameter gate rejects out-of-range tuples") {
  auto p = base_params();
  p.delta = 0.7;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = base_params();
  p.eta = 0.6;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = base_params();
  p.period = 20.0;  // above 2^{1/delta^2} = 16
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = base_params();
  p.mfreq = 1.0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  CHECK_NOTHROW(base_params().validate());
}
