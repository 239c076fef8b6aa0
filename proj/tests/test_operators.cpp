#include <cmath>

#include "doctest.h"
#include "nsbox/errors.hpp"
#include "nsbox/operators.hpp"
#include "support.hpp"

using namespace nsbox;
using testsup::add_mode;
using testsup::rel;

TEST_CASE("Leray projection is idempotent and kills divergence") {
  for (int dim : {2, 3}) {
    const Grid g(dim, dim == 2 ? 48 : 16, 2.0 * kPi);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      EnsembleSpec ens;
      ens.divergence_free = false;  // start from a generic field
      SpectralField u = random_field(g, dim, ens, seed);
      SpectralField pu = leray_project(u);
      CHECK((leray_project(pu) - pu).l2() <= 1e-12 * pu.l2());
      CHECK(divergence(pu).l2() <= 1e-12 * pu.l2());
    }
  }
}

TEST_CASE("heat semigroup composes and is the identity at t = 0") {
  const Grid g(2, 48, 2.0 * kPi);
  SpectralField u = testsup::random_velocity(g, 3);
  SpectralField a = heat_propagate(heat_propagate(u, 0.3), 0.45);
  SpectralField b = heat_propagate(u, 0.75);
  CHECK((a - b).l2() <= 1e-13 * u.l2());
  CHECK((heat_propagate(u, 0.0) - u).l2() == 0.0);
  CHECK_THROWS_AS(heat_propagate(u, -0.1), InvalidTime);

  // Mode decay factor e^{-|xi|^2 t} against the coefficient directly.
  SpectralField m = testsup::shear_mode(g, 4, 1.0);
  SpectralField hm = heat_propagate(m, 0.2);
  const std::int64_t flat = g.encode({g.storage_index(4), 0, 0});
  CHECK(rel(hm.at(1, flat).real(), 0.5 * std::exp(-16.0 * 0.2)) < 1e-13);
}

TEST_CASE("Laplacian, inverse, and divergence act as multipliers") {
  const Grid g(2, 32, 2.0 * kPi);
  SpectralField u = testsup::random_velocity(g, 9);
  SpectralField lap = laplacian(u);
  SpectralField back = inverse_laplacian(lap);
  CHECK((back - u).l2() <= 1e-12 * u.l2());

  SpectralField withmean(g, 2);
  withmean.at(0, 0) = Complex(1.0, 0.0);
  withmean.mark_mean_mode(false);
  CHECK_THROWS_AS(inverse_laplacian(withmean), MeanModeNotZero);

  // u = (cos x1, 0): div u = -sin x1, coefficient i/2 at +e1.
  SpectralField s(g, 2);
  add_mode(s, 0, {1, 0, 0}, Complex(0.5, 0.0));
  SpectralField ds = divergence(s);
  CHECK(ds.components() == 1);
  const std::int64_t flat = g.encode({g.storage_index(1), 0, 0});
  CHECK(std::abs(ds.at(0, flat) - Complex(0.0, 0.5)) < 1e-14);
}

TEST_CASE("perp gradient builds divergence-free 2D fields") {
  const Grid g(2, 32, 2.0 * kPi);
  SpectralField psi = testsup::random_scalar(g, 11);
  SpectralField v = perp_gradient(psi);
  CHECK(v.components() == 2);
  CHECK(divergence(v).l2() <= 1e-13 * v.l2());

  // psi = cos x1 -> (0, -sin x1): component 2 coefficient i/2 at +e1.
  SpectralField c(g, 1);
  add_mode(c, 0, {1, 0, 0}, Complex(0.5, 0.0));
  SpectralField pc = perp_gradient(c);
  const std::int64_t flat = g.encode({g.storage_index(1), 0, 0});
  CHECK(std::abs(pc.at(0, flat)) < 1e-15);
  CHECK(std::abs(pc.at(1, flat) - Complex(0.0, 0.5)) < 1e-15);
}

TEST_CASE("tensor divergence matches the hand convolution") {
  // u = (0, cos x1), v = (cos x2, 0): P div maps to coefficients
  // u1 = i s2 / 8, u2 = -i s1 / 8 at the four modes (s1, s2).
  const Grid g(2, 32, 2.0 * kPi);
  SpectralField u(g, 2), v(g, 2);
  add_mode(u, 1, {1, 0, 0}, Complex(0.5, 0.0));
  add_mode(v, 0, {0, 1, 0}, Complex(0.5, 0.0));
  SpectralField w = nonlinear_tensor_div(u, v);
  double off = 0.0;
  for (int s1 : {-1, 1}) {
    for (int s2 : {-1, 1}) {
      const std::int64_t flat =
          g.encode({g.storage_index(s1), g.storage_index(s2), 0});
      CHECK(std::abs(w.at(0, flat) - Complex(0.0, s2 / 8.0)) < 1e-14);
      CHECK(std::abs(w.at(1, flat) - Complex(0.0, -s1 / 8.0)) < 1e-14);
    }
  }
  for (std::int64_t i = 0; i < g.modes(); ++i) {
    std::array<int, 3> m{};
    g.decode(i, m);
    if (std::abs(g.signed_mode(m[0])) == 1 && std::abs(g.signed_mode(m[1])) == 1)
      continue;
    off = std::max({off, std::abs(w.at(0, i)), std::abs(w.at(1, i))});
  }
  CHECK(off < 1e-14);
  CHECK(divergence(w).l2() <= 1e-13 * w.l2());
  CHECK(w.mean_mode_zeroed());
}

TEST_CASE("dealiasing removes beyond-cutoff products exactly") {
  const Grid g(2, 32, 2.0 * kPi);  // cutoff index 10
  SpectralField u(g, 2);
  add_mode(u, 1, {10, 0, 0}, Complex(0.5, 0.0));  // u2 = cos(10 x1)
  // div(u (x) u) lives at modes 0 and 20; both beyond-cutoff and mean vanish.
  SpectralField w = nonlinear_tensor_div(u, u);
  CHECK(w.l2() < 1e-14);

  SpectralField t = u;
  dealias_truncate(t);
  CHECK((t - u).l2() == 0.0);
  SpectralField beyond(g, 2);
  add_mode(beyond, 0, {11, 0, 0}, Complex(0.5, 0.0));
  dealias_truncate(beyond);
  CHECK(beyond.l2() == 0.0);
}

TEST_CASE("dyadic rescaling doubles mode indices") {
  const Grid g(2, 64, 2.0 * kPi);
  SpectralField u(g, 2);
  add_mode(u, 1, {3, 0, 0}, Complex(0.5, 0.0));
  ScaleReport srep;
  SpectralField su = scale_field(u, 1, &srep);
  CHECK(srep.dropped_modes == 0);
  CHECK(srep.dropped_mass_rel == 0.0);
  const std::int64_t flat = g.encode({g.storage_index(6), 0, 0});
  // lambda u(lambda x): amplitude doubles with the mode index.
  CHECK(rel(su.at(1, flat).real(), 1.0) < 1e-14);

  // Modes pushed past the lattice edge are dropped and accounted.
  SpectralField edge(g, 2);
  add_mode(edge, 1, {20, 0, 0}, Complex(0.5, 0.0));
  ScaleReport drop;
  SpectralField sedge = scale_field(edge, 1, &drop);
  CHECK(drop.dropped_modes > 0);
  CHECK(drop.dropped_mass_rel == doctest::Approx(1.0));
  CHECK(sedge.l2() == 0.0);

  CHECK_THROWS_AS(scale_field(u, 3.0), UnsupportedScale);
  SpectralField same = scale_field(u, 1.0);
  CHECK((same - u).l2() == 0.0);
}
