#include <cmath>

#include "doctest.h"
#include "nsbox/errors.hpp"
#include "support.hpp"

using namespace nsbox;
using testsup::rel;

TEST_CASE("grid mode bookkeeping round-trips") {
  const Grid g(2, 32, 2.0 * kPi);
  CHECK(g.fundamental() == doctest::Approx(1.0));
  CHECK(g.nyquist() == doctest::Approx(16.0));
  CHECK(g.dealias_cutoff_index() == 10);
  CHECK(g.volume() == doctest::Approx(4.0 * kPi * kPi));
  CHECK(g.cell_volume() * static_cast<double>(g.points()) ==
        doctest::Approx(g.volume()));
  for (int m = -15; m <= 16; ++m) CHECK(g.signed_mode(g.storage_index(m)) == m);
  std::array<int, 3> m{};
  for (std::int64_t flat : {0L, 5L, 31L, 32L, 1023L}) {
    g.decode(flat, m);
    CHECK(g.encode(m) == flat);
  }
  const Grid g3(3, 8, 1.0);
  for (std::int64_t flat : {0L, 7L, 63L, 511L}) {
    g3.decode(flat, m);
    CHECK(g3.encode(m) == flat);
  }
}

TEST_CASE("plane wave coefficient normalization") {
  const Grid g(2, 32, 2.0 * kPi);
  SpectralField u = sample_function(g, 1, [](std::span<const double> x, std::span<double> v) {
    v[0] = std::cos(3.0 * x[0]);
  });
  std::array<int, 3> pos{g.storage_index(3), 0, 0};
  std::array<int, 3> neg{g.storage_index(-3), 0, 0};
  CHECK(rel(u.at(0, g.encode(pos)).real(), 0.5) < 1e-12);
  CHECK(rel(u.at(0, g.encode(neg)).real(), 0.5) < 1e-12);
  CHECK(u.conjugate_symmetry_defect() < 1e-13);
  CHECK(physical_imag_defect(u) < 1e-13);

  double off = 0.0;
  for (std::int64_t i = 0; i < g.modes(); ++i) {
    if (i == g.encode(pos) || i == g.encode(neg)) continue;
    off = std::max(off, std::abs(u.at(0, i)));
  }
  CHECK(off < 1e-13);
}

TEST_CASE("transform round trip and Parseval") {
  const Grid g(2, 64, 3.0);
  SpectralField u = testsup::random_velocity(g, 42);
  SpectralField v = u;
  for (int c = 0; c < u.components(); ++c) {
    auto phys = to_physical(u, c);
    from_physical(v, c, std::move(phys));
  }
  SpectralField diff = u - v;
  CHECK(diff.max_abs() < 1e-13 * u.max_abs());

  // Parseval: coefficient form of the L2 norm against physical quadrature.
  double sq = 0.0;
  for (int c = 0; c < u.components(); ++c) {
    for (auto phys = to_physical(u, c); const Complex& z : phys)
      sq += z.real() * z.real();
  }
  CHECK(rel(std::sqrt(sq * g.cell_volume()), u.l2()) < 1e-12);
}

TEST_CASE("field arithmetic and validation") {
  const Grid g(2, 16, 2.0 * kPi);
  SpectralField u = testsup::shear_mode(g, 2, 1.0);
  SpectralField w = 2.0 * u;
  w.axpy(Complex(-2.0, 0.0), u);
  CHECK(w.max_abs() < 1e-15);
  CHECK(u.finite());
  CHECK(u.is_velocity());

  SpectralField broken = u;
  broken.at(1, g.encode({g.storage_index(2), 0, 0})) += Complex(0.0, 0.5);
  CHECK(broken.conjugate_symmetry_defect() > 1e-3);

  CHECK_THROWS_AS(
      sample_function(g, 1,
                      [](std::span<const double>, std::span<double> v) {
                        v[0] = std::numeric_limits<double>::quiet_NaN();
                      }),
      InvalidFieldData);
}

TEST_CASE("grid rejects bad parameters") {
  CHECK_THROWS_AS(Grid(4, 16, 1.0), InvalidParameter);
  CHECK_THROWS_AS(Grid(2, 0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(Grid(2, 16, -1.0), InvalidParameter);
}
