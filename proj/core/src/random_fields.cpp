#include "nsbox/random_fields.hpp"

#include <array>
#include <cmath>
#include <random>

#include "nsbox/errors.hpp"
#include "nsbox/operators.hpp"

namespace nsbox {

namespace {

double uniform01(std::mt19937_64& rng) {
  // 53-bit mantissa, strictly inside (0, 1) so log() below is safe.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

Complex gaussian_pair(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  double rad = std::sqrt(-2.0 * std::log(u1));
  return Complex(rad * std::cos(2.0 * kPi * u2), rad * std::sin(2.0 * kPi * u2));
}

}  // namespace

SpectralField random_field(const Grid& grid, int components, const EnsembleSpec& spec,
                           std::uint64_t seed) {
  if (!(spec.amplitude >= 0.0)) throw InvalidParameter("ensemble amplitude must be >= 0");
  if (spec.k_min < 0.0 || spec.k_max < spec.k_min)
    throw InvalidParameter("ensemble band must satisfy 0 <= k_min <= k_max");
  std::mt19937_64 rng(seed);
  SpectralField u(grid, components);
  const double cap = std::min(spec.k_max, grid.dealias_cutoff_frequency());
  std::array<int, 3> m{};
  for (std::int64_t i = 0; i < grid.modes(); ++i) {
    grid.decode(i, m);
    // Draw unconditionally so band choices do not shift the stream.
    std::array<Complex, 3> draw;
    for (int c = 0; c < components; ++c) draw[c] = gaussian_pair(rng);
    if (i == 0) continue;
    double r = std::sqrt(grid.xi_sq(m));
    if (r < spec.k_min || r > cap) continue;
    double env = std::pow(r, spec.slope);
    for (int c = 0; c < components; ++c) u.at(c, i) = env * draw[c];
  }
  // Hermitian part, so physical samples are real.
  const int n = grid.n();
  std::array<int, 3> mm{};
  SpectralField sym(grid, components);
  for (std::int64_t i = 0; i < grid.modes(); ++i) {
    grid.decode(i, m);
    for (int a = 0; a < grid.dim(); ++a) mm[a] = (n - m[a]) % n;
    std::int64_t jj = grid.encode(mm);
    for (int c = 0; c < components; ++c)
      sym.at(c, i) = 0.5 * (u.at(c, i) + std::conj(u.at(c, jj)));
  }
  sym.zero_mean_mode();
  SpectralField out = spec.divergence_free && components == grid.dim()
                          ? leray_project(sym)
                          : std::move(sym);
  double norm = out.l2();
  if (norm > 0.0 && spec.amplitude > 0.0)
    out *= spec.amplitude / norm;
  else
    out *= 0.0;
  return out;
}

}  // namespace nsbox
