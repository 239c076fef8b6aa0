#include "nsbox/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "fft.hpp"
#include "nsbox/errors.hpp"

namespace nsbox {

namespace {

void require_velocity(const SpectralField& u, const char* op) {
  if (!u.is_velocity())
    throw DimensionMismatch(std::string(op) + " requires a velocity field");
}

}  // namespace

SpectralField leray_project(const SpectralField& u) {
  require_velocity(u, "leray_project");
  const Grid& g = u.grid();
  SpectralField out(g, u.components());
  std::array<int, 3> m{};
  std::array<double, 3> xi{};
  for (std::int64_t i = 0; i < g.modes(); ++i) {
    g.decode(i, m);
    double k2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      xi[a] = g.xi(m[a]);
      k2 += xi[a] * xi[a];
    }
    if (k2 == 0.0) continue;  // mean mode is annihilated
    Complex dot(0.0, 0.0);
    for (int a = 0; a < g.dim(); ++a) dot += xi[a] * u.at(a, i);
    dot /= k2;
    for (int a = 0; a < g.dim(); ++a) out.at(a, i) = u.at(a, i) - xi[a] * dot;
  }
  out.mark_mean_mode(true);
  return out;
}

SpectralField heat_propagate(const SpectralField& u, double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw InvalidTime("heat_propagate needs t >= 0, got " + std::to_string(t));
  const Grid& g = u.grid();
  SpectralField out(g, u.components());
  std::array<int, 3> m{};
  for (std::int64_t i = 0; i < g.modes(); ++i) {
    g.decode(i, m);
    double w = std::exp(-g.xi_sq(m) * t);
    for (int c = 0; c < u.components(); ++c) out.at(c, i) = w * u.at(c, i);
  }
  out.mark_mean_mode(u.mean_mode_zeroed());
  return out;
}

SpectralField laplacian(const SpectralField& u) {
  const Grid& g = u.grid();
  SpectralField out(g, u.components());
  std::array<int, 3> m{};
  for (std::int64_t i = 0; i < g.modes(); ++i) {
    g.decode(i, m);
    double k2 = g.xi_sq(m);
    for (int c = 0; c < u.components(); ++c) out.at(c, i) = -k2 * u.at(c, i);
  }
  out.mark_mean_mode(true);
  return out;
}

SpectralField divergence(const SpectralField& u) {
  require_velocity(u, "divergence");
  const Grid& g = u.grid();
  SpectralField out(g, 1);
  std::array<int, 3> m{};
  for (std::int64_t i = 0; i < g.modes(); ++i) {
    g.decode(i, m);
    Complex s(0.0, 0.0);
    for (int a = 0; a < g.dim(); ++a) s += Complex(0.0, g.xi(m[a])) * u.at(a, i);
    out.at(0, i) = s;
  }
  out.mark_mean_mode(true);
  return out;
}

SpectralField perp_gradient(const SpectralField& s) {
  if (s.grid().dim() != 2)
    throw DimensionMismatch("perp_gradient is defined on 2D grids only");
  if (s.components() != 1)
    throw DimensionMismatch("perp_gradient takes a scalar field");
  const Grid& g = s.grid();
  SpectralField out(g, 2);
  std::array<int, 3> m{};
  for (std::int64_t i = 0; i < g.modes(); ++i) {
    g.decode(i, m);
    Complex v = s.at(0, i);
    out.at(0, i) = Complex(0.0, -g.xi(m[1])) * v;
    out.at(1, i) = Complex(0.0, g.xi(m[0])) * v;
  }
  out.mark_mean_mode(true);
  return out;
}

SpectralField inverse_laplacian(const SpectralField& u) {
  const Grid& g = u.grid();
  double mean = 0.0;
  for (int c = 0; c < u.components(); ++c) mean = std::max(mean, std::abs(u.at(c, 0)));
  if (mean > 1e-13 * std::max(1.0, u.max_abs()))
    throw MeanModeNotZero("inverse_laplacian requires a mean-zero field");
  SpectralField out(g, u.components());
  std::array<int, 3> m{};
  for (std::int64_t i = 1; i < g.modes(); ++i) {
    g.decode(i, m);
    double k2 = g.xi_sq(m);
    if (k2 == 0.0) continue;
    for (int c = 0; c < u.components(); ++c) out.at(c, i) = -u.at(c, i) / k2;
  }
  out.mark_mean_mode(true);
  return out;
}

void dealias_truncate(SpectralField& u) {
  const Grid& g = u.grid();
  std::array<int, 3> m{};
  for (std::int64_t i = 0; i < g.modes(); ++i) {
    g.decode(i, m);
    if (g.dealias_keep(m)) continue;
    for (int c = 0; c < u.components(); ++c) u.at(c, i) = Complex(0.0, 0.0);
  }
}

SpectralField nonlinear_tensor_div(const SpectralField& u, const SpectralField& v) {
  require_velocity(u, "nonlinear_tensor_div");
  require_velocity(v, "nonlinear_tensor_div");
  if (u.grid() != v.grid())
    throw DimensionMismatch("nonlinear_tensor_div on mismatched grids");
  const Grid& g = u.grid();
  const int d = g.dim();

  SpectralField ut = u;
  SpectralField vt = v;
  dealias_truncate(ut);
  dealias_truncate(vt);

  // Real physical samples of every component of both factors.
  std::vector<std::vector<double>> up(d), vp(d);
  for (int a = 0; a < d; ++a) {
    auto cu = to_physical(ut, a);
    auto cv = to_physical(vt, a);
    up[a].resize(cu.size());
    vp[a].resize(cv.size());
    for (std::size_t i = 0; i < cu.size(); ++i) up[a][i] = cu[i].real();
    for (std::size_t i = 0; i < cv.size(); ++i) vp[a][i] = cv[i].real();
  }

  SpectralField w(g, d);
  std::vector<Complex> prod(g.points());
  const double inv = 1.0 / static_cast<double>(g.points());
  std::array<int, 3> m{};
  for (int ci = 0; ci < d; ++ci) {
    for (int cj = 0; cj < d; ++cj) {
      for (std::int64_t i = 0; i < g.points(); ++i)
        prod[i] = Complex(up[cj][i] * vp[ci][i], 0.0);
      fft::forward(g, prod.data());
      for (std::int64_t i = 0; i < g.modes(); ++i) {
        g.decode(i, m);
        if (!g.dealias_keep(m)) continue;
        w.at(ci, i) += Complex(0.0, g.xi(m[cj])) * (prod[i] * inv);
      }
    }
  }
  w.mark_mean_mode(false);
  return leray_project(w);
}

SpectralField scale_field(const SpectralField& u, int log2_lambda, ScaleReport* report) {
  if (log2_lambda < -30 || log2_lambda > 30)
    throw UnsupportedScale("scale exponent out of range");
  const Grid& g = u.grid();
  const int n = g.n();
  const int k = log2_lambda;
  const double lambda = std::ldexp(1.0, k);
  SpectralField out(g, u.components());
  std::int64_t dropped = 0;
  double dropped_mass = 0.0;
  double total_mass = 0.0;
  std::array<int, 3> m{}, mt{};
  for (std::int64_t i = 0; i < g.modes(); ++i) {
    g.decode(i, m);
    double mass = 0.0;
    for (int c = 0; c < u.components(); ++c) mass += std::norm(u.at(c, i));
    total_mass += mass;
    bool keep = true;
    for (int a = 0; a < g.dim(); ++a) {
      std::int64_t sm = g.signed_mode(m[a]);
      std::int64_t target;
      if (k >= 0) {
        target = sm << k;
      } else {
        std::int64_t div = std::int64_t(1) << (-k);
        if (sm % div != 0) {
          keep = false;
          break;
        }
        target = sm / div;
      }
      // storage convention keeps signed modes in (-n/2, n/2]
      if (target > n / 2 || target <= -n / 2) {
        keep = false;
        break;
      }
      mt[a] = g.storage_index(static_cast<int>(target));
    }
    if (!keep) {
      if (mass > 0.0) {
        ++dropped;
        dropped_mass += mass;
      }
      continue;
    }
    std::int64_t j = g.encode(mt);
    for (int c = 0; c < u.components(); ++c) out.at(c, j) = lambda * u.at(c, i);
  }
  if (report) {
    report->dropped_modes = dropped;
    report->dropped_mass_rel =
        total_mass > 0.0 ? std::sqrt(dropped_mass / total_mass) : 0.0;
  }
  out.mark_mean_mode(u.mean_mode_zeroed());
  return out;
}

SpectralField scale_field(const SpectralField& u, double lambda, ScaleReport* report) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw UnsupportedScale("scale factor must be positive and finite");
  double k = std::log2(lambda);
  double rk = std::round(k);
  if (std::abs(k - rk) > 1e-12)
    throw UnsupportedScale("scale factor must be a power of two, got " +
                           std::to_string(lambda));
  return scale_field(u, static_cast<int>(rk), report);
}

}  // namespace nsbox
