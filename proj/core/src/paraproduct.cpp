#include "nsbox/paraproduct.hpp"

#include <vector>

#include "fft.hpp"
#include "nsbox/errors.hpp"
#include "nsbox/operators.hpp"

namespace nsbox {

namespace {

void require_scalar_pair(const SpectralField& f, const SpectralField& g, const char* op) {
  if (f.components() != 1 || g.components() != 1)
    throw DimensionMismatch(std::string(op) + " takes scalar fields");
  if (f.grid() != g.grid())
    throw DimensionMismatch(std::string(op) + " on mismatched grids");
}

std::vector<double> physical_real(const SpectralField& u) {
  auto phys = to_physical(u, 0);
  std::vector<double> out(phys.size());
  for (std::size_t i = 0; i < phys.size(); ++i) out[i] = phys[i].real();
  return out;
}

// Physical samples of every dyadic block, index 0 -> j_min.
std::vector<std::vector<double>> physical_blocks(const SpectralField& u,
                                                 const DyadicPartition& part) {
  std::vector<std::vector<double>> out;
  out.reserve(part.shells());
  for (int j = part.j_min(); j <= part.j_max(); ++j)
    out.push_back(physical_real(part.block(u, j)));
  return out;
}

void accumulate_product(const Grid& grid, const std::vector<double>& a,
                        const std::vector<double>& b, std::vector<Complex>& scratch,
                        SpectralField& acc) {
  for (std::int64_t i = 0; i < grid.points(); ++i)
    scratch[i] = Complex(a[i] * b[i], 0.0);
  fft::forward(grid, scratch.data());
  const double inv = 1.0 / static_cast<double>(grid.points());
  auto& out = acc.comp(0);
  for (std::int64_t i = 0; i < grid.modes(); ++i) out[i] += scratch[i] * inv;
}

}  // namespace

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
  require_scalar_pair(f, g, "dealiased_product");
  SpectralField ft = f;
  SpectralField gt = g;
  dealias_truncate(ft);
  dealias_truncate(gt);
  auto fa = physical_real(ft);
  auto ga = physical_real(gt);
  SpectralField out(f.grid(), 1);
  std::vector<Complex> scratch(f.grid().points());
  accumulate_product(f.grid(), fa, ga, scratch, out);
  dealias_truncate(out);
  out.mark_mean_mode(false);
  return out;
}

SpectralField bony_T(const SpectralField& f, const SpectralField& g,
                     const DyadicPartition& part) {
  require_scalar_pair(f, g, "bony_T");
  if (part.grid() != f.grid())
    throw DimensionMismatch("bony_T partition built for another grid");
  SpectralField ft = f;
  SpectralField gt = g;
  dealias_truncate(ft);
  dealias_truncate(gt);
  const Grid& grid = f.grid();
  auto fb = physical_blocks(ft, part);
  auto gb = physical_blocks(gt, part);

  SpectralField out(grid, 1);
  std::vector<Complex> scratch(grid.points());
  std::vector<double> running(grid.points(), 0.0);
  int absorbed = part.j_min() - 1;  // S currently holds shells j_min..absorbed
  for (int k = part.j_min(); k <= part.j_max(); ++k) {
    while (absorbed < k - 3) {
      ++absorbed;
      const auto& blk = fb[absorbed - part.j_min()];
      for (std::int64_t i = 0; i < grid.points(); ++i) running[i] += blk[i];
    }
    if (absorbed < part.j_min()) continue;  // S_{k-3} vanishes on the lattice
    accumulate_product(grid, running, gb[k - part.j_min()], scratch, out);
  }
  dealias_truncate(out);
  out.mark_mean_mode(false);
  return out;
}

SpectralField bony_R(const SpectralField& f, const SpectralField& g,
                     const DyadicPartition& part) {
  require_scalar_pair(f, g, "bony_R");
  if (part.grid() != f.grid())
    throw DimensionMismatch("bony_R partition built for another grid");
  SpectralField ft = f;
  SpectralField gt = g;
  dealias_truncate(ft);
  dealias_truncate(gt);
  const Grid& grid = f.grid();
  auto fb = physical_blocks(ft, part);
  auto gb = physical_blocks(gt, part);

  SpectralField out(grid, 1);
  std::vector<Complex> scratch(grid.points());
  for (int k = part.j_min(); k <= part.j_max(); ++k) {
    for (int l = std::max(part.j_min(), k - 2); l <= std::min(part.j_max(), k + 2); ++l)
      accumulate_product(grid, fb[k - part.j_min()], gb[l - part.j_min()], scratch, out);
  }
  dealias_truncate(out);
  out.mark_mean_mode(false);
  return out;
}

}  // namespace nsbox
