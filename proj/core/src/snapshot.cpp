#include "nsbox/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "nsbox/errors.hpp"

namespace nsbox {

static_assert(std::endian::native == std::endian::little,
              "snapshot io assumes a little-endian host");

namespace {
constexpr char kMagic[4] = {'B', 'N', 'S', 'F'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InvalidFieldData("snapshot file truncated");
  return v;
}
}  // namespace

void write_snapshot(const SpectralField& u, const std::string& path) {
  if (!u.is_velocity())
    throw InvalidFieldData("snapshot files hold velocity fields (components == dim)");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  put(out, kFormatVersion);
  put(out, static_cast<std::uint32_t>(u.grid().dim()));
  for (int a = 0; a < u.grid().dim(); ++a)
    put(out, static_cast<std::uint32_t>(u.grid().n()));
  put(out, u.grid().box_length());
  for (int c = 0; c < u.components(); ++c) {
    const auto& data = u.comp(c);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(Complex)));
  }
  if (!out) throw Error("short write to " + path);
}

SpectralField read_snapshot(const std::string& path, double dealias_fraction) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw InvalidFieldData("not a BNSF snapshot: " + path);
  auto version = get<std::uint32_t>(in);
  if (version != kFormatVersion)
    throw InvalidFieldData("unsupported snapshot version " + std::to_string(version));
  auto dim = get<std::uint32_t>(in);
  if (dim != 2 && dim != 3) throw InvalidFieldData("snapshot dim must be 2 or 3");
  std::uint32_t n = 0;
  for (std::uint32_t a = 0; a < dim; ++a) {
    auto na = get<std::uint32_t>(in);
    if (a == 0)
      n = na;
    else if (na != n)
      throw InvalidFieldData("snapshot axes must share one resolution");
  }
  double box_length = get<double>(in);
  Grid grid(static_cast<int>(dim), static_cast<int>(n), box_length, dealias_fraction);
  SpectralField u(grid, grid.dim());
  for (int c = 0; c < u.components(); ++c) {
    auto& data = u.comp(c);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(Complex)));
    if (!in) throw InvalidFieldData("snapshot file truncated: " + path);
  }
  if (!u.finite()) throw InvalidFieldData("snapshot holds non-finite coefficients");
  bool zeroed = true;
  for (int c = 0; c < u.components(); ++c)
    if (std::abs(u.at(c, 0)) != 0.0) zeroed = false;
  u.mark_mean_mode(zeroed);
  return u;
}

}  // namespace nsbox
