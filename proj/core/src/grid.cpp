#include "nsbox/grid.hpp"

#include <cmath>
#include <string>

#include "nsbox/errors.hpp"

namespace nsbox {

Grid::Grid(int dim, int n, double box_length, double dealias_fraction)
    : dim_(dim), n_(n), box_length_(box_length), dealias_fraction_(dealias_fraction) {
  if (dim != 2 && dim != 3)
    throw InvalidParameter("grid dim must be 2 or 3, got " + std::to_string(dim));
  if (n < 8 || n % 2 != 0)
    throw InvalidParameter("grid n must be even and >= 8, got " + std::to_string(n));
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw InvalidParameter("grid box_length must be positive and finite");
  if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
    throw InvalidParameter("grid dealias_fraction must lie in (0, 1]");
  cutoff_index_ = static_cast<int>(std::floor(dealias_fraction * (n / 2)));
  if (cutoff_index_ < 1) throw InvalidParameter("dealias cutoff keeps no modes");
  modes_ = 1;
  for (int a = 0; a < dim_; ++a) modes_ *= n_;
}

double Grid::cell_volume() const {
  double h = box_length_ / n_;
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= h;
  return v;
}

double Grid::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= box_length_;
  return v;
}

}  // namespace nsbox
