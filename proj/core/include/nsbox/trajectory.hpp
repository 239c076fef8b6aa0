#pragma once

#include <vector>

#include "nsbox/errors.hpp"
#include "nsbox/field.hpp"

namespace nsbox {

// Uniformly sampled time slices t0 + i*dt, i = 0..size-1, all on one grid.
struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<SpectralField> samples;

  int size() const { return static_cast<int>(samples.size()); }
  double time(int i) const { return t0 + dt * i; }
  double t_end() const { return time(size() - 1); }
  const Grid& grid() const { return samples.front().grid(); }
  int components() const { return samples.front().components(); }

  void validate() const {
    if (samples.size() < 2) throw InvalidParameter("trajectory needs at least 2 samples");
    if (!(dt > 0.0)) throw InvalidTime("trajectory dt must be positive");
    for (const auto& s : samples)
      if (s.grid() != grid() || s.components() != components())
        throw DimensionMismatch("trajectory samples disagree on grid or components");
  }
};

}  // namespace nsbox
