#pragma once

#include <string>

#include "nsbox/field.hpp"

namespace nsbox {

// Velocity snapshot file: magic "BNSF", version u32, dim u32, N per axis
// (dim x u32), box length f64, then per component the row-major coefficients
// as little-endian f64 (re, im) pairs. Defined for velocity fields only.
void write_snapshot(const SpectralField& u, const std::string& path);

// The header stores no dealias fraction; the caller supplies one for the grid.
SpectralField read_snapshot(const std::string& path, double dealias_fraction = 2.0 / 3.0);

}  // namespace nsbox
