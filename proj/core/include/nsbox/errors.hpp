#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nsbox {

// Base for all library errors. The CLI maps concrete types to exit codes.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidFieldData : Error {
  using Error::Error;
};

struct InvalidTime : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct MeanModeNotZero : Error {
  using Error::Error;
};

struct UnsupportedScale : Error {
  using Error::Error;
};

struct GridTooCoarse : Error {
  using Error::Error;
};

struct InvalidParameter : Error {
  using Error::Error;
};

// Non-finite state detected during time integration; carries the step time.
struct BlowupDetected : Error {
  double t;
  BlowupDetected(const std::string& msg, double when) : Error(msg), t(when) {}
};

// Picard iteration failed to contract; carries the successive-difference ratios.
struct NoContraction : Error {
  std::vector<double> ratios;
  NoContraction(const std::string& msg, std::vector<double> history)
      : Error(msg), ratios(std::move(history)) {}
};

// Requested dyadic range has no resolvable blocks; carries a box-size estimate
// that would make the range nonempty.
struct EmptyBlockRange : Error {
  double required_box_length;
  EmptyBlockRange(const std::string& msg, double box_length)
      : Error(msg), required_box_length(box_length) {}
};

}  // namespace nsbox
