#pragma once

#include <stdexcept>
#include <string>

namespace siderand {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested clock does not exist on this platform.
class ClockUnavailable : public Error {
 public:
  using Error::Error;
};

/// The clock is too coarse to be used as an entropy source.
class CoarseTimer : public Error {
 public:
  using Error::Error;
};

class EmptySeries : public Error {
 public:
  EmptySeries() : Error("timing series is empty") {}
};

/// The most frequent value covers the whole series, so no number of samples
/// can reach an entropy target.
class DegenerateDistribution : public Error {
 public:
  using Error::Error;
};

}  // namespace siderand
