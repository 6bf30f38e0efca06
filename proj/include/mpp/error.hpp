#pragma once

#include <stdexcept>
#include <string>

namespace mpp {

/// Thrown when an exhaustive enumeration is requested beyond the size
/// guards (these routines are meant for desk-scale instances only).
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mpp
