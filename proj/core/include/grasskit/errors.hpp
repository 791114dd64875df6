#pragma once

#include <stdexcept>
#include <string>

namespace grasskit {

// Invalid arguments: shape mismatch, out-of-range parameters, off-manifold input.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// log() was asked for a point where the minimizing geodesic is not unique.
class CutLocusError : public DomainError {
 public:
  explicit CutLocusError(const std::string& what) : DomainError(what) {}
};

}  // namespace grasskit
