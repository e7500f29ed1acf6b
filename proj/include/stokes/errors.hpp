#pragma once

#include <stdexcept>
#include <string>

namespace stokes {

// Malformed or inconsistent input (bad file, bad data, bad arguments).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request beyond what the library supports (order, quadrature degree, size caps).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mesh is valid but unsuitable for the discretization (not corner-split,
// singular local blocks).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stokes
