#pragma once

#include <stdexcept>
#include <string>

namespace matnoise {

// File / format problems (missing mesh, malformed OBJ line, unwritable path).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solver-level failures: indefinite operator, failed pivot, broken spectrum.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace matnoise
