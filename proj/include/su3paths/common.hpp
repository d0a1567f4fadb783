#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace su3paths {

using VertexId = std::int32_t;
using Complex = std::complex<double>;

// Bad user input: malformed documents, unknown vertices, invalid CLI values.
// The CLI maps this to exit code 2; everything else to 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure (solver or eigensolver did not converge).
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace su3paths
