#pragma once

#include <stdexcept>
#include <string>

namespace caramel {

// Bad or inconsistent input data (duplicate keys, ragged rows, parse errors).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Construction could not complete (solver exhausted retries, overflow).
struct BuildError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or corrupted serialized index.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace caramel
