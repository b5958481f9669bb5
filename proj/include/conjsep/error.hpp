// error.hpp -- error categories shared across the toolkit.
#pragma once

#include <stdexcept>

namespace conjsep {

// Malformed or out-of-alphabet input.
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The requested operation needs data that was not supplied (e.g. an inverse
// map for negative powers).
struct capability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured budget was exhausted before the computation finished.
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace conjsep
