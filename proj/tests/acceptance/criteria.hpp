// criteria.hpp -- the acceptance suite: one entry per criterion, each
// printing a PASS/FAIL line; returns the number of failures.
#pragma once

#include <cstdint>
#include <ostream>

namespace conjsep::acceptance {

struct Options {
  double scale = 1.0;    // scales sample counts down for quick runs
  uint64_t seed = 20250809;
};

int run_all(const Options& opt, std::ostream& os);

}  // namespace conjsep::acceptance
