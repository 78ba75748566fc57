#pragma once

#include <cstdint>

namespace kdisc::par {

// Global switch for the OpenMP code paths.  The serial reference
// implementations stay available regardless; tests compare the two and the
// bench tool times them against each other.
bool& enabled();

int max_threads();

} // namespace kdisc::par
