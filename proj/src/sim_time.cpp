#include "pqcan/sim_time.hpp"

#include <cmath>

namespace pqcan {

DurationNs ms_to_ns(double ms) {
  if (!(ms > 0.0)) return 0;
  return static_cast<DurationNs>(std::llround(ms * static_cast<double>(kNsPerMs)));
}

}  // namespace pqcan
