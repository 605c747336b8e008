#include "tfdash/prober.hpp"

#include <algorithm>

namespace tfdash {

double probe_update(ProberState& state, double amended_kbps, double alpha,
                    double delta_kbps) {
  const double gap = amended_kbps - state.probed_kbps;
  double next;
  if (state.probed_kbps < amended_kbps) {
    // Halve the gap, never by less than the floor. The floor can push the
    // probe transiently above the estimate; the next update backs off.
    next = state.probed_kbps + std::max(gap / 2.0, delta_kbps);
  } else {
    // Conservative back-off: lands at or below the estimate for alpha <= 2.
    next = state.probed_kbps + alpha * gap;
  }
  state.probed_kbps = std::max(next, 0.0);
  return state.probed_kbps;
}

}  // namespace tfdash
