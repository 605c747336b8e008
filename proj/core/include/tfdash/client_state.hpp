#pragma once

#include <cstdint>

#include "tfdash/estimator.hpp"
#include "tfdash/prober.hpp"
#include "tfdash/rng.hpp"

namespace tfdash {

/// Everything a rate policy needs about one client, advanced at each
/// segment-completion epoch. Single-writer; never shared across clients.
struct ClientState {
  EstimatorState estimator;
  ProberState prober;
  double buffer_s = 0.0;           // buffered video time
  double last_bitrate_kbps = 0.0;  // 0 until the first segment completes
  int run_length = 0;              // consecutive trailing segments at last_bitrate
  std::int64_t next_index = 0;     // index of the next segment to request
  RandomStream rng;

  double measured_kbps() const { return estimator.last_measured_kbps; }
  double amended_kbps() const { return estimator.last_amended_kbps; }
  double probed_kbps() const { return prober.probed_kbps; }
};

}  // namespace tfdash
