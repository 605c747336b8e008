#pragma once

#include <cstdint>

namespace tfdash {

/// Control parameters shared by the estimator, prober and adaptation logic.
/// Defaults follow the reference configuration: dual buffer thresholds at
/// 5 s / 25 s with a 30 s buffer cap, back-off factor 1.25, 32 kbps probe
/// floor, and a 15-segment smoothness window.
struct PolicyParams {
  double q_low_s = 5.0;         // underflow guard threshold
  double q_high_s = 25.0;       // overflow guard threshold
  double q_max_buffer_s = 30.0; // hard buffer cap
  double q_ref_s = 15.0;        // buffer level where up/down switches are equiprobable
  double alpha = 1.25;          // probe back-off factor, (1, 2]
  double delta_kbps = 32.0;     // probe increase floor
  double u0 = 0.5;              // smoothing weight midpoint
  double epsilon = 1.0;         // log-score offset, >= 1
  int n_min = 1;                // run-length sigmoid lower cut
  int n_max = 15;               // run-length sigmoid upper cut
  int n0 = 10;                  // run-length sigmoid midpoint (2*n_max/3, rounded)
  double tau_s = 2.0;           // segment playback duration

  void validate() const;  // throws ConfigError naming the bad field
};

struct SegmentSpec {
  double tau_s = 2.0;
  std::int64_t index = 0;
  double bitrate_kbps = 0.0;

  // Fluid model: no container overhead.
  double size_kilobits() const { return bitrate_kbps * tau_s; }
};

}  // namespace tfdash
