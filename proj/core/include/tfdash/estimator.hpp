#pragma once

namespace tfdash {

/// Per-client throughput estimator state. `last_measured` is the most recent
/// raw segment throughput sample; `last_amended` is the adaptively smoothed
/// value used for rate decisions.
struct EstimatorState {
  double last_measured_kbps = 0.0;
  double last_amended_kbps = 0.0;
  bool initialized = false;
};

// Raw segment throughput: segment size divided by download time.
// Throws InvalidMeasurementError for non-positive durations or rates.
double measure_segment_bandwidth(double bitrate_kbps, double tau_s,
                                 double t_start_s, double t_end_s);

// Adaptive smoothing weight w = 1 / (1 + e^(u - u0)) with
// u = |measured - amended| / measured. Always in (0, 1): the larger the
// disagreement between sample and estimate, the more the history is trusted.
double smoothing_weight(double measured_kbps, double amended_kbps, double u0);

// Advances the smoothed estimate by one step and returns it. The weight is
// computed from the stored previous sample/estimate pair, so a fresh
// measurement only takes effect on the following update. The first
// measurement seeds the estimate directly.
double update_estimate(EstimatorState& state, double new_measurement_kbps, double u0);

}  // namespace tfdash
