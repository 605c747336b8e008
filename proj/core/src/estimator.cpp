#include "tfdash/estimator.hpp"

#include <cmath>

#include "tfdash/errors.hpp"

namespace tfdash {

double measure_segment_bandwidth(double bitrate_kbps, double tau_s,
                                 double t_start_s, double t_end_s) {
  const double duration = t_end_s - t_start_s;
  if (!(duration > 0.0))
    throw InvalidMeasurementError("segment download duration must be positive");
  if (!(bitrate_kbps > 0.0) || !(tau_s > 0.0))
    throw InvalidMeasurementError("segment bitrate and duration must be positive");
  return bitrate_kbps * tau_s / duration;
}

double smoothing_weight(double measured_kbps, double amended_kbps, double u0) {
  if (!(measured_kbps > 0.0))
    throw InvalidMeasurementError("smoothing weight needs a positive measurement");
  const double u = std::abs(measured_kbps - amended_kbps) / measured_kbps;
  return 1.0 / (1.0 + std::exp(u - u0));
}

double update_estimate(EstimatorState& state, double new_measurement_kbps, double u0) {
  if (!(new_measurement_kbps > 0.0))
    throw InvalidMeasurementError("bandwidth measurement must be positive");
  if (!state.initialized) {
    state.last_measured_kbps = new_measurement_kbps;
    state.last_amended_kbps = new_measurement_kbps;
    state.initialized = true;
    return new_measurement_kbps;
  }
  // Convex blend of the stored pair; the fresh sample is stored for the next
  // step only.
  const double w = smoothing_weight(state.last_measured_kbps, state.last_amended_kbps, u0);
  const double amended = w * state.last_measured_kbps + (1.0 - w) * state.last_amended_kbps;
  state.last_amended_kbps = amended;
  state.last_measured_kbps = new_measurement_kbps;
  return amended;
}

}  // namespace tfdash
