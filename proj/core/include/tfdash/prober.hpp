#pragma once

namespace tfdash {

/// Probed-bandwidth state for the logarithmic-increase / multiplicative-
/// decrease scheme. Starts at zero; the probe approaches the smoothed
/// estimate from below by halving the gap (never by less than delta), and
/// backs off proportionally once it overshoots.
struct ProberState {
  double probed_kbps = 0.0;
};

// One probe step against the current smoothed estimate. Fires once per
// completed segment, never mid-download. Result is clamped at zero.
double probe_update(ProberState& state, double amended_kbps, double alpha,
                    double delta_kbps);

}  // namespace tfdash
