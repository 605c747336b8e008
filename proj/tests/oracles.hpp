// Independent brute-force transcriptions of the scoring, probing and metric
// formulas, written directly from their closed forms and kept deliberately
// separate from the library implementation. Unit and acceptance tests compare
// the production code against these.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tfdash/ladder.hpp"
#include "tfdash/params.hpp"

namespace oracle {

inline double sigmoid_piecewise(double x, double lo, double hi, double mid) {
  if (x < lo) return 0.0;
  if (x > hi) return 1.0;
  return 1.0 / (1.0 + std::exp(mid - x));
}

// Direct evaluation of the four-factor switching probability.
inline double candidate_score(double v, double v_prev, double q, int n,
                              const tfdash::PolicyParams& p,
                              const tfdash::BitrateLadder& ladder) {
  const double vmin = ladder.rates().front();
  const double vmax = ladder.rates().back();

  double sign;
  if (v > v_prev)
    sign = 1.0;
  else if (v < v_prev)
    sign = -1.0;
  else
    sign = 0.0;

  const double f_q = sigmoid_piecewise(q, p.q_low_s, p.q_high_s, p.q_ref_s);
  const double c1 = (1.0 + sign) / 2.0 * f_q + (1.0 - sign) / 2.0 * (1.0 - f_q);
  const double c2 = std::log(v - vmin + p.epsilon) / std::log(vmax - vmin + p.epsilon);
  const double c3 =
      1.0 - std::log(std::fabs(v - v_prev) + p.epsilon) / std::log(vmax - vmin + p.epsilon);
  const double c4 = sigmoid_piecewise(n, p.n_min, p.n_max, p.n0);
  return c1 * c2 * c3 * c4;
}

// One probe step, written as the two-branch recurrence.
inline double probe_step(double probed, double amended, double alpha, double delta) {
  double next;
  if (probed < amended) {
    const double log_step = (amended - probed) / 2.0;
    next = probed + (log_step > delta ? log_step : delta);
  } else {
    next = probed + alpha * (amended - probed);
  }
  return next < 0.0 ? 0.0 : next;
}

// Weighted switch-magnitude sum via an explicit double loop.
// `window` is oldest..newest and must hold at least d0+1 samples.
inline double instability_full_window(const std::vector<double>& window, int d0) {
  const int m = static_cast<int>(window.size());
  double num = 0.0;
  for (int d = 0; d <= d0 - 1; ++d) {
    const double a = window[m - 1 - d];
    const double b = window[m - 1 - (d + 1)];
    num += std::fabs(a - b) * (d0 - d);
  }
  double den = 0.0;
  for (int d = 1; d <= d0; ++d) den += window[m - 1 - d] * (d0 - d);
  return num / den;
}

inline double jain(const std::vector<double>& xs) {
  double s = 0.0, s2 = 0.0;
  for (double x : xs) {
    s += x;
    s2 += x * x;
  }
  return s * s / (static_cast<double>(xs.size()) * s2);
}

}  // namespace oracle
