#include "tfdash/adapter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tfdash/errors.hpp"

namespace tfdash {

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

double bounded_sigmoid(double x, double x_min, double x_max, double x0) {
  if (x < x_min) return 0.0;
  if (x > x_max) return 1.0;
  return 1.0 / (1.0 + std::exp(x0 - x));
}

double candidate_score(double v_kbps, double v_prev_kbps, double buffer_s,
                       int run_length, const PolicyParams& params,
                       const BitrateLadder& ladder) {
  if (!ladder.contains(v_kbps) || !ladder.contains(v_prev_kbps))
    throw std::invalid_argument("candidate_score: bitrate not in ladder");

  const double v_min = ladder.min_rate();
  const double v_max = ladder.max_rate();

  // Switch direction weighted by buffer occupancy: switch-up follows the
  // buffer sigmoid, switch-down its complement, keeping the rate averages
  // them (exactly 1/2).
  const double f_q = bounded_sigmoid(buffer_s, params.q_low_s, params.q_high_s, params.q_ref_s);
  const int s = sgn(v_kbps - v_prev_kbps);
  const double c1 = 0.5 * (1 + s) * f_q + 0.5 * (1 - s) * (1.0 - f_q);

  // Playback quality and switch amplitude, both log-scaled and normalized by
  // the ladder span. A single-rate ladder has zero span; both factors
  // degenerate to 1.
  const double span_log = std::log(v_max - v_min + params.epsilon);
  double c2 = 1.0;
  double c3 = 1.0;
  if (span_log > 0.0) {
    c2 = std::log(v_kbps - v_min + params.epsilon) / span_log;
    c3 = 1.0 - std::log(std::abs(v_kbps - v_prev_kbps) + params.epsilon) / span_log;
  }

  // Switch frequency: long runs at one rate make a switch cheaper.
  const double c4 = bounded_sigmoid(static_cast<double>(run_length),
                                    static_cast<double>(params.n_min),
                                    static_cast<double>(params.n_max),
                                    static_cast<double>(params.n0));
  return c1 * c2 * c3 * c4;
}

std::vector<double> candidate_rates(const BitrateLadder& ladder,
                                    double probed_kbps, double v_prev_kbps) {
  const auto bound = ladder.ceil_rate(probed_kbps);
  std::vector<double> out;
  out.reserve(ladder.size());
  for (double r : ladder.rates()) {
    // Every rate up to the first one at or above the probe; keeping the
    // current rate is always allowed even when the probe has dropped away.
    if (!bound || r <= *bound || r == v_prev_kbps) out.push_back(r);
  }
  return out;
}

std::vector<CandidateProbability> score_candidates(
    const BitrateLadder& ladder, double probed_kbps, double v_prev_kbps,
    double buffer_s, int run_length, const PolicyParams& params) {
  std::vector<CandidateProbability> out;
  const auto rates = candidate_rates(ladder, probed_kbps, v_prev_kbps);
  out.reserve(rates.size());
  double total = 0.0;
  for (double r : rates) {
    CandidateProbability c;
    c.bitrate_kbps = r;
    c.raw_score = candidate_score(r, v_prev_kbps, buffer_s, run_length, params, ladder);
    total += c.raw_score;
    out.push_back(c);
  }
  if (total > 0.0)
    for (auto& c : out) c.probability = c.raw_score / total;
  return out;
}

double probabilistic_select(ClientState& state, const PolicyParams& params,
                            const BitrateLadder& ladder, double probed_kbps) {
  auto candidates = score_candidates(ladder, probed_kbps, state.last_bitrate_kbps,
                                     state.buffer_s, state.run_length, params);

  // In-band switching is gradual: only the rungs adjacent to the current rate
  // stay in the draw (still bounded by the probe ceiling above). Deeper moves
  // are the threshold rules' job. Without this the log-scaled quality and
  // amplitude factors leave too much mass on far-away rungs and the selection
  // plunges several rungs at a time.
  {
    const auto& rates = ladder.rates();
    std::size_t prev_idx = 0;
    for (std::size_t i = 0; i < rates.size(); ++i)
      if (rates[i] == state.last_bitrate_kbps) prev_idx = i;
    const double lo = rates[prev_idx > 0 ? prev_idx - 1 : 0];
    const double hi = rates[std::min(prev_idx + 1, rates.size() - 1)];
    std::erase_if(candidates, [&](const CandidateProbability& c) {
      return c.bitrate_kbps < lo || c.bitrate_kbps > hi;
    });
    double total = 0.0;
    for (const auto& c : candidates) total += c.raw_score;
    for (auto& c : candidates) c.probability = total > 0.0 ? c.raw_score / total : 0.0;
  }

  double total = 0.0;
  for (const auto& c : candidates) total += c.raw_score;
  if (!(total > 0.0)) return state.last_bitrate_kbps;  // documented tie-break

  const double u_target = state.rng.next_unit();
  const double u_gate = state.rng.next_unit();

  double target = state.last_bitrate_kbps;
  double acc = 0.0;
  const CandidateProbability* last_positive = nullptr;
  for (const auto& c : candidates) {
    if (c.raw_score <= 0.0) continue;  // zero-score candidates are unreachable
    last_positive = &c;
    acc += c.probability;
    if (u_target < acc) {
      target = c.bitrate_kbps;
      last_positive = nullptr;
      break;
    }
  }
  if (last_positive) target = last_positive->bitrate_kbps;  // rounding guard

  if (target == state.last_bitrate_kbps) return target;

  // The switching-frequency factor gates whether the drawn switch is executed
  // this segment. Inside the normalized draw it cancels (it multiplies every
  // candidate alike), so applying it here is what makes a fresh run at one
  // rate hold for a while before the next switch.
  const double gate = bounded_sigmoid(static_cast<double>(state.run_length),
                                      static_cast<double>(params.n_min),
                                      static_cast<double>(params.n_max),
                                      static_cast<double>(params.n0));
  return (u_gate < gate) ? target : state.last_bitrate_kbps;
}

double threshold_select(double buffer_s, double amended_kbps,
                        const PolicyParams& params, const BitrateLadder& ladder) {
  // Strictly below / strictly above the estimate. The strict forms matter
  // when the estimate lands exactly on a ladder rate: picking that rate at a
  // low buffer would hold the buffer flat instead of refilling it.
  if (buffer_s < params.q_low_s) {
    const auto at_or_above = ladder.ceil_rate(amended_kbps);
    if (at_or_above && *at_or_above == amended_kbps) {
      const auto below = ladder.floor_rate(std::nextafter(amended_kbps, 0.0));
      return below.value_or(ladder.min_rate());
    }
    return ladder.floor_rate(amended_kbps).value_or(ladder.min_rate());
  }
  if (buffer_s > params.q_high_s) {
    const auto at_or_below = ladder.floor_rate(amended_kbps);
    if (at_or_below && *at_or_below == amended_kbps) {
      const auto above =
          ladder.ceil_rate(std::nextafter(amended_kbps, amended_kbps * 2.0 + 1.0));
      return above.value_or(ladder.max_rate());
    }
    return ladder.ceil_rate(amended_kbps).value_or(ladder.max_rate());
  }
  throw std::invalid_argument("threshold_select: buffer inside the dual-threshold band");
}

BufferAdvance advance_buffer(double q_start_s, double tau_s, double v_kbps,
                             double bw_kbps, double sleep_s, double q_cap_s) {
  if (!(bw_kbps > 0.0))
    throw StalledDownloadError("advance_buffer: zero bandwidth share for a full segment");
  const double raw = q_start_s + tau_s - (v_kbps / bw_kbps) * tau_s - sleep_s;
  BufferAdvance out;
  out.underflow = raw <= 0.0;
  out.overflow = raw > q_cap_s;
  out.buffer_s = std::clamp(raw, 0.0, q_cap_s);
  return out;
}

namespace {

// Idle time that parks the predicted post-download buffer exactly at the
// target; zero when the prediction stays below it.
double sleep_to_target(double buffer_s, double tau_s, double v_kbps,
                       double bw_kbps, double target_s) {
  const double predicted = buffer_s + tau_s * (1.0 - v_kbps / bw_kbps);
  return std::max(predicted - target_s, 0.0);
}

}  // namespace

AdaptationDecision TfdashPolicy::decide(ClientState& state, const PolicyParams& params,
                                        const BitrateLadder& ladder) {
  // Nothing measured yet: conservative startup at the lowest rate.
  if (!state.estimator.initialized) return {ladder.min_rate(), 0.0};

  const double amended = state.estimator.last_amended_kbps;
  double v;
  if (state.buffer_s < params.q_low_s || state.buffer_s > params.q_high_s)
    v = threshold_select(state.buffer_s, amended, params, ladder);
  else
    v = probabilistic_select(state, params, ladder, state.prober.probed_kbps);

  // OFF periods exist only at the top of the ladder: anywhere else the next
  // request goes out back to back.
  double sleep = 0.0;
  if (v == ladder.max_rate())
    sleep = sleep_to_target(state.buffer_s, params.tau_s, v, amended, params.q_max_buffer_s);
  return {v, sleep};
}

AdaptationDecision RateBaselinePolicy::decide(ClientState& state, const PolicyParams& params,
                                              const BitrateLadder& ladder) {
  if (!state.estimator.initialized) return {ladder.min_rate(), 0.0};
  // The naive client follows the raw per-segment throughput with a 0.9
  // safety margin and no smoothing at all; solo-window spikes move its rate
  // choices directly, which is the ON-OFF behavior this baseline stands for.
  const double measured = state.estimator.last_measured_kbps;
  const double v = ladder.floor_rate(0.9 * measured).value_or(ladder.min_rate());
  return {v, sleep_to_target(state.buffer_s, params.tau_s, v, measured, target_buffer_s_)};
}

AdaptationDecision AimdBaselinePolicy::decide(ClientState& state, const PolicyParams& params,
                                              const BitrateLadder& ladder) {
  if (!state.estimator.initialized) return {ladder.min_rate(), 0.0};
  const double measured = state.estimator.last_measured_kbps;
  if (probe_kbps_ < measured)
    probe_kbps_ += kappa_kbps_per_s_ * params.tau_s;
  else
    probe_kbps_ = measured * mu_;
  const double v = ladder.floor_rate(0.9 * probe_kbps_).value_or(ladder.min_rate());
  const double amended = state.estimator.last_amended_kbps;
  return {v, sleep_to_target(state.buffer_s, params.tau_s, v, amended, target_buffer_s_)};
}

AdaptationDecision FestiveLikePolicy::decide(ClientState& state, const PolicyParams& params,
                                             const BitrateLadder& ladder) {
  if (!state.estimator.initialized) return {ladder.min_rate(), 0.0};
  const double measured = state.estimator.last_measured_kbps;
  const double v = ladder.floor_rate(0.9 * measured).value_or(ladder.min_rate());
  const double target = target_buffer_s_ + state.rng.next_uniform(-jitter_s_, jitter_s_);
  return {v, sleep_to_target(state.buffer_s, params.tau_s, v, measured, target)};
}

std::unique_ptr<RatePolicy> make_policy(std::string_view name, const BaselineOptions& opts) {
  if (name == "tfdash") return std::make_unique<TfdashPolicy>();
  if (name == "rate") return std::make_unique<RateBaselinePolicy>(opts.rate_target_buffer_s);
  if (name == "aimd")
    return std::make_unique<AimdBaselinePolicy>(opts.aimd_kappa_kbps_per_s, opts.aimd_mu,
                                                opts.aimd_target_buffer_s);
  if (name == "festive-like")
    return std::make_unique<FestiveLikePolicy>(opts.festive_target_buffer_s,
                                               opts.festive_jitter_s);
  throw ConfigError("unknown policy \"" + std::string(name) +
                    "\" (expected tfdash | rate | aimd | festive-like)");
}

}  // namespace tfdash
