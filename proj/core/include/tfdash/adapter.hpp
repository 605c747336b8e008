#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "tfdash/client_state.hpp"
#include "tfdash/ladder.hpp"
#include "tfdash/params.hpp"

namespace tfdash {

/// Outcome of one rate decision: the bitrate for the next segment (always a
/// ladder member) and an optional idle period before the request is issued.
struct AdaptationDecision {
  double bitrate_kbps = 0.0;
  double sleep_s = 0.0;
};

struct CandidateProbability {
  double bitrate_kbps = 0.0;
  double raw_score = 0.0;    // product of the four scoring factors
  double probability = 0.0;  // raw score normalized over the candidate set
};

int sgn(double x);

// Saturating sigmoid: 0 below x_min, 1 above x_max, 1/(1+e^(x0-x)) between.
double bounded_sigmoid(double x, double x_min, double x_max, double x0);

// Joint switching score for one candidate bitrate given the previous bitrate,
// buffer level and current run length. Factors: buffer-biased switch
// direction, playback quality, switch amplitude, switch frequency. Always in
// [0, 1]. Throws std::invalid_argument if either bitrate is not in the ladder.
double candidate_score(double v_kbps, double v_prev_kbps, double buffer_s,
                       int run_length, const PolicyParams& params,
                       const BitrateLadder& ladder);

// Candidate set for probabilistic selection: every ladder rate up to and
// including the first rate at or above the probed bandwidth, plus the
// previous bitrate (so keeping the current rate is always possible).
std::vector<double> candidate_rates(const BitrateLadder& ladder,
                                    double probed_kbps, double v_prev_kbps);

// Scores the candidate set and normalizes to a distribution. If every raw
// score is zero the probabilities are left at zero.
std::vector<CandidateProbability> score_candidates(
    const BitrateLadder& ladder, double probed_kbps, double v_prev_kbps,
    double buffer_s, int run_length, const PolicyParams& params);

// Draws a target candidate from the normalized score distribution with the
// client's random stream; a drawn switch is then executed with probability
// equal to the run-length sigmoid (which cancels inside the normalized draw),
// so rates hold for a stretch after every switch. Candidates with zero score
// are never switched to; if all scores are zero the previous bitrate is kept.
double probabilistic_select(ClientState& state, const PolicyParams& params,
                            const BitrateLadder& ladder, double probed_kbps);

// Out-of-band selection: below the low threshold pick the largest rate not
// above the estimate (falling back to the minimum rate), above the high
// threshold pick the smallest rate not below it (falling back to the maximum).
double threshold_select(double buffer_s, double amended_kbps,
                        const PolicyParams& params, const BitrateLadder& ladder);

struct BufferAdvance {
  double buffer_s = 0.0;
  bool underflow = false;  // the un-clamped value hit zero: playback froze
  bool overflow = false;   // the un-clamped value exceeded the cap
};

// One segment's worth of buffered-video-time evolution:
// q + tau - (v/bw)*tau - sleep, clamped to [0, cap]. Callers must log the
// underflow/overflow flags; clamping is never silent.
BufferAdvance advance_buffer(double q_start_s, double tau_s, double v_kbps,
                             double bw_kbps, double sleep_s, double q_cap_s);

/// A per-client rate-adaptation policy. One instance per client;
/// single-writer, stateful.
class RatePolicy {
 public:
  virtual ~RatePolicy() = default;
  virtual AdaptationDecision decide(ClientState& state, const PolicyParams& params,
                                    const BitrateLadder& ladder) = 0;
  virtual std::string_view name() const = 0;
};

/// Dual-threshold, probability-driven policy. Outside the threshold band the
/// decision is the deterministic floor/ceiling rule on the smoothed estimate;
/// inside it a candidate is drawn from the score distribution bounded by the
/// probed bandwidth. Sleeps only when the top ladder rate is selected and one
/// more back-to-back segment would overrun the buffer cap; the sleep length
/// is chosen so the predicted post-download buffer lands exactly at the cap.
class TfdashPolicy final : public RatePolicy {
 public:
  AdaptationDecision decide(ClientState& state, const PolicyParams& params,
                            const BitrateLadder& ladder) override;
  std::string_view name() const override { return "tfdash"; }
};

/// Naive bandwidth-following baseline (approximation, not a faithful
/// reimplementation of any published client): floor of 0.9x the smoothed
/// estimate, sleeping whenever the predicted buffer would exceed a fixed
/// target. Kept deliberately simple to exhibit the ON-OFF estimation
/// pathology.
class RateBaselinePolicy final : public RatePolicy {
 public:
  explicit RateBaselinePolicy(double target_buffer_s = 15.0)
      : target_buffer_s_(target_buffer_s) {}
  AdaptationDecision decide(ClientState& state, const PolicyParams& params,
                            const BitrateLadder& ladder) override;
  std::string_view name() const override { return "rate"; }

 private:
  double target_buffer_s_;
};

/// Additive-increase multiplicative-decrease probing baseline (approximation):
/// its own probe ramps by kappa*tau per segment while below the measured
/// throughput and clips to mu times it otherwise; selects the floor of 0.9x
/// the probe and sleeps to hold the buffer near a fixed target.
class AimdBaselinePolicy final : public RatePolicy {
 public:
  AimdBaselinePolicy(double kappa_kbps_per_s = 70.0, double mu = 0.85,
                     double target_buffer_s = 20.0)
      : kappa_kbps_per_s_(kappa_kbps_per_s), mu_(mu), target_buffer_s_(target_buffer_s) {}
  AdaptationDecision decide(ClientState& state, const PolicyParams& params,
                            const BitrateLadder& ladder) override;
  std::string_view name() const override { return "aimd"; }
  double probe_kbps() const { return probe_kbps_; }

 private:
  double kappa_kbps_per_s_;
  double mu_;
  double target_buffer_s_;
  double probe_kbps_ = 0.0;
};

/// Randomized-target baseline (approximation): same selection as the rate
/// baseline, but the sleep target is jittered uniformly per request.
class FestiveLikePolicy final : public RatePolicy {
 public:
  FestiveLikePolicy(double target_buffer_s = 15.0, double jitter_s = 2.0)
      : target_buffer_s_(target_buffer_s), jitter_s_(jitter_s) {}
  AdaptationDecision decide(ClientState& state, const PolicyParams& params,
                            const BitrateLadder& ladder) override;
  std::string_view name() const override { return "festive-like"; }

 private:
  double target_buffer_s_;
  double jitter_s_;
};

struct BaselineOptions {
  double rate_target_buffer_s = 15.0;
  double aimd_kappa_kbps_per_s = 70.0;
  double aimd_mu = 0.85;
  double aimd_target_buffer_s = 20.0;
  double festive_target_buffer_s = 15.0;
  double festive_jitter_s = 2.0;
};

// Policy factory keyed by the scenario-config policy names:
// "tfdash" | "rate" | "aimd" | "festive-like". Throws ConfigError otherwise.
std::unique_ptr<RatePolicy> make_policy(std::string_view name,
                                        const BaselineOptions& opts = {});

}  // namespace tfdash
