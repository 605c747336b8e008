#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tfdash/netsim.hpp"

namespace tfdash {

// Aggregate-rate gap from capacity: |1 - sum(v)/b|. Zero at perfect
// subscription. The `strict` variant evaluates the raw |sum(v)/b| form.
double inefficiency(const std::vector<double>& rates_kbps, double capacity_kbps);
double inefficiency_strict(const std::vector<double>& rates_kbps, double capacity_kbps);

struct InstabilityValue {
  double value = 0.0;
  bool partial = false;  // window shorter than d0+1 samples
};

// Weighted recent switch magnitude over one client's last d0 segments, with
// linear weights w(d) = d0 - d (most recent switch weighted most). The window
// is ordered oldest to newest. Fewer than two samples -> nullopt.
std::optional<InstabilityValue> instability(const std::vector<double>& window,
                                            int d0 = 10);

// Raw-form variant with w(d) = k - d, where k is the absolute index of the
// newest segment in the window.
std::optional<InstabilityValue> instability_strict(const std::vector<double>& window,
                                                   int d0, std::int64_t segment_index);

// Jain fairness index (sum x)^2 / (n * sum x^2), in [1/n, 1]. Undefined for
// empty or all-zero input. Throws std::invalid_argument on negative values.
std::optional<double> jain_index(const std::vector<double>& values);

// sqrt(1 - jain_index).
std::optional<double> unfairness(const std::vector<double>& values);

struct MetricsEpoch {
  double time_s = 0.0;
  int active_clients = 0;
  double capacity_kbps = 0.0;
  double aggregate_kbps = 0.0;
  std::optional<double> inefficiency;
  std::optional<double> unfairness;
  std::optional<double> instability;  // mean over clients with a defined window
  std::optional<double> inefficiency_strict;
  std::optional<double> instability_strict;
};

struct ClientMetrics {
  int client_id = 0;
  std::string policy;
  std::int64_t segments = 0;
  double mean_bitrate_kbps = 0.0;
  std::optional<double> mean_instability;
  int underflow_events = 0;
  int overflow_events = 0;
  double stall_s = 0.0;
};

struct MetricsReport {
  std::vector<MetricsEpoch> epochs;
  std::optional<double> mean_inefficiency;
  std::optional<double> mean_instability;
  std::optional<double> mean_unfairness;
  std::optional<double> mean_inefficiency_strict;
  std::optional<double> mean_instability_strict;
  std::vector<ClientMetrics> clients;
  int underflow_events = 0;
  int overflow_events = 0;
  double conservation_error = 0.0;
  double end_s = 0.0;
};

struct SummarizeOptions {
  int d0 = 10;
  bool strict_formulas = false;
};

// Samples the metric triple at every segment-completion epoch (each client
// contributing the bitrate it is pulling just after that instant) and
// time-weights the scalar aggregates: unfairness over windows with >= 2
// active clients, the others over windows with >= 1.
MetricsReport summarize(const SessionLog& log, const CapacitySchedule& schedule,
                        const SummarizeOptions& opts = {});

}  // namespace tfdash
