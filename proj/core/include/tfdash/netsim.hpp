#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tfdash/adapter.hpp"
#include "tfdash/params.hpp"

namespace tfdash {

struct ScenarioConfig;

/// Piecewise-constant bottleneck capacity over time. Right-continuous; the
/// last piece extends to infinity. First breakpoint must sit at t = 0 and
/// capacities must be positive.
class CapacitySchedule {
 public:
  CapacitySchedule() = default;  // empty; validate() rejects it
  explicit CapacitySchedule(std::vector<std::pair<double, double>> breakpoints);

  void validate() const;  // throws ConfigError

  double capacity_at(double t_s) const;
  // Integral of capacity over [t1, t2], in kilobits.
  double integrate(double t1_s, double t2_s) const;
  std::optional<double> next_change_after(double t_s) const;

  const std::vector<std::pair<double, double>>& breakpoints() const {
    return breakpoints_;
  }

 private:
  std::vector<std::pair<double, double>> breakpoints_;
};

// Two-column text trace (time_s, capacity_kbps), comma or whitespace
// separated, '#' comments and an optional header line allowed. Throws
// ParseError (with line number) on malformed rows, non-monotone times or
// non-positive capacities.
CapacitySchedule load_trace(const std::string& path);

/// One client entering the scenario. A client without a segment budget keeps
/// streaming until the horizon; a client with one leaves once it has
/// downloaded that many segments, and the run fails with HorizonError if the
/// horizon cuts it short.
struct ClientArrival {
  int client_id = 0;
  double join_s = 0.0;
  std::string policy = "tfdash";
  std::optional<std::int64_t> segments;
  std::optional<PolicyParams> params;      // overrides the scenario defaults
  std::optional<std::uint64_t> seed;       // overrides the derived stream seed
  BaselineOptions baseline;
};

enum class EventKind {
  CapacityChange = 0,
  ClientJoin = 1,
  SegmentComplete = 2,
  SleepEnd = 3,
  ClientFinish = 4,
};

struct SimEvent {
  double time_s = 0.0;
  EventKind kind = EventKind::CapacityChange;
  int client_id = -1;
};

// Deterministic total order: time, then kind priority (capacity-change <
// client-join < segment-complete < sleep-end), then client id.
bool event_before(const SimEvent& a, const SimEvent& b);

struct SegmentRecord {
  std::int64_t segment = 0;
  double bitrate_kbps = 0.0;
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  double sleep_s = 0.0;        // idle time inserted before this request
  double buffer_after_s = 0.0; // buffered video time right after completion
  double measured_kbps = 0.0;  // raw segment throughput
  double amended_kbps = 0.0;   // smoothed estimate after this completion
  double probed_kbps = 0.0;    // probed bandwidth after this completion
  bool underflow = false;      // playback froze while this segment was pending
};

struct ClientSession {
  int client_id = 0;
  std::string policy;
  double join_s = 0.0;
  double leave_s = 0.0;
  std::vector<SegmentRecord> records;
  int underflow_events = 0;
  int overflow_events = 0;
  double stall_s = 0.0;  // total frozen playback time
};

/// Complete run output: per-client per-segment records plus the capacity
/// timeline and conservation counters for auditing the fluid model.
struct SessionLog {
  std::vector<ClientSession> clients;
  CapacitySchedule schedule;
  double end_s = 0.0;
  double delivered_kb = 0.0;       // total bits handed to flows
  double busy_capacity_kb = 0.0;   // integral of capacity while >=1 flow active
  double total_capacity_kb = 0.0;  // integral of capacity over the whole run

  int total_underflows() const;
  int total_overflows() const;
};

// Fluid fair share: each of the active flows receives capacity/(flow count)
// over the interval. Capacity and membership must be constant on it.
double fair_share_progress(int active_flows, double capacity_kbps,
                           double t1_s, double t2_s);

// Earliest time at which a flow with the given residual finishes, integrating
// its fair share across capacity breakpoints from `from_s`, assuming the
// active set stays fixed. Closed form within each constant piece.
double next_completion_time(double residual_kb, int active_flows,
                            const CapacitySchedule& schedule, double from_s);

// Runs the full discrete-event scenario and returns the session log.
// Deterministic: identical config and seed produce identical logs.
SessionLog run_scenario(const ScenarioConfig& config);

}  // namespace tfdash
