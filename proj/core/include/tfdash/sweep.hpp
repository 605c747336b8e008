#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tfdash/scenario.hpp"

namespace tfdash {

/// Scenario grid: client counts x capacities x policies, averaged over seeds.
/// `per_client_capacity` scales the bottleneck with the client count instead
/// of using a fixed capacity list. Generated cells stagger client joins by
/// `join_stagger_s` each; simultaneous joins would keep deterministic
/// policies in permanent lockstep, which no real deployment exhibits.
struct SweepSpec {
  std::vector<int> client_counts;
  std::vector<double> capacities_kbps;
  bool per_client_capacity = false;
  double per_client_kbps = 0.0;
  std::vector<std::string> policies;
  std::vector<std::uint64_t> seeds;
  std::optional<double> horizon_s;
  double join_stagger_s = 10.0;

  bool empty() const {
    return client_counts.empty() && capacities_kbps.empty() && !per_client_capacity &&
           policies.empty() && seeds.empty() && !horizon_s;
  }
};

// Grammar (semicolon-separated entries):
//   clients=2..15 | clients=2,4,8
//   capacities=2000..10000:1000 | capacities=3000,6000 | capacities=per-client:1000
//   policies=tfdash,rate,aimd
//   seeds=0..9
//   horizon=300
//   stagger=10
// Throws ParseError on anything else.
SweepSpec parse_sweep_spec(const std::string& text);

struct SweepRow {
  std::string policy;
  int clients = 0;
  double capacity_kbps = 0.0;
  int seeds = 0;
  std::optional<double> mean_inefficiency;
  std::optional<double> mean_instability;
  std::optional<double> mean_unfairness;
  double mean_bitrate_kbps = 0.0;
  int underflow_events = 0;
  int overflow_events = 0;
};

// Runs every cell of the grid (cells are independent scenario runs and may
// execute on up to `jobs` threads; row order is deterministic regardless).
// Missing dimensions fall back to the base config's values.
std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const SweepSpec& spec,
                                int jobs = 1);

void write_comparison_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace tfdash
