#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfdash/ladder.hpp"
#include "tfdash/netsim.hpp"
#include "tfdash/params.hpp"

namespace tfdash {

/// Fully materialized scenario: ladder, segment duration, capacity schedule,
/// client arrivals and defaults. Loaded from a JSON config file; trace-backed
/// schedules are resolved at load time.
struct ScenarioConfig {
  std::string name = "scenario";
  double horizon_s = 0.0;
  std::uint64_t seed = 0;
  double tau_s = 2.0;
  BitrateLadder ladder;
  CapacitySchedule schedule;
  PolicyParams params;
  std::vector<ClientArrival> clients;
  bool strict_formulas = false;
  std::string out_dir;

  void validate() const;  // throws ConfigError naming the field
};

// Reads and validates a scenario config file. Trace paths are resolved
// relative to the config file's directory. Throws ParseError on malformed
// JSON, ConfigError on invariant violations.
ScenarioConfig load_scenario(const std::string& path);

ScenarioConfig scenario_from_json_text(const std::string& text,
                                       const std::string& base_dir = ".");

// Serializes the effective (fully defaulted) scenario; re-reading the output
// yields an identical scenario.
std::string scenario_to_json_text(const ScenarioConfig& config);

void save_scenario(const ScenarioConfig& config, const std::string& path);

}  // namespace tfdash
