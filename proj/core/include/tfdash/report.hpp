#pragma once

#include <ostream>
#include <string>

#include "tfdash/metrics.hpp"
#include "tfdash/netsim.hpp"
#include "tfdash/scenario.hpp"

namespace tfdash {

// Shortest stable text form of a double ("%.10g"); empty string for absent
// optional values. All CSV output goes through this so repeated runs are
// byte-identical.
std::string format_double(double v);

void write_sessions_csv(const SessionLog& log, std::ostream& out);
void write_metrics_csv(const MetricsReport& report, bool strict, std::ostream& out);
void write_summary(const ScenarioConfig& config, const SessionLog& log,
                   const MetricsReport& report, std::ostream& out);

// Writes sessions.csv, metrics.csv and summary.txt into out_dir (created if
// missing). Returns the summary text.
std::string write_outputs(const ScenarioConfig& config, const SessionLog& log,
                          const MetricsReport& report, const std::string& out_dir);

}  // namespace tfdash
