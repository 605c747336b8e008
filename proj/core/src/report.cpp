#include "tfdash/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tfdash/errors.hpp"

namespace tfdash {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace {

std::string format_opt(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

}  // namespace

void write_sessions_csv(const SessionLog& log, std::ostream& out) {
  out << "client_id,policy,segment,bitrate_kbps,t_start_s,t_end_s,sleep_s,"
         "buffer_after_s,measured_kbps,amended_kbps,probed_kbps,underflow\n";
  for (const auto& c : log.clients) {
    for (const auto& r : c.records) {
      out << c.client_id << ',' << c.policy << ',' << r.segment << ','
          << format_double(r.bitrate_kbps) << ',' << format_double(r.t_start_s) << ','
          << format_double(r.t_end_s) << ',' << format_double(r.sleep_s) << ','
          << format_double(r.buffer_after_s) << ',' << format_double(r.measured_kbps)
          << ',' << format_double(r.amended_kbps) << ',' << format_double(r.probed_kbps)
          << ',' << (r.underflow ? 1 : 0) << '\n';
    }
  }
}

void write_metrics_csv(const MetricsReport& report, bool strict, std::ostream& out) {
  out << "time_s,active_clients,capacity_kbps,aggregate_kbps,inefficiency,"
         "unfairness,instability";
  if (strict) out << ",inefficiency_strict,instability_strict";
  out << '\n';
  for (const auto& e : report.epochs) {
    out << format_double(e.time_s) << ',' << e.active_clients << ','
        << format_double(e.capacity_kbps) << ',' << format_double(e.aggregate_kbps) << ','
        << format_opt(e.inefficiency) << ',' << format_opt(e.unfairness) << ','
        << format_opt(e.instability);
    if (strict) out << ',' << format_opt(e.inefficiency_strict) << ','
                    << format_opt(e.instability_strict);
    out << '\n';
  }
}

void write_summary(const ScenarioConfig& config, const SessionLog& log,
                   const MetricsReport& report, std::ostream& out) {
  out << "scenario=" << config.name << '\n';
  out << "seed=" << config.seed << '\n';
  out << "horizon_s=" << format_double(config.horizon_s) << '\n';
  out << "end_s=" << format_double(report.end_s) << '\n';
  out << "clients=" << log.clients.size() << '\n';
  out << "mean_inefficiency=" << format_opt(report.mean_inefficiency) << '\n';
  out << "mean_instability=" << format_opt(report.mean_instability) << '\n';
  out << "mean_unfairness=" << format_opt(report.mean_unfairness) << '\n';
  if (config.strict_formulas) {
    out << "mean_inefficiency_strict=" << format_opt(report.mean_inefficiency_strict) << '\n';
    out << "mean_instability_strict=" << format_opt(report.mean_instability_strict) << '\n';
  }
  out << "underflow_events=" << report.underflow_events << '\n';
  out << "overflow_events=" << report.overflow_events << '\n';
  out << "conservation_error=" << format_double(report.conservation_error) << '\n';
  for (const auto& c : report.clients) {
    const std::string key = "client." + std::to_string(c.client_id) + ".";
    out << key << "policy=" << c.policy << '\n';
    out << key << "segments=" << c.segments << '\n';
    out << key << "mean_bitrate_kbps=" << format_double(c.mean_bitrate_kbps) << '\n';
    out << key << "mean_instability=" << format_opt(c.mean_instability) << '\n';
    out << key << "underflow_events=" << c.underflow_events << '\n';
    out << key << "overflow_events=" << c.overflow_events << '\n';
    out << key << "stall_s=" << format_double(c.stall_s) << '\n';
  }
}

std::string write_outputs(const ScenarioConfig& config, const SessionLog& log,
                          const MetricsReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw SimError("cannot create output directory " + out_dir + ": " + ec.message());

  auto open = [&](const char* name) {
    std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
    if (!f) throw SimError(std::string("cannot write ") + name + " in " + out_dir);
    return f;
  };

  {
    auto f = open("sessions.csv");
    write_sessions_csv(log, f);
  }
  {
    auto f = open("metrics.csv");
    write_metrics_csv(report, config.strict_formulas, f);
  }
  std::ostringstream summary;
  write_summary(config, log, report, summary);
  {
    auto f = open("summary.txt");
    f << summary.str();
  }
  return summary.str();
}

}  // namespace tfdash
