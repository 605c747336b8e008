#include "tfdash/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "tfdash/errors.hpp"
#include "tfdash/metrics.hpp"
#include "tfdash/report.hpp"

namespace tfdash {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto pos = s.find(sep, start);
    if (pos == std::string::npos) pos = s.size();
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_num(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("sweep spec: bad number \"" + s + "\" in " + what);
  }
}

// "a..b[:step]" or "a,b,c"
std::vector<double> parse_list(const std::string& value, const std::string& what) {
  std::vector<double> out;
  if (auto dots = value.find(".."); dots != std::string::npos) {
    const double lo = parse_num(value.substr(0, dots), what);
    std::string rest = value.substr(dots + 2);
    double step = 1.0;
    if (auto colon = rest.find(':'); colon != std::string::npos) {
      step = parse_num(rest.substr(colon + 1), what);
      rest = rest.substr(0, colon);
    }
    const double hi = parse_num(rest, what);
    if (!(step > 0.0) || hi < lo)
      throw ParseError("sweep spec: bad range in " + what);
    for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
  } else {
    for (const auto& tok : split(value, ','))
      if (!trim(tok).empty()) out.push_back(parse_num(trim(tok), what));
  }
  if (out.empty()) throw ParseError("sweep spec: empty list in " + what);
  return out;
}

}  // namespace

SweepSpec parse_sweep_spec(const std::string& text) {
  SweepSpec spec;
  for (const auto& raw : split(text, ';')) {
    const std::string entry = trim(raw);
    if (entry.empty()) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw ParseError("sweep spec: expected key=value, got \"" + entry + "\"");
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    if (key == "clients") {
      for (double v : parse_list(value, key)) spec.client_counts.push_back(static_cast<int>(v));
    } else if (key == "capacities" || key == "capacity") {
      if (value.rfind("per-client:", 0) == 0) {
        spec.per_client_capacity = true;
        spec.per_client_kbps = parse_num(value.substr(11), key);
      } else {
        spec.capacities_kbps = parse_list(value, key);
      }
    } else if (key == "policies") {
      for (const auto& p : split(value, ','))
        if (!trim(p).empty()) spec.policies.push_back(trim(p));
    } else if (key == "seeds") {
      for (double v : parse_list(value, key))
        spec.seeds.push_back(static_cast<std::uint64_t>(v));
    } else if (key == "horizon") {
      spec.horizon_s = parse_num(value, key);
    } else if (key == "stagger") {
      spec.join_stagger_s = parse_num(value, key);
    } else {
      throw ParseError("sweep spec: unknown key \"" + key + "\"");
    }
  }
  return spec;
}

namespace {

struct Cell {
  std::string policy;
  int clients = 0;
  double capacity_kbps = 0.0;  // 0 = keep the base schedule
};

ScenarioConfig cell_scenario(const ScenarioConfig& base, const Cell& cell,
                             std::uint64_t seed, std::optional<double> horizon,
                             double join_stagger_s) {
  ScenarioConfig cfg = base;
  cfg.seed = seed;
  if (horizon) cfg.horizon_s = *horizon;
  if (cell.capacity_kbps > 0.0)
    cfg.schedule = CapacitySchedule({{0.0, cell.capacity_kbps}});
  cfg.clients.clear();
  const BaselineOptions baseline =
      base.clients.empty() ? BaselineOptions{} : base.clients.front().baseline;
  for (int i = 0; i < cell.clients; ++i) {
    ClientArrival a;
    a.client_id = i;
    a.join_s = join_stagger_s * i;
    a.policy = cell.policy;
    a.baseline = baseline;
    cfg.clients.push_back(std::move(a));
  }
  cfg.name = base.name + "-" + cell.policy + "-c" + std::to_string(cell.clients);
  return cfg;
}

}  // namespace

std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const SweepSpec& spec, int jobs) {
  base.validate();

  std::vector<int> clients = spec.client_counts;
  if (clients.empty()) clients = {static_cast<int>(base.clients.size())};
  std::vector<std::string> policies = spec.policies;
  if (policies.empty())
    policies = {base.clients.empty() ? std::string{"tfdash"} : base.clients.front().policy};
  std::vector<std::uint64_t> seeds = spec.seeds;
  if (seeds.empty()) seeds = {base.seed};

  std::vector<Cell> cells;
  for (const auto& policy : policies) {
    for (int n : clients) {
      if (n <= 0) throw ConfigError("sweep: client count must be > 0");
      if (spec.per_client_capacity) {
        cells.push_back({policy, n, spec.per_client_kbps * n});
      } else if (spec.capacities_kbps.empty()) {
        cells.push_back({policy, n, 0.0});
      } else {
        for (double cap : spec.capacities_kbps) cells.push_back({policy, n, cap});
      }
    }
  }

  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= cells.size()) break;
      const Cell& cell = cells[i];
      SweepRow row;
      row.policy = cell.policy;
      row.clients = cell.clients;
      row.capacity_kbps = cell.capacity_kbps > 0.0
                              ? cell.capacity_kbps
                              : base.schedule.integrate(0.0, base.horizon_s) / base.horizon_s;
      double sum_ineff = 0.0, sum_instab = 0.0, sum_unfair = 0.0, sum_rate = 0.0;
      int n_ineff = 0, n_instab = 0, n_unfair = 0;
      for (std::uint64_t seed : seeds) {
        const ScenarioConfig cfg =
            cell_scenario(base, cell, seed, spec.horizon_s, spec.join_stagger_s);
        const SessionLog log = run_scenario(cfg);
        const MetricsReport report = summarize(log, cfg.schedule);
        if (report.mean_inefficiency) {
          sum_ineff += *report.mean_inefficiency;
          ++n_ineff;
        }
        if (report.mean_instability) {
          sum_instab += *report.mean_instability;
          ++n_instab;
        }
        if (report.mean_unfairness) {
          sum_unfair += *report.mean_unfairness;
          ++n_unfair;
        }
        double rate = 0.0;
        for (const auto& c : report.clients) rate += c.mean_bitrate_kbps;
        if (!report.clients.empty()) sum_rate += rate / static_cast<double>(report.clients.size());
        row.underflow_events += report.underflow_events;
        row.overflow_events += report.overflow_events;
      }
      row.seeds = static_cast<int>(seeds.size());
      if (n_ineff > 0) row.mean_inefficiency = sum_ineff / n_ineff;
      if (n_instab > 0) row.mean_instability = sum_instab / n_instab;
      if (n_unfair > 0) row.mean_unfairness = sum_unfair / n_unfair;
      row.mean_bitrate_kbps = sum_rate / static_cast<double>(seeds.size());
      rows[i] = std::move(row);
    }
  };

  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

void write_comparison_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "policy,clients,capacity_kbps,seeds,mean_inefficiency,mean_instability,"
         "mean_unfairness,mean_bitrate_kbps,underflow_events,overflow_events\n";
  for (const auto& r : rows) {
    auto opt = [](const std::optional<double>& v) {
      return v ? format_double(*v) : std::string{};
    };
    out << r.policy << ',' << r.clients << ',' << format_double(r.capacity_kbps) << ','
        << r.seeds << ',' << opt(r.mean_inefficiency) << ',' << opt(r.mean_instability)
        << ',' << opt(r.mean_unfairness) << ',' << format_double(r.mean_bitrate_kbps)
        << ',' << r.underflow_events << ',' << r.overflow_events << '\n';
  }
}

}  // namespace tfdash
