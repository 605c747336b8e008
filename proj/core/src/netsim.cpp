#include "tfdash/netsim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tfdash/errors.hpp"
#include "tfdash/estimator.hpp"
#include "tfdash/prober.hpp"
#include "tfdash/scenario.hpp"

namespace tfdash {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Event-time rounding produces sub-nanosecond dust in the fluid arithmetic;
// a deficit below this never counts as a playback stall.
constexpr double kStallTolerance_s = 1e-9;
}  // namespace

CapacitySchedule::CapacitySchedule(std::vector<std::pair<double, double>> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
  validate();
}

void CapacitySchedule::validate() const {
  if (breakpoints_.empty())
    throw ConfigError("capacity schedule: at least one breakpoint required");
  if (breakpoints_.front().first != 0.0)
    throw ConfigError("capacity schedule: first breakpoint must be at t=0");
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i].second > 0.0))
      throw ConfigError("capacity schedule: capacity at breakpoint " + std::to_string(i) +
                        " must be > 0");
    if (i > 0 && !(breakpoints_[i].first > breakpoints_[i - 1].first))
      throw ConfigError("capacity schedule: breakpoint times must be strictly increasing (index " +
                        std::to_string(i) + ")");
  }
}

double CapacitySchedule::capacity_at(double t_s) const {
  double c = breakpoints_.front().second;
  for (const auto& [t, cap] : breakpoints_) {
    if (t > t_s) break;
    c = cap;
  }
  return c;
}

double CapacitySchedule::integrate(double t1_s, double t2_s) const {
  if (t2_s <= t1_s) return 0.0;
  double total = 0.0;
  double t = t1_s;
  while (t < t2_s) {
    const auto next = next_change_after(t);
    const double piece_end = (next && *next < t2_s) ? *next : t2_s;
    total += capacity_at(t) * (piece_end - t);
    t = piece_end;
  }
  return total;
}

std::optional<double> CapacitySchedule::next_change_after(double t_s) const {
  for (const auto& [t, cap] : breakpoints_)
    if (t > t_s) return t;
  return std::nullopt;
}

CapacitySchedule load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("trace: cannot open " + path);
  std::vector<std::pair<double, double>> points;
  std::string line;
  int lineno = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double t = 0.0, c = 0.0;
    if (!(row >> t)) continue;  // blank line
    if (!(row >> c)) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw ParseError("trace: line " + std::to_string(lineno) + ": expected two columns");
    }
    std::string extra;
    if (row >> extra)
      throw ParseError("trace: line " + std::to_string(lineno) + ": trailing data \"" + extra + "\"");
    header_allowed = false;
    if (!(c > 0.0))
      throw ParseError("trace: line " + std::to_string(lineno) + ": capacity must be > 0");
    if (!points.empty() && !(t > points.back().first))
      throw ParseError("trace: line " + std::to_string(lineno) + ": time not increasing");
    points.emplace_back(t, c);
  }
  if (points.empty()) throw ParseError("trace: no data rows in " + path);
  return CapacitySchedule(std::move(points));
}

bool event_before(const SimEvent& a, const SimEvent& b) {
  if (a.time_s != b.time_s) return a.time_s < b.time_s;
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  return a.client_id < b.client_id;
}

int SessionLog::total_underflows() const {
  int n = 0;
  for (const auto& c : clients) n += c.underflow_events;
  return n;
}

int SessionLog::total_overflows() const {
  int n = 0;
  for (const auto& c : clients) n += c.overflow_events;
  return n;
}

double fair_share_progress(int active_flows, double capacity_kbps,
                           double t1_s, double t2_s) {
  if (active_flows <= 0) return 0.0;
  return capacity_kbps * (t2_s - t1_s) / active_flows;
}

double next_completion_time(double residual_kb, int active_flows,
                            const CapacitySchedule& schedule, double from_s) {
  if (residual_kb <= 0.0) return from_s;
  if (active_flows <= 0)
    throw StalledDownloadError("next_completion_time: no active flows");
  double t = from_s;
  double rem = residual_kb;
  while (true) {
    const double share = schedule.capacity_at(t) / active_flows;
    if (!(share > 0.0))
      throw HorizonError("next_completion_time: zero share, schedule exhausted");
    const auto next = schedule.next_change_after(t);
    if (!next) return t + rem / share;
    const double deliverable = share * (*next - t);
    if (deliverable >= rem) return t + rem / share;
    rem -= deliverable;
    t = *next;
  }
}

namespace {

struct Flow {
  enum class Phase { Pending, Downloading, Sleeping, Done };

  const ClientArrival* spec = nullptr;
  PolicyParams params;
  std::unique_ptr<RatePolicy> policy;
  ClientState state;
  ClientSession* session = nullptr;

  Phase phase = Phase::Pending;
  double inflight_bitrate_kbps = 0.0;
  double residual_kb = 0.0;
  double inflight_start_s = 0.0;
  double pending_bitrate_kbps = 0.0;  // decided, waiting for the sleep to end
  double pending_sleep_s = 0.0;       // sleep taken before the in-flight request
  double sleep_until_s = 0.0;
  bool playing = false;   // playback starts at the first completion
  double last_sync_s = 0.0;
  double pending_stall_s = 0.0;  // frozen time since the last record
  std::int64_t completed = 0;
};

// Lazily drains the playout buffer up to `t`. Stall time (buffer exhausted
// while playing) accumulates until the next record is cut.
void sync_buffer(Flow& f, double t) {
  const double dt = t - f.last_sync_s;
  f.last_sync_s = t;
  if (!f.playing || dt <= 0.0) return;
  const double deficit = dt - f.state.buffer_s;
  if (deficit > kStallTolerance_s) {
    f.pending_stall_s += deficit;
    f.state.buffer_s = 0.0;
  } else {
    f.state.buffer_s = std::max(f.state.buffer_s - dt, 0.0);
  }
}

}  // namespace

SessionLog run_scenario(const ScenarioConfig& config) {
  config.validate();
  const BitrateLadder& ladder = config.ladder;
  const CapacitySchedule& schedule = config.schedule;
  const double tau = config.tau_s;

  SessionLog log;
  log.schedule = schedule;
  log.clients.resize(config.clients.size());

  std::vector<Flow> flows(config.clients.size());
  for (std::size_t i = 0; i < config.clients.size(); ++i) {
    const ClientArrival& arrival = config.clients[i];
    Flow& f = flows[i];
    f.spec = &arrival;
    f.params = arrival.params.value_or(config.params);
    f.params.tau_s = tau;
    f.policy = make_policy(arrival.policy, arrival.baseline);
    f.state.rng = arrival.seed ? RandomStream(RandomStream::mix(*arrival.seed))
                               : RandomStream::for_client(config.seed, arrival.client_id);
    ClientSession& s = log.clients[i];
    s.client_id = arrival.client_id;
    s.policy = arrival.policy;
    s.join_s = arrival.join_s;
    f.session = &s;
  }

  double now = 0.0;
  int downloading = 0;

  auto start_download = [&](Flow& f, double t, double bitrate) {
    assert(ladder.contains(bitrate));
    f.phase = Flow::Phase::Downloading;
    f.inflight_bitrate_kbps = bitrate;
    f.residual_kb = bitrate * tau;
    f.inflight_start_s = t;
    ++downloading;
  };

  auto apply_decision = [&](Flow& f, double t, const AdaptationDecision& d) {
    f.pending_sleep_s = d.sleep_s;
    if (d.sleep_s > 0.0) {
      f.phase = Flow::Phase::Sleeping;
      f.sleep_until_s = t + d.sleep_s;
      f.pending_bitrate_kbps = d.bitrate_kbps;
    } else {
      start_download(f, t, d.bitrate_kbps);
    }
  };

  // Capacity and membership are constant between consecutive events, so each
  // advance is a single fair-share step.
  auto advance = [&](double to) {
    if (to <= now) return;
    if (downloading > 0) {
      const double c = schedule.capacity_at(now);
      const double share_kb = fair_share_progress(downloading, c, now, to);
      for (auto& f : flows)
        if (f.phase == Flow::Phase::Downloading) {
          f.residual_kb -= share_kb;
          log.delivered_kb += share_kb;
        }
      log.busy_capacity_kb += c * (to - now);
    }
  };

  while (true) {
    bool has_work = false;
    for (const auto& f : flows)
      if (f.phase != Flow::Phase::Done) has_work = true;
    if (!has_work) break;

    SimEvent best;
    bool have = false;
    auto consider = [&](SimEvent e) {
      if (!have || event_before(e, best)) {
        best = e;
        have = true;
      }
    };

    if (auto nc = schedule.next_change_after(now))
      consider({*nc, EventKind::CapacityChange, -1});
    for (auto& f : flows) {
      switch (f.phase) {
        case Flow::Phase::Pending:
          consider({std::max(f.spec->join_s, now), EventKind::ClientJoin, f.spec->client_id});
          break;
        case Flow::Phase::Downloading:
          consider({next_completion_time(f.residual_kb, downloading, schedule, now),
                    EventKind::SegmentComplete, f.spec->client_id});
          break;
        case Flow::Phase::Sleeping:
          consider({f.sleep_until_s, EventKind::SleepEnd, f.spec->client_id});
          break;
        case Flow::Phase::Done:
          break;
      }
    }
    assert(have);
    if (best.time_s > config.horizon_s) {
      // Truncate: the log covers [0, horizon]. In-flight work is abandoned.
      advance(config.horizon_s);
      now = config.horizon_s;
      break;
    }
    advance(best.time_s);
    now = best.time_s;

    auto flow_of = [&](int id) -> Flow& {
      for (auto& f : flows)
        if (f.spec->client_id == id) return f;
      throw SimError("event for unknown client");
    };

    switch (best.kind) {
      case EventKind::CapacityChange:
        break;  // shares are re-derived on the next iteration
      case EventKind::ClientJoin: {
        Flow& f = flow_of(best.client_id);
        f.last_sync_s = now;
        const AdaptationDecision d = f.policy->decide(f.state, f.params, ladder);
        apply_decision(f, now, d);
        break;
      }
      case EventKind::SleepEnd: {
        Flow& f = flow_of(best.client_id);
        start_download(f, now, f.pending_bitrate_kbps);
        break;
      }
      case EventKind::SegmentComplete: {
        Flow& f = flow_of(best.client_id);
        --downloading;
        const double t_start = f.inflight_start_s;
        const double v = f.inflight_bitrate_kbps;

        const double measured = measure_segment_bandwidth(v, tau, t_start, now);
        const double amended = update_estimate(f.state.estimator, measured, f.params.u0);
        const double probed =
            probe_update(f.state.prober, amended, f.params.alpha, f.params.delta_kbps);

        sync_buffer(f, now);
        double q = f.state.buffer_s + tau;
        if (q > f.params.q_max_buffer_s) {
          q = f.params.q_max_buffer_s;
          ++f.session->overflow_events;
        }
        f.state.buffer_s = q;
        if (!f.playing) f.playing = true;  // consumption starts now

        const bool under = f.pending_stall_s > 0.0;
        if (under) {
          ++f.session->underflow_events;
          f.session->stall_s += f.pending_stall_s;
          f.pending_stall_s = 0.0;
        }
        f.session->records.push_back({f.state.next_index, v, t_start, now,
                                      f.pending_sleep_s, q, measured, amended, probed,
                                      under});

        f.state.run_length = (f.state.last_bitrate_kbps == v) ? f.state.run_length + 1 : 1;
        f.state.last_bitrate_kbps = v;
        ++f.state.next_index;
        ++f.completed;

        if (f.spec->segments && f.completed >= *f.spec->segments) {
          f.phase = Flow::Phase::Done;  // client-finish: leaves the bottleneck
          f.session->leave_s = now;
        } else {
          const AdaptationDecision d = f.policy->decide(f.state, f.params, ladder);
          apply_decision(f, now, d);
        }
        break;
      }
      case EventKind::ClientFinish:
        break;  // folded into SegmentComplete
    }
  }

  log.end_s = now;
  log.total_capacity_kb = schedule.integrate(0.0, now);
  for (auto& f : flows) {
    if (f.phase != Flow::Phase::Done) f.session->leave_s = now;
    if (f.spec->segments && f.completed < *f.spec->segments)
      throw HorizonError("client " + std::to_string(f.spec->client_id) + ": only " +
                         std::to_string(f.completed) + " of " +
                         std::to_string(*f.spec->segments) +
                         " segments completed within the horizon");
  }
  return log;
}

}  // namespace tfdash
