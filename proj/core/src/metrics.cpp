#include "tfdash/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

namespace tfdash {

double inefficiency(const std::vector<double>& rates_kbps, double capacity_kbps) {
  if (!(capacity_kbps > 0.0)) throw std::invalid_argument("inefficiency: capacity must be > 0");
  double sum = 0.0;
  for (double v : rates_kbps) sum += v;
  return std::abs(1.0 - sum / capacity_kbps);
}

double inefficiency_strict(const std::vector<double>& rates_kbps, double capacity_kbps) {
  if (!(capacity_kbps > 0.0)) throw std::invalid_argument("inefficiency: capacity must be > 0");
  double sum = 0.0;
  for (double v : rates_kbps) sum += v;
  return std::abs(sum / capacity_kbps);
}

namespace {

// Shared switch-magnitude sum; the weight for lag d is supplied by w(d).
template <typename WeightFn>
std::optional<InstabilityValue> instability_impl(const std::vector<double>& window,
                                                 int d0, WeightFn w) {
  const int m = static_cast<int>(window.size());
  if (m < 2) return std::nullopt;
  const int depth = std::min(d0, m - 1);  // usable lags
  auto at_lag = [&](int d) { return window[m - 1 - d]; };
  double num = 0.0;
  for (int d = 0; d <= depth - 1; ++d)
    num += std::abs(at_lag(d) - at_lag(d + 1)) * w(d);
  double den = 0.0;
  for (int d = 1; d <= depth; ++d) den += at_lag(d) * w(d);
  InstabilityValue out;
  out.partial = m < d0 + 1;
  out.value = den > 0.0 ? num / den : 0.0;
  return out;
}

}  // namespace

std::optional<InstabilityValue> instability(const std::vector<double>& window, int d0) {
  return instability_impl(window, d0, [d0](int d) { return static_cast<double>(d0 - d); });
}

std::optional<InstabilityValue> instability_strict(const std::vector<double>& window,
                                                   int d0, std::int64_t segment_index) {
  return instability_impl(window, d0, [segment_index](int d) {
    return static_cast<double>(segment_index - d);
  });
}

std::optional<double> jain_index(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  double sum = 0.0, sum_sq = 0.0;
  for (double x : values) {
    if (x < 0.0) throw std::invalid_argument("jain_index: values must be >= 0");
    sum += x;
    sum_sq += x * x;
  }
  if (!(sum_sq > 0.0)) return std::nullopt;  // all zero
  return sum * sum / (static_cast<double>(values.size()) * sum_sq);
}

std::optional<double> unfairness(const std::vector<double>& values) {
  const auto jain = jain_index(values);
  if (!jain) return std::nullopt;
  return std::sqrt(std::max(1.0 - *jain, 0.0));
}

namespace {

// Bitrate a client is pulling just after time t: the segment in flight at t,
// or the most recently completed one while sleeping. nullopt before its first
// request reaches the log.
std::optional<double> rate_at(const ClientSession& session, double t) {
  const auto& recs = session.records;
  // first record with t_end > t
  auto it = std::upper_bound(recs.begin(), recs.end(), t,
                             [](double v, const SegmentRecord& r) { return v < r.t_end_s; });
  if (it != recs.end() && it->t_start_s <= t) return it->bitrate_kbps;
  if (it != recs.begin()) return (it - 1)->bitrate_kbps;  // sleeping / truncated
  return std::nullopt;
}

struct Accumulator {
  double weighted = 0.0;
  double weight = 0.0;
  void add(double v, double w) {
    weighted += v * w;
    weight += w;
  }
  std::optional<double> mean() const {
    if (weight <= 0.0) return std::nullopt;
    return weighted / weight;
  }
};

}  // namespace

MetricsReport summarize(const SessionLog& log, const CapacitySchedule& schedule,
                        const SummarizeOptions& opts) {
  MetricsReport report;
  report.end_s = log.end_s;
  report.underflow_events = log.total_underflows();
  report.overflow_events = log.total_overflows();
  report.conservation_error =
      log.busy_capacity_kb > 0.0
          ? std::abs(log.delivered_kb - log.busy_capacity_kb) / log.busy_capacity_kb
          : 0.0;

  const std::size_t n = log.clients.size();

  // Epochs: every completion instant across clients, in time order.
  std::vector<double> epochs;
  for (const auto& c : log.clients)
    for (const auto& r : c.records) epochs.push_back(r.t_end_s);
  std::sort(epochs.begin(), epochs.end());
  epochs.erase(std::unique(epochs.begin(), epochs.end()), epochs.end());

  // Rolling per-client instability (over each client's own completed
  // segments), advanced as the epoch sweep passes its completions.
  std::vector<std::size_t> next_record(n, 0);
  std::vector<std::deque<double>> history(n);
  std::vector<std::optional<InstabilityValue>> current(n);
  std::vector<std::optional<InstabilityValue>> current_strict(n);
  std::vector<Accumulator> client_instab(n);
  std::vector<double> client_instab_last_t(n, 0.0);

  Accumulator agg_ineff, agg_unfair, agg_instab, agg_ineff_strict, agg_instab_strict;

  for (std::size_t e = 0; e < epochs.size(); ++e) {
    const double t = epochs[e];
    const double t_next = (e + 1 < epochs.size()) ? epochs[e + 1] : log.end_s;
    const double span = std::max(t_next - t, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
      const auto& recs = log.clients[i].records;
      while (next_record[i] < recs.size() && recs[next_record[i]].t_end_s <= t) {
        const auto& r = recs[next_record[i]];
        // close out the previous value's holding interval
        if (current[i])
          client_instab[i].add(current[i]->value, r.t_end_s - client_instab_last_t[i]);
        history[i].push_back(r.bitrate_kbps);
        while (static_cast<int>(history[i].size()) > opts.d0 + 1) history[i].pop_front();
        std::vector<double> window(history[i].begin(), history[i].end());
        current[i] = instability(window, opts.d0);
        current_strict[i] = instability_strict(window, opts.d0, r.segment);
        client_instab_last_t[i] = r.t_end_s;
        ++next_record[i];
      }
    }

    MetricsEpoch row;
    row.time_s = t;
    row.capacity_kbps = schedule.capacity_at(t);

    std::vector<double> rates;
    double instab_sum = 0.0, instab_strict_sum = 0.0;
    int instab_count = 0, instab_strict_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = log.clients[i];
      if (c.join_s > t || t >= c.leave_s) continue;
      const auto rate = rate_at(c, t);
      if (!rate) continue;
      rates.push_back(*rate);
      if (current[i]) {
        instab_sum += current[i]->value;
        ++instab_count;
      }
      if (current_strict[i]) {
        instab_strict_sum += current_strict[i]->value;
        ++instab_strict_count;
      }
    }
    row.active_clients = static_cast<int>(rates.size());
    for (double r : rates) row.aggregate_kbps += r;
    if (!rates.empty()) {
      row.inefficiency = inefficiency(rates, row.capacity_kbps);
      if (opts.strict_formulas)
        row.inefficiency_strict = inefficiency_strict(rates, row.capacity_kbps);
    }
    if (rates.size() >= 2) row.unfairness = unfairness(rates);
    if (instab_count > 0) row.instability = instab_sum / instab_count;
    if (opts.strict_formulas && instab_strict_count > 0)
      row.instability_strict = instab_strict_sum / instab_strict_count;

    if (row.inefficiency) agg_ineff.add(*row.inefficiency, span);
    if (row.unfairness) agg_unfair.add(*row.unfairness, span);
    if (row.instability) agg_instab.add(*row.instability, span);
    if (row.inefficiency_strict) agg_ineff_strict.add(*row.inefficiency_strict, span);
    if (row.instability_strict) agg_instab_strict.add(*row.instability_strict, span);

    report.epochs.push_back(std::move(row));
  }

  report.mean_inefficiency = agg_ineff.mean();
  report.mean_unfairness = agg_unfair.mean();
  report.mean_instability = agg_instab.mean();
  if (opts.strict_formulas) {
    report.mean_inefficiency_strict = agg_ineff_strict.mean();
    report.mean_instability_strict = agg_instab_strict.mean();
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = log.clients[i];
    ClientMetrics cm;
    cm.client_id = c.client_id;
    cm.policy = c.policy;
    cm.segments = static_cast<std::int64_t>(c.records.size());
    if (!c.records.empty()) {
      double sum = 0.0;
      for (const auto& r : c.records) sum += r.bitrate_kbps;
      cm.mean_bitrate_kbps = sum / static_cast<double>(c.records.size());
    }
    // close the last holding interval at the client's leave time
    if (current[i])
      client_instab[i].add(current[i]->value,
                           std::max(c.leave_s - client_instab_last_t[i], 0.0));
    cm.mean_instability = client_instab[i].mean();
    cm.underflow_events = c.underflow_events;
    cm.overflow_events = c.overflow_events;
    cm.stall_s = c.stall_s;
    report.clients.push_back(std::move(cm));
  }
  return report;
}

}  // namespace tfdash
