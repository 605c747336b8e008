// Acceptance suite: one check per shipping criterion, each printed as a
// single PASS/FAIL line. Exits nonzero if anything fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "tfdash/adapter.hpp"
#include "tfdash/metrics.hpp"
#include "tfdash/netsim.hpp"
#include "tfdash/prober.hpp"
#include "tfdash/report.hpp"
#include "tfdash/rng.hpp"
#include "tfdash/scenario.hpp"
#include "tfdash/sweep.hpp"

using namespace tfdash;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int failures = 0;
  std::string first_failure;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      ++failures;
      if (first_failure.empty()) first_failure = what;
    }
  }
};

int g_failed = 0;

void run_criterion(int number, const std::string& title,
                   const std::function<void(Criterion&)>& body,
                   double budget_s = 0.0) {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0.0 && elapsed > budget_s)
    c.expect(false, "runtime " + std::to_string(elapsed) + " s over budget " +
                        std::to_string(budget_s) + " s");
  if (c.failures == 0) {
    std::printf("PASS criterion %d: %s (%.2f s)\n", number, title.c_str(), elapsed);
  } else {
    ++g_failed;
    std::printf("FAIL criterion %d: %s (%.2f s) - %d check(s) failed; first: %s\n", number,
                title.c_str(), elapsed, c.failures, c.first_failure.c_str());
  }
  std::fflush(stdout);
}

ScenarioConfig load_bundled(const char* name) {
  return load_scenario((fs::path(TFDASH_SCENARIO_DIR) / name).string());
}

const std::vector<std::string> kBundled = {
    "two-client-3000-1500-4000.json", "rmcat.json", "single-client-10m.json",
    "staggered-rate-3000.json"};

// ---------------------------------------------------------------------------

void criterion1_formula_oracles(Criterion& c) {
  const BitrateLadder ladder;
  const PolicyParams p;
  RandomStream rng(1001);
  const auto& rates = ladder.rates();

  auto close = [](double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-30});
    return std::fabs(a - b) <= 1e-10 * scale;
  };

  for (int i = 0; i < 1000; ++i) {
    const double v = rates[rng.next_u64() % rates.size()];
    const double v_prev = rates[rng.next_u64() % rates.size()];
    const double q = rng.next_uniform(p.q_low_s, p.q_high_s);
    const int n = 1 + static_cast<int>(rng.next_u64() % 25);
    c.expect(close(candidate_score(v, v_prev, q, n, p, ladder),
                   oracle::candidate_score(v, v_prev, q, n, p, ladder)),
             "candidate_score diverges from the formula transcription");
  }

  for (int i = 0; i < 1000; ++i) {
    std::vector<double> window;
    const int len = 11 + static_cast<int>(rng.next_u64() % 5);
    for (int k = 0; k < len; ++k) window.push_back(rng.next_uniform(100, 6000));
    const auto got = instability(window, 10);
    c.expect(got.has_value() &&
                 close(got->value, oracle::instability_full_window(window, 10)),
             "instability diverges from the double-loop oracle");
  }

  for (int i = 0; i < 1000; ++i) {
    std::vector<double> xs;
    const int n = 2 + static_cast<int>(rng.next_u64() % 14);
    for (int k = 0; k < n; ++k) xs.push_back(rng.next_uniform(1, 9000));
    const auto got = jain_index(xs);
    c.expect(got.has_value() && close(*got, oracle::jain(xs)),
             "jain_index diverges from the direct formula");
  }

  for (int i = 0; i < 1000; ++i) {
    ProberState st{rng.next_uniform(0, 9000)};
    const double amended = rng.next_uniform(0, 9000);
    const double alpha = rng.next_uniform(1.01, 2.0);
    const double delta = rng.next_uniform(1, 200);
    const double expect = oracle::probe_step(st.probed_kbps, amended, alpha, delta);
    c.expect(close(probe_update(st, amended, alpha, delta), expect),
             "probe_update diverges from the recurrence oracle");
  }
}

void criterion2_limd_convergence(Criterion& c) {
  const double delta = 32.0, alpha = 1.25;
  for (double target : {500.0, 1500.0, 3000.0, 8000.0}) {
    ProberState st;
    const int bound = static_cast<int>(std::ceil(std::log2(target / (2 * delta)))) + 1;
    int steps = 0;
    while (target - st.probed_kbps > 2 * delta && steps <= bound + 1) {
      probe_update(st, target, alpha, delta);
      ++steps;
    }
    c.expect(steps <= bound, "gap not within 2*delta of " + std::to_string(target) +
                                 " after " + std::to_string(bound) + " increase steps");
    bool in_band = true;
    for (int k = 0; k < 200; ++k) {
      probe_update(st, target, alpha, delta);
      if (std::fabs(st.probed_kbps - target) > 2 * delta * alpha) in_band = false;
    }
    c.expect(in_band, "post-convergence probe left the 2*delta*alpha band");
  }

  // Joining client in the two-client scenario: its probe must be within
  // 2*delta of the 1500 kbps fair share inside six segments.
  ScenarioConfig cfg = load_bundled("two-client-3000-1500-4000.json");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cfg.seed = seed;
    const SessionLog log = run_scenario(cfg);
    const auto& recs = log.clients[1].records;  // the 50 s joiner
    int segments_to_converge = -1;
    for (std::size_t i = 0; i < recs.size() && i < 12; ++i) {
      if (std::fabs(recs[i].probed_kbps - 1500.0) <= 2 * delta + 1e-9) {
        segments_to_converge = static_cast<int>(i) + 1;
        break;
      }
    }
    c.expect(segments_to_converge > 0 && segments_to_converge <= 6,
             "joiner probe took " + std::to_string(segments_to_converge) +
                 " segments to reach the fair share (seed " + std::to_string(seed) + ")");
  }
}

void criterion3_no_underflow(Criterion& c) {
  ScenarioConfig cfg = load_bundled("two-client-3000-1500-4000.json");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cfg.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    const SessionLog log = run_scenario(cfg);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(elapsed < 5.0, "seed run exceeded 5 s");
    c.expect(log.total_underflows() == 0,
             "buffer underflow at seed " + std::to_string(seed));
    for (const auto& client : log.clients)
      for (const auto& r : client.records)
        c.expect(r.buffer_after_s >= 0.0 && r.buffer_after_s <= 30.0 + 1e-9,
                 "buffer sample outside [0, 30] at seed " + std::to_string(seed));
  }
}

void criterion4_no_off_invariant(Criterion& c) {
  for (const auto& name : kBundled) {
    ScenarioConfig cfg = load_bundled(name.c_str());
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      cfg.seed = seed;
      const SessionLog log = run_scenario(cfg);
      for (const auto& client : log.clients) {
        if (client.policy != "tfdash") continue;
        for (const auto& r : client.records)
          if (r.sleep_s > 0.0)
            c.expect(r.bitrate_kbps == cfg.ladder.max_rate(),
                     "OFF period below the top rate in " + name + " seed " +
                         std::to_string(seed));
      }
    }
  }
}

void criterion5_comparative_ordering(Criterion& c) {
  ScenarioConfig base;
  base.name = "sweep-base";
  base.horizon_s = 300;
  base.schedule = CapacitySchedule({{0, 3000}});
  base.clients = {{0, 0.0, "tfdash", {}, {}, {}, {}}, {1, 0.0, "tfdash", {}, {}, {}, {}}};

  SweepSpec spec;
  spec.client_counts = {2};
  for (int mbps = 2; mbps <= 10; ++mbps) spec.capacities_kbps.push_back(mbps * 1000.0);
  spec.policies = {"tfdash", "rate", "aimd"};
  for (std::uint64_t s = 0; s < 10; ++s) spec.seeds.push_back(s);

  const auto rows = run_sweep(base, spec, 4);

  std::map<std::pair<std::string, double>, SweepRow> by_cell;
  for (const auto& r : rows) by_cell[{r.policy, r.capacity_kbps}] = r;

  int unfair_wins = 0, instab_wins = 0, points = 0;
  for (double cap : spec.capacities_kbps) {
    ++points;
    const auto& tf = by_cell.at({"tfdash", cap});
    const auto& rt = by_cell.at({"rate", cap});
    const auto& ai = by_cell.at({"aimd", cap});
    if (tf.mean_unfairness && rt.mean_unfairness &&
        *tf.mean_unfairness <= *rt.mean_unfairness + 1e-12)
      ++unfair_wins;
    if (tf.mean_instability && ai.mean_instability &&
        *tf.mean_instability <= *ai.mean_instability + 1e-12)
      ++instab_wins;
  }
  c.expect(points == 9, "expected 9 capacity points");
  c.expect(unfair_wins >= 7, "tfdash unfairness beat the rate baseline at only " +
                                 std::to_string(unfair_wins) + "/9 capacities");
  c.expect(instab_wins >= 7, "tfdash instability beat the aimd baseline at only " +
                                 std::to_string(instab_wins) + "/9 capacities");
}

void criterion6_overestimation(Criterion& c) {
  const ScenarioConfig cfg = load_bundled("staggered-rate-3000.json");
  const SessionLog log = run_scenario(cfg);

  auto windows = [](const ClientSession& s) {
    std::vector<std::pair<double, double>> w;
    for (const auto& r : s.records) w.emplace_back(r.t_start_s, r.t_end_s);
    return w;
  };
  auto overlap = [](double a1, double a2, const std::vector<std::pair<double, double>>& ws) {
    double total = 0.0;
    for (const auto& [b1, b2] : ws) {
      const double lo = std::max(a1, b1), hi = std::min(a2, b2);
      if (hi > lo) total += hi - lo;
    }
    return total;
  };

  int solo_segments = 0;
  for (int i = 0; i < 2; ++i) {
    const auto other = windows(log.clients[1 - i]);
    for (const auto& r : log.clients[i].records) {
      const double solo = (r.t_end_s - r.t_start_s) - overlap(r.t_start_s, r.t_end_s, other);
      if (solo > 1e-9) {
        ++solo_segments;
        c.expect(r.measured_kbps >= 1500.0 - 1e-6,
                 "solo-window estimate below the fair share");
      }
    }
  }
  c.expect(solo_segments > 0, "no staggered ON periods emerged");
}

void criterion7_metric_identities(Criterion& c) {
  RandomStream rng(7001);
  for (int i = 0; i < 10000; ++i) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 12);

    // equal rates: zero unfairness
    std::vector<double> equal(n, rng.next_uniform(1, 9000));
    const auto uf = unfairness(equal);
    c.expect(uf.has_value() && std::fabs(*uf) < 1e-7, "unfairness(equal) != 0");

    // scale invariance
    std::vector<double> xs;
    for (int k = 0; k < n; ++k) xs.push_back(rng.next_uniform(0.01, 9000));
    const double scale = rng.next_uniform(0.1, 50);
    std::vector<double> ys = xs;
    for (double& y : ys) y *= scale;
    c.expect(std::fabs(*jain_index(xs) - *jain_index(ys)) <= 1e-12,
             "jain index not scale invariant");

    // perfect subscription: zero inefficiency
    double sum = 0.0;
    for (double x : xs) sum += x;
    c.expect(inefficiency(xs, sum) <= 1e-12, "inefficiency(perfect subscription) != 0");

    // constant window: zero instability
    std::vector<double> window(11, rng.next_uniform(100, 6000));
    const auto inst = instability(window, 10);
    c.expect(inst.has_value() && inst->value == 0.0, "instability(constant) != 0");
  }
}

void criterion8_determinism(Criterion& c) {
  for (const auto& name : kBundled) {
    ScenarioConfig cfg = load_bundled(name.c_str());
    SummarizeOptions opts;
    opts.strict_formulas = cfg.strict_formulas;

    std::ostringstream s1, s2, m1, m2;
    {
      const SessionLog log = run_scenario(cfg);
      const MetricsReport report = summarize(log, cfg.schedule, opts);
      write_sessions_csv(log, s1);
      write_metrics_csv(report, cfg.strict_formulas, m1);
    }
    {
      const SessionLog log = run_scenario(cfg);
      const MetricsReport report = summarize(log, cfg.schedule, opts);
      write_sessions_csv(log, s2);
      write_metrics_csv(report, cfg.strict_formulas, m2);
    }
    c.expect(s1.str() == s2.str(), "sessions.csv differs between runs of " + name);
    c.expect(m1.str() == m2.str(), "metrics.csv differs between runs of " + name);
  }
}

void criterion9_rmcat(Criterion& c) {
  ScenarioConfig cfg = load_bundled("rmcat.json");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cfg.seed = seed;
    const SessionLog log = run_scenario(cfg);
    c.expect(log.end_s == 125.0, "run did not reach the 125 s horizon");
    const double err = std::fabs(log.delivered_kb - log.busy_capacity_kb) /
                       std::max(log.busy_capacity_kb, 1.0);
    c.expect(err < 1e-6, "conservation error " + std::to_string(err));
    c.expect(log.total_underflows() == 0,
             "buffer underflow at seed " + std::to_string(seed));
    for (const auto& client : log.clients)
      for (const auto& r : client.records) {
        c.expect(r.buffer_after_s >= 0.0 && r.buffer_after_s <= 30.0 + 1e-9,
                 "buffer sample outside [0, 30]");
        if (r.sleep_s > 0.0)
          c.expect(r.bitrate_kbps == cfg.ladder.max_rate(),
                   "OFF period below the top rate");
      }
  }
}

}  // namespace

int main() {
  run_criterion(1, "formula-oracle equivalence", criterion1_formula_oracles, 10.0);
  run_criterion(2, "LIMD convergence", criterion2_limd_convergence);
  run_criterion(3, "no-underflow reproduction (two-client scenario)", criterion3_no_underflow,
                50.0);
  run_criterion(4, "no-OFF invariant across bundled scenarios", criterion4_no_off_invariant);
  run_criterion(5, "comparative ordering against the baselines", criterion5_comparative_ordering,
                120.0);
  run_criterion(6, "overestimation emergence under staggered ON periods",
                criterion6_overestimation);
  run_criterion(7, "metric identities", criterion7_metric_identities, 5.0);
  run_criterion(8, "byte-identical reruns of bundled scenarios", criterion8_determinism);
  run_criterion(9, "RMCAT pattern runs to horizon with conservation", criterion9_rmcat);

  if (g_failed > 0) {
    std::printf("%d criterion(s) failed\n", g_failed);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
