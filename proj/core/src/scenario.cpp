#include "tfdash/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tfdash/errors.hpp"

namespace tfdash {

using nlohmann::json;

void PolicyParams::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("params." + msg); };
  if (!(q_low_s > 0.0)) fail("q_low_s: must be > 0");
  if (!(q_low_s < q_ref_s)) fail("q_ref_s: must satisfy q_low_s < q_ref_s");
  if (!(q_ref_s < q_high_s)) fail("q_high_s: must satisfy q_ref_s < q_high_s");
  if (!(q_high_s <= q_max_buffer_s)) fail("q_max_buffer_s: must be >= q_high_s");
  if (!(alpha > 1.0 && alpha <= 2.0)) fail("alpha: must be in (1, 2]");
  if (!(delta_kbps > 0.0)) fail("delta_kbps: must be > 0");
  if (!(epsilon >= 1.0)) fail("epsilon: must be >= 1");
  if (!(n_min >= 1)) fail("n_min: must be >= 1");
  if (!(n_min < n0)) fail("n0: must satisfy n_min < n0");
  if (!(n0 < n_max)) fail("n_max: must satisfy n0 < n_max");
  if (!(tau_s > 0.0)) fail("tau_s: must be > 0");
}

namespace {

void apply_params(const json& j, PolicyParams& p) {
  p.q_low_s = j.value("q_low_s", p.q_low_s);
  p.q_high_s = j.value("q_high_s", p.q_high_s);
  p.q_max_buffer_s = j.value("q_max_buffer_s", p.q_max_buffer_s);
  p.q_ref_s = j.value("q_ref_s", p.q_ref_s);
  p.alpha = j.value("alpha", p.alpha);
  p.delta_kbps = j.value("delta_kbps", p.delta_kbps);
  p.u0 = j.value("u0", p.u0);
  p.epsilon = j.value("epsilon", p.epsilon);
  p.n_min = j.value("n_min", p.n_min);
  p.n_max = j.value("n_max", p.n_max);
  p.n0 = j.value("n0", p.n0);
}

json params_to_json(const PolicyParams& p) {
  return json{{"q_low_s", p.q_low_s},
              {"q_high_s", p.q_high_s},
              {"q_max_buffer_s", p.q_max_buffer_s},
              {"q_ref_s", p.q_ref_s},
              {"alpha", p.alpha},
              {"delta_kbps", p.delta_kbps},
              {"u0", p.u0},
              {"epsilon", p.epsilon},
              {"n_min", p.n_min},
              {"n_max", p.n_max},
              {"n0", p.n0}};
}

void apply_baseline(const json& j, BaselineOptions& b) {
  b.rate_target_buffer_s = j.value("rate_target_buffer_s", b.rate_target_buffer_s);
  b.aimd_kappa_kbps_per_s = j.value("aimd_kappa_kbps_per_s", b.aimd_kappa_kbps_per_s);
  b.aimd_mu = j.value("aimd_mu", b.aimd_mu);
  b.aimd_target_buffer_s = j.value("aimd_target_buffer_s", b.aimd_target_buffer_s);
  b.festive_target_buffer_s = j.value("festive_target_buffer_s", b.festive_target_buffer_s);
  b.festive_jitter_s = j.value("festive_jitter_s", b.festive_jitter_s);
}

json baseline_to_json(const BaselineOptions& b) {
  return json{{"rate_target_buffer_s", b.rate_target_buffer_s},
              {"aimd_kappa_kbps_per_s", b.aimd_kappa_kbps_per_s},
              {"aimd_mu", b.aimd_mu},
              {"aimd_target_buffer_s", b.aimd_target_buffer_s},
              {"festive_target_buffer_s", b.festive_target_buffer_s},
              {"festive_jitter_s", b.festive_jitter_s}};
}

ScenarioConfig parse_scenario(const json& j, const std::string& base_dir) {
  ScenarioConfig cfg;
  cfg.name = j.value("name", cfg.name);
  cfg.horizon_s = j.value("horizon_s", 0.0);
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.tau_s = j.value("segment_duration_s", cfg.tau_s);
  cfg.strict_formulas = j.value("strict_formulas", false);
  cfg.out_dir = j.value("out_dir", std::string{});

  if (j.contains("ladder_kbps"))
    cfg.ladder = BitrateLadder(j.at("ladder_kbps").get<std::vector<double>>());

  if (j.contains("params")) apply_params(j.at("params"), cfg.params);
  cfg.params.tau_s = cfg.tau_s;

  if (!j.contains("capacity")) throw ConfigError("capacity: section is required");
  const json& cap = j.at("capacity");
  if (cap.contains("trace")) {
    const std::filesystem::path p = cap.at("trace").get<std::string>();
    const auto resolved = p.is_absolute() ? p : std::filesystem::path(base_dir) / p;
    cfg.schedule = load_trace(resolved.string());
  } else if (cap.contains("breakpoints")) {
    std::vector<std::pair<double, double>> points;
    for (const auto& bp : cap.at("breakpoints"))
      points.emplace_back(bp.at(0).get<double>(), bp.at(1).get<double>());
    cfg.schedule = CapacitySchedule(std::move(points));
  } else {
    throw ConfigError("capacity: expected \"breakpoints\" or \"trace\"");
  }

  if (!j.contains("clients")) throw ConfigError("clients: section is required");
  for (const auto& cj : j.at("clients")) {
    ClientArrival a;
    a.client_id = cj.at("id").get<int>();
    a.join_s = cj.value("join_s", 0.0);
    a.policy = cj.value("policy", std::string{"tfdash"});
    if (cj.contains("segments")) a.segments = cj.at("segments").get<std::int64_t>();
    if (cj.contains("seed")) a.seed = cj.at("seed").get<std::uint64_t>();
    if (cj.contains("params")) {
      PolicyParams p = cfg.params;
      apply_params(cj.at("params"), p);
      p.tau_s = cfg.tau_s;
      a.params = p;
    }
    if (cj.contains("baseline")) apply_baseline(cj.at("baseline"), a.baseline);
    cfg.clients.push_back(std::move(a));
  }
  return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["horizon_s"] = cfg.horizon_s;
  j["seed"] = cfg.seed;
  j["segment_duration_s"] = cfg.tau_s;
  j["ladder_kbps"] = cfg.ladder.rates();
  j["params"] = params_to_json(cfg.params);
  json points = json::array();
  for (const auto& [t, c] : cfg.schedule.breakpoints()) points.push_back({t, c});
  j["capacity"] = json{{"breakpoints", points}};
  j["strict_formulas"] = cfg.strict_formulas;
  if (!cfg.out_dir.empty()) j["out_dir"] = cfg.out_dir;
  json clients = json::array();
  for (const auto& a : cfg.clients) {
    json cj;
    cj["id"] = a.client_id;
    cj["join_s"] = a.join_s;
    cj["policy"] = a.policy;
    if (a.segments) cj["segments"] = *a.segments;
    if (a.seed) cj["seed"] = *a.seed;
    if (a.params) cj["params"] = params_to_json(*a.params);
    cj["baseline"] = baseline_to_json(a.baseline);
    clients.push_back(std::move(cj));
  }
  j["clients"] = clients;
  return j;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!(horizon_s > 0.0)) throw ConfigError("horizon_s: must be > 0");
  if (!(tau_s > 0.0)) throw ConfigError("segment_duration_s: must be > 0");
  schedule.validate();
  params.validate();
  if (clients.empty()) throw ConfigError("clients: at least one client required");
  std::set<int> ids;
  for (const auto& a : clients) {
    const std::string who = "clients[" + std::to_string(a.client_id) + "]";
    if (!ids.insert(a.client_id).second) throw ConfigError(who + ".id: duplicate client id");
    if (a.join_s < 0.0) throw ConfigError(who + ".join_s: must be >= 0");
    if (a.segments && *a.segments <= 0) throw ConfigError(who + ".segments: must be > 0");
    make_policy(a.policy, a.baseline);  // rejects unknown names
    if (a.params) a.params->validate();
  }
}

ScenarioConfig scenario_from_json_text(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario config: ") + e.what());
  }
  try {
    return parse_scenario(j, base_dir);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario config: ") + e.what());
  }
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("scenario config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  ScenarioConfig cfg = scenario_from_json_text(buf.str(), dir.empty() ? "." : dir.string());
  if (cfg.name == "scenario") cfg.name = std::filesystem::path(path).stem().string();
  return cfg;
}

std::string scenario_to_json_text(const ScenarioConfig& config) {
  return scenario_to_json(config).dump(2) + "\n";
}

void save_scenario(const ScenarioConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("scenario config: cannot write " + path);
  out << scenario_to_json_text(config);
}

}  // namespace tfdash
