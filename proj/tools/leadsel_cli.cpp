// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// leadsel: stability, coherence, and leader selection for m-th order
// leader-follower consensus networks.
//
// Exit codes: 0 success, 1 usage, 2 input/config, 3 unstable-system verdict.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include "leadsel/experiment.hpp"
#include "leadsel/leadsel.hpp"

namespace {

using leadsel::Error;
using leadsel::ErrorCode;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitUnstable = 3;

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string out_dir;
  // Empty: each command's native format (JSON reports, CSV trajectories).
  std::string format;
};

struct SystemOptions {
  std::string graph_path;
  int order = 2;
  std::vector<double> gains;
  bool auto_gains = false;
  std::string leaders;
};

void add_system_options(CLI::App* cmd, SystemOptions& o, bool need_leaders) {
  cmd->add_option("graph", o.graph_path, "Graph JSON file")->required();
  cmd->add_option("--order,-m", o.order, "System order m (1..4)")->required();
  auto* gains = cmd->add_option("--gains", o.gains, "Gains a1,...,am")->delimiter(',');
  auto* autog = cmd->add_flag("--auto-gains", o.auto_gains, "Derive gains from the graph");
  gains->excludes(autog);
  auto* leaders = cmd->add_option("--leaders", o.leaders, "Leader labels, comma separated");
  if (need_leaders) leaders->required();
}

struct LoadedSystem {
  leadsel::GraphFile file;
  leadsel::GainVector gains;
};

LoadedSystem load_system(const SystemOptions& o) {
  LoadedSystem s{leadsel::read_graph(o.graph_path), {}};
  if (o.auto_gains) {
    s.gains = leadsel::auto_gains(s.file.graph, s.file.kappa, o.order);
  } else {
    if (static_cast<int>(o.gains.size()) != o.order) {
      throw Error(ErrorCode::kInvalidGains, "--gains must list exactly m values (or use --auto-gains)");
    }
    s.gains = leadsel::GainVector(o.gains);
  }
  return s;
}

leadsel::LeaderSet parse_leaders(const std::string& text, const leadsel::GraphFile& file) {
  std::vector<leadsel::NodeId> ids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    long long label = 0;
    try {
      std::size_t used = 0;
      label = std::stoll(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError, "bad leader label '" + item + "'");
    }
    const auto base = static_cast<long long>(file.label_base);
    if (label < base || label - base >= static_cast<long long>(file.graph.size())) {
      throw Error(ErrorCode::kNodeOutOfRange, "leader label " + item + " outside the graph");
    }
    ids.push_back(static_cast<leadsel::NodeId>(label - base));
  }
  if (ids.empty()) throw Error(ErrorCode::kEmptyLeaderSet, "leader list is empty");
  return leadsel::LeaderSet(std::move(ids));
}

json labels_json(const std::vector<leadsel::NodeId>& ids, std::size_t base) {
  json arr = json::array();
  for (auto v : ids) arr.push_back(v + base);
  return arr;
}

void emit(const GlobalOptions& g, const std::string& name, const std::string& text) {
  if (g.out_dir.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(g.out_dir);
  const auto path = std::filesystem::path(g.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write " + path.string());
  out << text;
}

json stability_json(const leadsel::StabilityReport& r) {
  json conds = json::array();
  for (const auto& c : r.conditions) {
    conds.push_back({{"name", c.name}, {"inequality", c.rendered}, {"slack", c.slack},
                     {"satisfied", c.satisfied}});
  }
  return {{"stable", r.stable}, {"marginal", r.marginal}, {"lambda_min", r.lambda_min},
          {"margin", r.margin}, {"hurwitz", r.hurwitz}, {"conditions", conds}};
}

int cmd_stability(const GlobalOptions& g, const SystemOptions& o, bool oracle) {
  const auto file = leadsel::read_graph(o.graph_path);
  const auto leaders = parse_leaders(o.leaders, file);
  // Equal gains of order >= 5 are decided by the equal-gain theorem alone.
  if (!o.auto_gains && o.order > leadsel::kMaxOrder && static_cast<int>(o.gains.size()) == o.order &&
      std::all_of(o.gains.begin(), o.gains.end(), [&](double a) { return a == o.gains.front(); })) {
    json j{{"stable", false},
           {"order", o.order},
           {"reason", "equal gains with m >= 4 are never stable"}};
    emit(g, "stability.json", j.dump(2) + "\n");
    return kExitUnstable;
  }
  const auto sys = load_system(o);
  const leadsel::GroundedSystem system(file.graph, file.kappa, leaders, sys.gains);
  const auto report = leadsel::check_stability(system);
  json j = stability_json(report);
  j["order"] = o.order;
  j["gains"] = sys.gains.values();
  j["leaders"] = labels_json(leaders.members(), file.label_base);
  j["equal_gain_theorem_unstable"] =
      std::all_of(sys.gains.values().begin(), sys.gains.values().end(),
                  [&](double a) { return a == sys.gains.values().front(); }) &&
      leadsel::equal_gain_verdict(o.order, sys.gains.a(1));
  if (oracle) {
    const auto verdict =
        leadsel::spectral_stability_oracle(leadsel::build_state_matrices(system).a);
    j["oracle"] = {{"stable", verdict.stable}, {"max_real_part", verdict.max_real_part}};
  }
  emit(g, "stability.json", j.dump(2) + "\n");
  return report.stable ? kExitOk : kExitUnstable;
}

struct SimulationOptions {
  double dt = 1e-3;
  double total_time = 2000.0;
  double burn_in = 100.0;
  std::size_t ensemble = 4;
};

void add_simulation_options(CLI::App* cmd, SimulationOptions& s) {
  cmd->add_option("--dt", s.dt, "Time step")->check(CLI::PositiveNumber);
  cmd->add_option("--time", s.total_time, "Horizon")->check(CLI::PositiveNumber);
  cmd->add_option("--burn-in", s.burn_in, "Discarded transient")->check(CLI::NonNegativeNumber);
  cmd->add_option("--ensemble", s.ensemble, "Independent runs")->check(CLI::PositiveNumber);
}

int cmd_coherence(const GlobalOptions& g, const SystemOptions& o, const std::string& method,
                  const SimulationOptions& sim) {
  const auto sys = load_system(o);
  const auto leaders = parse_leaders(o.leaders, sys.file);
  const leadsel::GroundedSystem system(sys.file.graph, sys.file.kappa, leaders, sys.gains);
  json j{{"order", o.order},
         {"gains", sys.gains.values()},
         {"leaders", labels_json(leaders.members(), sys.file.label_base)}};
  if (method == "closed" || method == "closed_inv") {
    const auto r = leadsel::coherence_closed(system, method == "closed"
                                                         ? leadsel::CoherenceMethod::kClosedEig
                                                         : leadsel::CoherenceMethod::kClosedInv);
    j["value"] = r.value;
    j["method"] = std::string(to_string(r.method));
  } else if (method == "lyapunov") {
    const auto r = leadsel::coherence_lyapunov_oracle(system);
    j["value"] = r.value;
    j["method"] = "lyapunov";
  } else {
    const leadsel::SimulationSpec spec{system, sim.dt, sim.total_time, sim.burn_in, g.seed,
                                       sim.ensemble};
    const auto est = leadsel::simulate_coherence(spec);
    j["value"] = est.estimate;
    j["standard_error"] = est.standard_error;
    j["method"] = "simulation";
    j["seed"] = g.seed;
  }
  emit(g, "coherence.json", j.dump(2) + "\n");
  return kExitOk;
}

json selection_json(const leadsel::SelectionResult& r, std::size_t base) {
  return {{"order", r.order},
          {"method", std::string(to_string(r.method))},
          {"chosen", labels_json(r.chosen, base)},
          {"f_values", r.f_values},
          {"h_values", r.h_values},
          {"evaluations", r.evaluations}};
}

int cmd_select(const GlobalOptions& g, const SystemOptions& o, std::size_t k,
               const std::string& algorithm) {
  SystemOptions opts = o;
  if (opts.gains.empty()) opts.auto_gains = true;
  const auto sys = load_system(opts);
  const leadsel::CoherenceObjective obj(sys.file.graph, sys.file.kappa, sys.gains);
  const auto base = sys.file.label_base;
  json j{{"order", o.order}, {"k", k}, {"gains", sys.gains.values()},
         {"offset", obj.offset()}, {"rho", obj.rho()}};
  if (algorithm == "greedy") {
    j["greedy"] = selection_json(leadsel::greedy_select(obj, k), base);
  } else if (algorithm == "exhaustive") {
    j["exhaustive"] = selection_json(leadsel::exhaustive_select(obj, k), base);
  } else {
    const auto cert = leadsel::certify_bound(obj, k);
    j["greedy"] = selection_json(cert.greedy, base);
    j["exhaustive"] = selection_json(cert.optimal, base);
    j["certificate"] = {{"f_star", cert.f_star},
                        {"f_greedy", cert.f_greedy},
                        {"ratio", cert.ratio},
                        {"k_bound", cert.k_bound},
                        {"bound", cert.bound},
                        {"holds", cert.holds},
                        {"coherence_lhs", cert.coherence_lhs},
                        {"coherence_rhs", cert.coherence_rhs},
                        {"coherence_holds", cert.coherence_holds}};
  }
  emit(g, "select.json", j.dump(2) + "\n");
  return kExitOk;
}

int cmd_experiment(const GlobalOptions& g, const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + config_path);
  json raw;
  try {
    raw = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  auto cfg = leadsel::parse_experiment_config(raw);
  if (!cfg.graph_path.empty() && std::filesystem::path(cfg.graph_path).is_relative()) {
    cfg.graph_path =
        (std::filesystem::path(config_path).parent_path() / cfg.graph_path).lexically_normal().string();
  }
  if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
  if (raw.contains("seed") == false) cfg.seed = g.seed;
  std::filesystem::create_directories(cfg.output_dir);
  const std::filesystem::path dir(cfg.output_dir);
  auto write = [&](const std::string& name, auto&& writer) {
    std::ofstream out(dir / name);
    if (!out) throw Error(ErrorCode::kParseError, "cannot write " + (dir / name).string());
    writer(out);
  };

  json summary{{"experiment", raw.at("experiment")}, {"seed", cfg.seed}, {"orders", cfg.orders}};
  if (cfg.kind == leadsel::ExperimentKind::kFig3) {
    const auto file = leadsel::read_graph(cfg.graph_path);
    const auto table = leadsel::run_singleton_table(file.graph, file.kappa, cfg.orders, &cfg);
    write("fig3.csv", [&](std::ostream& o) { leadsel::write_fig3_csv(o, table, file.label_base); });
    json argmin = json::object();
    for (const auto& [m, v] : table.argmin) argmin[std::to_string(m)] = v + file.label_base;
    summary["argmin_label"] = argmin;
    summary["gains"] = leadsel::gains_json(table.gains);
  } else {
    const auto result = leadsel::run_selection_experiment(cfg);
    if (cfg.kind != leadsel::ExperimentKind::kFig2) {
      write("fig1.csv", [&](std::ostream& o) { leadsel::write_fig1_csv(o, result); });
    }
    if (cfg.kind != leadsel::ExperimentKind::kFig1) {
      write("fig2.csv", [&](std::ostream& o) { leadsel::write_fig2_csv(o, result); });
    }
    write("trials.csv", [&](std::ostream& o) { leadsel::write_trials_csv(o, result); });
    json graphs = json::array();
    for (const auto& t : result.graphs) {
      graphs.push_back({{"trial", t.trial}, {"seed_used", t.seed_used},
                        {"resamples", t.resamples}, {"edges", t.graph.edges().size()}});
    }
    summary["n"] = cfg.n;
    summary["p"] = cfg.p;
    summary["trials"] = cfg.trials;
    summary["k_max"] = cfg.k_max;
    summary["graphs"] = graphs;
    summary["gains"] = leadsel::gains_json(result.gains);
    bool all_hold = true;
    for (const auto& r : result.records) all_hold = all_hold && r.bound_holds;
    summary["bound_holds"] = all_hold;
  }
  write("summary.json", [&](std::ostream& o) { o << summary.dump(2) << '\n'; });
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_gen(const GlobalOptions& g, std::size_t n, double p, double weight, bool connected,
            std::size_t label_base) {
  leadsel::Graph graph;
  std::size_t resamples = 0;
  if (connected) {
    auto s = leadsel::erdos_renyi_connected(n, p, g.seed, weight);
    graph = std::move(s.graph);
    resamples = s.resamples;
  } else {
    graph = leadsel::erdos_renyi(n, p, g.seed, weight);
  }
  emit(g, "graph.json",
       leadsel::serialize_graph(graph, leadsel::KappaWeights::ones(n), label_base) + "\n");
  if (connected) std::cerr << json{{"resamples", resamples}}.dump() << '\n';
  return kExitOk;
}

int cmd_simulate(const GlobalOptions& g, const SystemOptions& o, const SimulationOptions& sim,
                 std::size_t stride, bool no_noise) {
  const auto sys = load_system(o);
  const auto leaders = parse_leaders(o.leaders, sys.file);
  const leadsel::GroundedSystem system(sys.file.graph, sys.file.kappa, leaders, sys.gains);
  const leadsel::SimulationSpec spec{system, sim.dt, sim.total_time, sim.burn_in, g.seed,
                                     sim.ensemble};
  leadsel::TrajectoryOptions opts;
  opts.record_stride = stride;
  opts.noise = !no_noise;
  const auto traj = leadsel::simulate_trajectory(spec, opts);
  if (g.format == "json") {
    emit(g, "trajectory.json", json{{"t", traj.time}, {"y", traj.outputs}}.dump() + "\n");
  } else {
    std::ostringstream out;
    leadsel::write_trajectory_csv(out, traj);
    emit(g, "trajectory.csv", out.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leader selection for noisy m-th order leader-follower consensus"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_option("--seed", global.seed, "Random seed")->capture_default_str();
  app.add_option("--out", global.out_dir, "Output directory (default: stdout)");
  app.add_option("--format", global.format, "Trajectory output format (default csv)")
      ->check(CLI::IsMember({"json", "csv"}));

  SystemOptions stab_opts;
  bool oracle = false;
  auto* stab = app.add_subcommand("stability", "Check Hurwitz stability conditions");
  add_system_options(stab, stab_opts, true);
  stab->add_flag("--oracle", oracle, "Also run the spectral oracle on A");

  SystemOptions coh_opts;
  std::string method = "closed";
  SimulationOptions coh_sim;
  auto* coh = app.add_subcommand("coherence", "Evaluate H_m(S)");
  add_system_options(coh, coh_opts, true);
  coh->add_option("--method", method, "closed|closed_inv|lyapunov|simulate")
      ->check(CLI::IsMember({"closed", "closed_inv", "lyapunov", "simulate"}));
  add_simulation_options(coh, coh_sim);

  SystemOptions sel_opts;
  std::size_t k = 1;
  std::string algorithm = "greedy";
  auto* sel = app.add_subcommand("select", "Choose k leaders");
  add_system_options(sel, sel_opts, false);
  sel->add_option("--k", k, "Leader budget")->required()->check(CLI::PositiveNumber);
  sel->add_option("--algorithm", algorithm, "greedy|exhaustive|both")
      ->check(CLI::IsMember({"greedy", "exhaustive", "both"}));

  std::string config_path;
  auto* exp = app.add_subcommand("experiment", "Run an experiment config");
  exp->add_option("config", config_path, "Experiment JSON config")->required();

  std::size_t gen_n = 30;
  double gen_p = 0.5;
  double gen_weight = 1.0;
  bool gen_connected = false;
  std::size_t gen_base = 1;
  auto* gen = app.add_subcommand("gen", "Sample an Erdos-Renyi graph");
  gen->add_option("--n", gen_n, "Node count")->check(CLI::PositiveNumber);
  gen->add_option("--p", gen_p, "Edge probability");
  gen->add_option("--weight", gen_weight, "Edge weight")->check(CLI::PositiveNumber);
  gen->add_flag("--connected", gen_connected, "Resample until connected");
  gen->add_option("--label-base", gen_base, "First node label in the file");

  SystemOptions sim_opts;
  SimulationOptions sim;
  sim.total_time = 10.0;
  sim.burn_in = 0.0;
  std::size_t stride = 10;
  bool no_noise = false;
  auto* simc = app.add_subcommand("simulate", "Integrate the noisy dynamics and emit y(t)");
  add_system_options(simc, sim_opts, true);
  add_simulation_options(simc, sim);
  simc->add_option("--stride", stride, "Record every N steps")->check(CLI::PositiveNumber);
  simc->add_flag("--no-noise", no_noise, "Deterministic run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*stab) return cmd_stability(global, stab_opts, oracle);
    if (*coh) return cmd_coherence(global, coh_opts, method, coh_sim);
    if (*sel) return cmd_select(global, sel_opts, k, algorithm);
    if (*exp) return cmd_experiment(global, config_path);
    if (*gen) return cmd_gen(global, gen_n, gen_p, gen_weight, gen_connected, gen_base);
    if (*simc) return cmd_simulate(global, sim_opts, sim, stride, no_noise);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kUnstableSystem ? kExitUnstable : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitUsage;
}
