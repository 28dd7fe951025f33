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

#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>
#include "leadsel/coherence.hpp"
#include "leadsel/error.hpp"
#include "leadsel/graph.hpp"
#include "leadsel/graph_io.hpp"
#include "leadsel/selection.hpp"
#include "leadsel/stability.hpp"

namespace leadsel {

enum class ExperimentKind { kFig1, kFig2, kFig3, kCustom };

// Parameters of one experiment run. Graph-driven experiments (fig3, or custom
// with `graph_path`) read a graph file; the rest sample G(n, p) per trial.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kFig1;
  std::size_t n = 12;
  double p = 0.5;
  std::size_t trials = 3;
  std::size_t k_max = 3;
  std::vector<int> orders{1, 2, 3};
  std::uint64_t seed = 1;
  bool require_connected = true;
  // "auto" or "explicit"; explicit gains are keyed by order.
  std::string gain_rule = "auto";
  std::map<int, GainVector> explicit_gains;
  std::string graph_path;
  std::string output_dir = ".";
};

inline ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  auto bad = [](const std::string& what) { return Error(ErrorCode::kSchemaError, what); };
  if (!j.is_object()) throw bad("config must be an object");
  ExperimentConfig c;
  try {
    const std::string kind = j.at("experiment").get<std::string>();
    if (kind == "fig1") c.kind = ExperimentKind::kFig1;
    else if (kind == "fig2") c.kind = ExperimentKind::kFig2;
    else if (kind == "fig3") c.kind = ExperimentKind::kFig3;
    else if (kind == "custom") c.kind = ExperimentKind::kCustom;
    else throw bad("unknown experiment '" + kind + "'");
    if (c.kind == ExperimentKind::kFig3) {
      c.trials = 1;
      c.k_max = 1;
    }
    c.n = j.value("n", c.n);
    c.p = j.value("p", c.p);
    c.trials = j.value("trials", c.trials);
    c.k_max = j.value("k_max", c.k_max);
    c.orders = j.value("orders", c.orders);
    c.seed = j.value("seed", c.seed);
    c.require_connected = j.value("require_connected", c.require_connected);
    c.gain_rule = j.value("gain_rule", c.gain_rule);
    c.graph_path = j.value("graph", c.graph_path);
    c.output_dir = j.value("output_dir", c.output_dir);
    if (j.contains("gains")) {
      for (const auto& [key, values] : j.at("gains").items()) {
        c.explicit_gains.emplace(std::stoi(key), GainVector(values.get<std::vector<double>>()));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw bad(e.what());
  } catch (const std::invalid_argument& e) {
    throw bad(e.what());
  }
  if (c.trials < 1) throw bad("trials must be >= 1");
  if (c.k_max < 1) throw bad("k_max must be >= 1");
  if (c.orders.empty()) throw bad("orders must be nonempty");
  for (int m : c.orders) {
    if (m < 1 || m > kMaxOrder) throw bad("orders must be a subset of {1,2,3,4}");
  }
  if (c.gain_rule != "auto" && c.gain_rule != "explicit") throw bad("gain_rule must be auto|explicit");
  if (c.gain_rule == "explicit") {
    for (int m : c.orders) {
      auto it = c.explicit_gains.find(m);
      if (it == c.explicit_gains.end() || it->second.order() != m) {
        throw bad("explicit gains missing or wrong length for order " + std::to_string(m));
      }
    }
  }
  if (c.kind == ExperimentKind::kFig3 && c.graph_path.empty()) throw bad("fig3 needs 'graph'");
  if (!(c.p >= 0.0 && c.p <= 1.0)) throw bad("p must lie in [0, 1]");
  return c;
}

struct TrialGraph {
  std::size_t trial = 0;
  std::uint64_t seed_used = 0;
  std::size_t resamples = 0;
  Graph graph;
  KappaWeights kappa;
};

struct SelectionRecord {
  std::size_t trial = 0;
  std::size_t k = 0;
  int order = 0;
  double optimal_h = 0.0;
  double greedy_h = 0.0;
  double f_star = 0.0;
  double f_greedy = 0.0;
  double ratio = 0.0;
  bool bound_holds = false;
  std::vector<NodeId> optimal_set;
  std::vector<NodeId> greedy_set;
};

struct GainRecord {
  std::size_t trial = 0;
  int order = 0;
  GainVector gains;
};

struct SelectionExperiment {
  std::vector<TrialGraph> graphs;
  std::vector<SelectionRecord> records;
  std::vector<GainRecord> gains;
};

// Per-trial seed: master seed advanced by a fixed odd stride.
inline std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
  return master + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(trial);
}

inline TrialGraph make_trial_graph(const ExperimentConfig& c, std::size_t trial) {
  TrialGraph t;
  t.trial = trial;
  if (!c.graph_path.empty()) {
    auto file = read_graph(c.graph_path);
    t.graph = std::move(file.graph);
    t.kappa = std::move(file.kappa);
    return t;
  }
  const std::uint64_t seed = trial_seed(c.seed, trial);
  if (c.require_connected) {
    auto sample = erdos_renyi_connected(c.n, c.p, seed);
    t.graph = std::move(sample.graph);
    t.seed_used = sample.seed_used;
    t.resamples = sample.resamples;
  } else {
    t.graph = erdos_renyi(c.n, c.p, seed);
    t.seed_used = seed;
  }
  t.kappa = KappaWeights::ones(c.n);
  return t;
}

inline GainVector experiment_gains(const ExperimentConfig& c, const TrialGraph& t, int order) {
  if (c.gain_rule == "explicit") return c.explicit_gains.at(order);
  return auto_gains(t.graph, t.kappa, order);
}

/// For every trial, order, and k = 1..k_max: exhaustive optimum, greedy set,
/// and the greedy ratio (f* - f(S^g)) / f*.
inline SelectionExperiment run_selection_experiment(const ExperimentConfig& c) {
  SelectionExperiment out;
  for (std::size_t trial = 0; trial < c.trials; ++trial) {
    TrialGraph t = make_trial_graph(c, trial);
    if (!is_connected(t.graph)) {
      throw Error(ErrorCode::kPreconditionViolated,
                  "trial " + std::to_string(trial) + " graph is disconnected");
    }
    if (subset_count(t.graph.size(), c.k_max) > static_cast<double>(default_tolerances().exhaustive_cap)) {
      throw Error(ErrorCode::kCombinatorialCap, "exhaustive search exceeds the subset cap");
    }
    for (int m : c.orders) {
      const GainVector g = experiment_gains(c, t, m);
      out.gains.push_back({trial, m, g});
      const CoherenceObjective obj(t.graph, t.kappa, g);
      for (std::size_t k = 1; k <= c.k_max; ++k) {
        const auto cert = certify_bound(obj, k);
        out.records.push_back({trial, k, m, cert.optimal.final_h(), cert.greedy.final_h(),
                               cert.f_star, cert.f_greedy, cert.ratio, cert.holds,
                               cert.optimal.chosen, cert.greedy.chosen});
      }
    }
    out.graphs.push_back(std::move(t));
  }
  return out;
}

struct SingletonRow {
  NodeId node = 0;
  int order = 0;
  double h = 0.0;
};

struct SingletonTable {
  std::vector<SingletonRow> rows;
  std::map<int, NodeId> argmin;  // per order
  std::vector<GainRecord> gains;
};

// H_m({v}) for every node and order, with the tie-aware argmin per order.
inline SingletonTable run_singleton_table(const Graph& g, const KappaWeights& kappa,
                                          const std::vector<int>& orders,
                                          const ExperimentConfig* config = nullptr) {
  SingletonTable out;
  TrialGraph t{0, 0, 0, g, kappa};
  for (int m : orders) {
    const GainVector gains = config ? experiment_gains(*config, t, m) : auto_gains(g, kappa, m);
    out.gains.push_back({0, m, gains});
    const CoherenceObjective obj(g, kappa, gains);
    out.argmin[m] = exhaustive_select(obj, 1).chosen.front();
    for (NodeId v = 0; v < g.size(); ++v) {
      out.rows.push_back({v, m, obj.singleton_scaled(v) / obj.rho()});
    }
  }
  return out;
}

// Shortest round-trip decimal.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

struct MeanRow {
  std::size_t k = 0;
  int order = 0;
  double mean = 0.0;
  double max = 0.0;
  std::size_t trials = 0;
};

template <class Field>
std::vector<MeanRow> aggregate(const SelectionExperiment& e, Field&& field) {
  std::map<std::pair<std::size_t, int>, MeanRow> acc;
  for (const auto& r : e.records) {
    auto& row = acc[{r.k, r.order}];
    const double v = field(r);
    row.k = r.k;
    row.order = r.order;
    row.max = row.trials == 0 ? v : std::max(row.max, v);
    row.mean += v;
    ++row.trials;
  }
  std::vector<MeanRow> rows;
  for (auto& [key, row] : acc) {
    row.mean /= static_cast<double>(row.trials);
    rows.push_back(row);
  }
  return rows;
}

inline void write_fig1_csv(std::ostream& out, const SelectionExperiment& e) {
  out << "k,order,mean_optimal_h,trials\n";
  for (const auto& r : aggregate(e, [](const SelectionRecord& s) { return s.optimal_h; })) {
    out << r.k << ',' << r.order << ',' << format_double(r.mean) << ',' << r.trials << '\n';
  }
}

inline void write_fig2_csv(std::ostream& out, const SelectionExperiment& e) {
  out << "k,order,mean_ratio,max_ratio,trials\n";
  for (const auto& r : aggregate(e, [](const SelectionRecord& s) { return s.ratio; })) {
    out << r.k << ',' << r.order << ',' << format_double(r.mean) << ',' << format_double(r.max)
        << ',' << r.trials << '\n';
  }
}

inline void write_trials_csv(std::ostream& out, const SelectionExperiment& e) {
  out << "trial,k,order,optimal_h,greedy_h,f_star,f_greedy,ratio,bound_holds\n";
  for (const auto& r : e.records) {
    out << r.trial << ',' << r.k << ',' << r.order << ',' << format_double(r.optimal_h) << ','
        << format_double(r.greedy_h) << ',' << format_double(r.f_star) << ','
        << format_double(r.f_greedy) << ',' << format_double(r.ratio) << ','
        << (r.bound_holds ? 1 : 0) << '\n';
  }
}

inline void write_fig3_csv(std::ostream& out, const SingletonTable& t, std::size_t label_base) {
  out << "node_label,order,h\n";
  for (const auto& r : t.rows) {
    out << r.node + label_base << ',' << r.order << ',' << format_double(r.h) << '\n';
  }
}

inline nlohmann::json gains_json(const std::vector<GainRecord>& gains) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : gains) {
    arr.push_back({{"trial", g.trial}, {"order", g.order}, {"gains", g.gains.values()}});
  }
  return arr;
}

}  // namespace leadsel
