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

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "leadsel/error.hpp"
#include "leadsel/graph.hpp"

namespace leadsel {

// Graph file contents. Files use labels offset by `label_base` (1 by default,
// so published node numbers survive); in memory ids are 0-based.
struct GraphFile {
  Graph graph;
  KappaWeights kappa;
  std::size_t label_base = 1;

  friend bool operator==(const GraphFile&, const GraphFile&) = default;
};

// Key order is fixed: label_base, n, edges, kappa.
inline nlohmann::ordered_json graph_to_json(const Graph& g, const KappaWeights& kappa,
                                            std::size_t label_base = 1) {
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({e.u + label_base, e.v + label_base, e.weight});
  }
  nlohmann::ordered_json j;
  j["label_base"] = label_base;
  j["n"] = g.size();
  j["edges"] = std::move(edges);
  j["kappa"] = kappa.values();
  return j;
}

inline GraphFile graph_from_json(const nlohmann::json& j) {
  auto schema = [](const std::string& what) { return Error(ErrorCode::kSchemaError, what); };
  if (!j.is_object()) throw schema("top level must be an object");
  std::size_t label_base = 1;
  if (j.contains("label_base")) {
    if (!j["label_base"].is_number_unsigned()) throw schema("label_base must be a non-negative integer");
    label_base = j["label_base"].get<std::size_t>();
  }
  if (!j.contains("n") || !j["n"].is_number_unsigned() || j["n"].get<std::size_t>() == 0) {
    throw schema("n must be a positive integer");
  }
  const auto n = j["n"].get<std::size_t>();
  if (!j.contains("edges") || !j["edges"].is_array()) throw schema("edges must be an array");

  std::vector<Edge> edges;
  for (const auto& item : j["edges"]) {
    if (!item.is_array() || item.size() < 2 || item.size() > 3 ||
        !item[0].is_number_integer() || !item[1].is_number_integer() ||
        (item.size() == 3 && !item[2].is_number())) {
      throw schema("each edge must be [u, v] or [u, v, weight]");
    }
    const auto u = item[0].get<long long>();
    const auto v = item[1].get<long long>();
    const double w = item.size() == 3 ? item[2].get<double>() : 1.0;
    const auto base = static_cast<long long>(label_base);
    if (u < base || v < base) throw schema("edge label below label_base");
    edges.push_back({static_cast<NodeId>(u - base), static_cast<NodeId>(v - base), w});
  }

  KappaWeights kappa = KappaWeights::ones(n);
  try {
    if (j.contains("kappa")) {
      if (!j["kappa"].is_array() || j["kappa"].size() != n) throw schema("kappa must have n entries");
      std::vector<double> values;
      for (const auto& k : j["kappa"]) {
        if (!k.is_number()) throw schema("kappa entries must be numbers");
        values.push_back(k.get<double>());
      }
      kappa = KappaWeights(std::move(values));
    }
    return {build_graph(n, std::move(edges)), std::move(kappa), label_base};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchemaError) throw;
    throw schema(e.what());
  }
}

// Canonical text form: compact JSON, edges sorted with u < v.
inline std::string serialize_graph(const Graph& g, const KappaWeights& kappa,
                                   std::size_t label_base = 1) {
  return graph_to_json(g, kappa, label_base).dump();
}

inline GraphFile parse_graph(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return graph_from_json(j);
}

inline GraphFile read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

inline void write_graph(const Graph& g, const KappaWeights& kappa, const std::string& path,
                        std::size_t label_base = 1) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write " + path);
  out << serialize_graph(g, kappa, label_base) << '\n';
}

}  // namespace leadsel
