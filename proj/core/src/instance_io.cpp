// Copyright 2026 The evq Authors
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

#include "evq/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "evq/errors.hpp"
#include "json.hpp"

namespace evq {
namespace {

using json = nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const json& Require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) Fail(where, std::string("missing key '") + key + "'");
  return obj.at(key);
}

// Numbers, or the strings "inf"/"-inf".
double Number(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  Fail(where, "expected a number");
}

double NumberOr(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  return Number(obj.at(key), where + "." + key);
}

std::string Name(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  Fail(where, "expected a string or integer identifier");
}

json NumberJson(double x) {
  if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
  return x;
}

NodeId NodeRef(const Network& net, const json& v, const std::string& where) {
  const std::string name = Name(v, where);
  auto id = net.FindNode(name);
  if (!id) Fail(where, "unknown node '" + name + "'");
  return *id;
}

StepFunction ParseInflow(const json& v, const std::string& where) {
  if (!v.is_array()) Fail(where, "inflow must be a list of [t_start, t_end, rate]");
  std::vector<StepFunction::Piece> pieces;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const json& p = v[k];
    const std::string at = where + "[" + std::to_string(k) + "]";
    if (!p.is_array() || p.size() != 3) Fail(at, "expected [t_start, t_end, rate]");
    const double t0 = Number(p[0], at);
    const double t1 = Number(p[1], at);
    const double rate = Number(p[2], at);
    if (!(t0 >= 0.0) || !(t1 > t0) || !std::isfinite(t1)) {
      Fail(at, "pieces need 0 <= t_start < t_end < inf");
    }
    if (!(rate >= 0.0) || !std::isfinite(rate)) Fail(at, "rate must be finite and >= 0");
    pieces.push_back({t0, t1, rate});
  }
  try {
    return StepFunction::FromPieces(pieces);
  } catch (const std::invalid_argument& e) {
    Fail(where, e.what());
  }
}

AggregationSpec ParseAggregation(const json& v, const std::string& where) {
  if (v.is_null()) return {};
  if (!v.is_object() || v.size() != 1) {
    Fail(where, "aggregation must be {\"lambda\": x} or {\"lambda_tilde\": x}");
  }
  if (v.contains("lambda")) {
    const double w = Number(v.at("lambda"), where + ".lambda");
    if (!(w > 0.0)) Fail(where, "lambda must be positive");
    return AggregationSpec::Lambda(w);
  }
  if (v.contains("lambda_tilde")) {
    const double w = Number(v.at("lambda_tilde"), where + ".lambda_tilde");
    if (!(w >= 0.0)) Fail(where, "lambda_tilde must be non-negative");
    return AggregationSpec::LambdaTilde(w);
  }
  Fail(where, "unknown aggregation variant");
}

Instance FromJson(const json& doc) {
  if (!doc.is_object()) Fail("instance", "top level must be an object");
  Instance inst;
  inst.name = doc.value("name", std::string());
  Network& net = inst.base;

  const json& nodes = Require(doc, "nodes", "instance");
  if (!nodes.is_array()) Fail("nodes", "expected a list");
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const std::string name = Name(nodes[k], "nodes[" + std::to_string(k) + "]");
    if (net.FindNode(name)) Fail("nodes", "duplicate node '" + name + "'");
    net.AddNode(name);
  }

  std::map<std::string, EdgeId> edge_index;
  std::vector<double> default_cost;
  const json& edges = Require(doc, "edges", "instance");
  if (!edges.is_array()) Fail("edges", "expected a list");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const json& e = edges[k];
    const std::string where = "edges[" + std::to_string(k) + "]";
    Edge edge;
    edge.id = Name(Require(e, "id", where), where + ".id");
    if (edge_index.contains(edge.id)) Fail(where, "duplicate edge '" + edge.id + "'");
    edge.tail = NodeRef(net, Require(e, "tail", where), where + ".tail");
    edge.head = NodeRef(net, Require(e, "head", where), where + ".head");
    edge.transit_time = Number(Require(e, "tau", where), where + ".tau");
    edge.capacity = NumberOr(e, "nu", kUncapacitated, where);
    if (!(edge.transit_time > 0.0)) Fail(where, "tau must be positive");
    if (!(edge.capacity > 0.0)) Fail(where, "nu must be positive");
    default_cost.push_back(NumberOr(e, "b", 0.0, where));
    std::string id = edge.id;
    edge_index[std::move(id)] = net.AddEdge(std::move(edge));
  }

  const json commodities = doc.contains("commodities") ? doc.at("commodities") : json::array();
  if (!commodities.is_array()) Fail("commodities", "expected a list");
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    const json& c = commodities[k];
    const std::string where = "commodities[" + std::to_string(k) + "]";
    Commodity com;
    com.id = c.contains("id") ? Name(c.at("id"), where + ".id") : std::to_string(k);
    if (net.FindCommodity(com.id)) Fail(where, "duplicate commodity '" + com.id + "'");
    com.source = NodeRef(net, Require(c, "source", where), where + ".source");
    com.sink = NodeRef(net, Require(c, "sink", where), where + ".sink");
    com.inflow = ParseInflow(Require(c, "inflow", where), where + ".inflow");
    com.battery_capacity = NumberOr(c, "b_max", 1.0, where);
    com.initial_battery = NumberOr(c, "b_init", com.battery_capacity, where);
    com.price_budget = NumberOr(c, "p_max", kInf, where);
    if (!(com.initial_battery > 0.0) || !(com.initial_battery <= com.battery_capacity)) {
      Fail(where, "need 0 < b_init <= b_max");
    }
    com.aggregation =
        ParseAggregation(c.contains("aggregation") ? c.at("aggregation") : json(),
                         where + ".aggregation");
    const CommodityId id = net.AddCommodity(std::move(com));
    for (std::size_t e = 0; e < default_cost.size(); ++e) {
      net.attr(id, static_cast<EdgeId>(e)).battery_cost = default_cost[e];
    }
  }

  if (doc.contains("edge_attrs")) {
    const json& attrs = doc.at("edge_attrs");
    if (!attrs.is_object()) Fail("edge_attrs", "expected an object keyed by commodity");
    for (const auto& [cid, per_edge] : attrs.items()) {
      const std::string where = "edge_attrs." + cid;
      auto c = net.FindCommodity(cid);
      if (!c) Fail(where, "unknown commodity");
      if (!per_edge.is_object()) Fail(where, "expected an object keyed by edge");
      for (const auto& [eid, v] : per_edge.items()) {
        const std::string at = where + "." + eid;
        auto it = edge_index.find(eid);
        if (it == edge_index.end()) Fail(at, "unknown edge");
        CommodityEdgeAttrs& a = net.attr(*c, it->second);
        a.battery_cost = NumberOr(v, "b", a.battery_cost, at);
        a.price = NumberOr(v, "p", a.price, at);
        if (!(a.price >= 0.0)) Fail(at, "price must be non-negative");
      }
    }
  }

  if (doc.contains("stations")) {
    const json& stations = doc.at("stations");
    if (!stations.is_array()) Fail("stations", "expected a list");
    for (std::size_t k = 0; k < stations.size(); ++k) {
      const json& s = stations[k];
      const std::string where = "stations[" + std::to_string(k) + "]";
      ChargingStationSpec spec;
      spec.node = NodeRef(net, Require(s, "node", where), where + ".node");
      const json& options = Require(s, "options", where);
      if (!options.is_array()) Fail(where, "options must be a list");
      for (std::size_t o = 0; o < options.size(); ++o) {
        const json& v = options[o];
        const std::string at = where + ".options[" + std::to_string(o) + "]";
        RechargeOption opt;
        opt.mode_id = Name(Require(v, "mode", at), at + ".mode");
        opt.duration = Number(Require(v, "tau", at), at + ".tau");
        opt.price = NumberOr(v, "price", 0.0, at);
        opt.full_recharge = v.value("full_recharge", false);
        opt.recharge = NumberOr(v, "recharge", 0.0, at);
        if (!opt.full_recharge && !v.contains("recharge")) {
          Fail(at, "needs either recharge or full_recharge");
        }
        opt.capacity = NumberOr(v, "nu", kUncapacitated, at);
        if (v.contains("commodities")) {
          for (const json& cid : v.at("commodities")) {
            opt.compatible_commodities.push_back(Name(cid, at + ".commodities"));
          }
        }
        spec.options.push_back(std::move(opt));
      }
      inst.stations.push_back(std::move(spec));
    }
  }
  inst.gadget.return_epsilon = NumberOr(doc, "return_epsilon", 1e-6, "instance");
  return inst;
}

}  // namespace

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Instance ParseInstance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance: malformed JSON: ") + e.what());
  }
  try {
    return FromJson(doc);
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
}

Instance LoadInstance(const std::filesystem::path& path) {
  try {
    return ParseInstance(ReadTextFile(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string SerializeInstance(const Instance& instance) {
  const Network& net = instance.base;
  json doc;
  if (!instance.name.empty()) doc["name"] = instance.name;
  doc["nodes"] = net.node_names;
  json edges = json::array();
  for (const Edge& e : net.edges) {
    json je = {{"id", e.id},
               {"tail", net.node_names[static_cast<std::size_t>(e.tail)]},
               {"head", net.node_names[static_cast<std::size_t>(e.head)]},
               {"tau", e.transit_time}};
    je["nu"] = std::isinf(e.capacity) ? json(nullptr) : json(e.capacity);
    edges.push_back(std::move(je));
  }
  doc["edges"] = std::move(edges);

  json commodities = json::array();
  json attrs = json::object();
  for (std::size_t c = 0; c < net.num_commodities(); ++c) {
    const Commodity& com = net.commodities[c];
    json inflow = json::array();
    for (const auto& p : com.inflow.Pieces()) inflow.push_back({p.start, p.end, p.value});
    json jc = {{"id", com.id},
               {"source", net.node_names[static_cast<std::size_t>(com.source)]},
               {"sink", net.node_names[static_cast<std::size_t>(com.sink)]},
               {"inflow", std::move(inflow)},
               {"b_init", com.initial_battery},
               {"b_max", com.battery_capacity}};
    jc["p_max"] = std::isinf(com.price_budget) ? json(nullptr) : json(com.price_budget);
    jc["aggregation"] =
        com.aggregation.variant == AggregationSpec::Variant::kLambda
            ? json{{"lambda", com.aggregation.weight}}
            : json{{"lambda_tilde", com.aggregation.weight}};
    commodities.push_back(std::move(jc));

    json per_edge = json::object();
    for (std::size_t e = 0; e < net.num_edges(); ++e) {
      const CommodityEdgeAttrs& a = net.attrs[c][e];
      if (a.battery_cost == 0.0 && a.price == 0.0) continue;
      per_edge[net.edges[e].id] = {{"b", NumberJson(a.battery_cost)}, {"p", a.price}};
    }
    if (!per_edge.empty()) attrs[com.id] = std::move(per_edge);
  }
  doc["commodities"] = std::move(commodities);
  doc["edge_attrs"] = std::move(attrs);

  json stations = json::array();
  for (const ChargingStationSpec& s : instance.stations) {
    json options = json::array();
    for (const RechargeOption& o : s.options) {
      json jo = {{"mode", o.mode_id}, {"tau", o.duration}, {"price", o.price}};
      if (o.full_recharge) {
        jo["full_recharge"] = true;
      } else {
        jo["recharge"] = o.recharge;
      }
      jo["nu"] = std::isinf(o.capacity) ? json(nullptr) : json(o.capacity);
      if (!o.compatible_commodities.empty()) jo["commodities"] = o.compatible_commodities;
      options.push_back(std::move(jo));
    }
    stations.push_back({{"node", net.node_names[static_cast<std::size_t>(s.node)]},
                        {"options", std::move(options)}});
  }
  doc["stations"] = std::move(stations);
  doc["return_epsilon"] = instance.gadget.return_epsilon;
  return doc.dump(2) + "\n";
}

void SaveInstance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << SerializeInstance(instance);
}

RunConfig ParseRunConfig(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config: top level must be an object");
  RunConfig cfg;
  FixedPointConfig& s = cfg.solver;
  try {
    for (const auto& [key, v] : doc.items()) {
      const std::string at = "config." + key;
      if (key == "epsilon") {
        s.epsilon = Number(v, at);
      } else if (key == "alpha0") {
        s.alpha0 = Number(v, at);
      } else if (key == "N" || key == "intervals") {
        s.intervals = v.get<int>();
      } else if (key == "horizon") {
        s.horizon = Number(v, at);
      } else if (key == "max_iters") {
        s.max_iters = v.get<int>();
      } else if (key == "time_limit_s") {
        s.time_limit_s = v.is_null() ? kInf : Number(v, at);
      } else if (key == "initialization") {
        const auto name = v.get<std::string>();
        if (name == "shortest") {
          s.initialization = Initialization::kShortest;
        } else if (name == "uniform") {
          s.initialization = Initialization::kUniform;
        } else if (name == "file" || name == "given") {
          s.initialization = Initialization::kGiven;
        } else {
          Fail(at, "expected shortest, uniform or file");
        }
      } else if (key == "init_file") {
        cfg.init_file = v.get<std::string>();
      } else if (key == "termination_mode") {
        const auto name = v.get<std::string>();
        if (name != "abs" && name != "rel") Fail(at, "expected abs or rel");
        s.termination = name == "abs" ? TerminationMode::kAbsolute : TerminationMode::kRelative;
      } else if (key == "norm") {
        const auto name = v.get<std::string>();
        if (name != "l2" && name != "l1") Fail(at, "expected l2 or l1");
        s.norm.kind = name == "l2" ? NormOptions::Kind::kL2 : NormOptions::Kind::kL1;
      } else if (key == "norm_weights") {
        const auto name = v.get<std::string>();
        if (name != "interval" && name != "unit") Fail(at, "expected interval or unit");
        s.norm.interval_weights = name == "interval";
      } else if (key == "threads") {
        s.threads = v.get<int>();
      } else if (key == "audit") {
        s.audit = v.get<bool>();
      } else if (key == "max_events") {
        s.loading.max_events = v.get<std::size_t>();
      } else {
        Fail(at, "unknown key");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!(s.epsilon > 0.0)) throw ParseError("config.epsilon: must be positive");
  if (!(s.alpha0 > 0.0)) throw ParseError("config.alpha0: must be positive");
  if (s.intervals < 1) throw ParseError("config.N: must be at least 1");
  if (s.max_iters < 0) throw ParseError("config.max_iters: must be non-negative");
  return cfg;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  try {
    return ParseRunConfig(ReadTextFile(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace evq
