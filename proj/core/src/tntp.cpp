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

#include "evq/tntp.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

#include "evq/errors.hpp"
#include "json.hpp"

namespace evq {
namespace {

using json = nlohmann::json;

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string Normalize(std::string s) {
  s = Trim(s);
  std::string out;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!out.empty() && out.back() != '_') out += '_';
    } else {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

std::vector<std::string> Fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok == ";") break;
    if (!tok.empty() && tok.back() == ';') {
      tok.pop_back();
      if (!tok.empty()) out.push_back(tok);
      break;
    }
    out.push_back(tok);
  }
  return out;
}

}  // namespace

TntpNetwork ParseTntpNetwork(const std::string& text) {
  TntpNetwork net;
  std::istringstream in(text);
  std::string line;
  bool in_metadata = true;
  std::size_t col_init = 0, col_term = 1, col_cap = 2, col_fft = 4;
  std::size_t line_no = 0;
  int declared_links = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = Trim(line);
    if (t.empty()) continue;
    if (in_metadata) {
      if (t.rfind("<END OF METADATA>", 0) == 0) {
        in_metadata = false;
        continue;
      }
      if (t.front() == '<') {
        const auto close = t.find('>');
        if (close == std::string::npos) {
          throw ParseError("tntp line " + std::to_string(line_no) + ": bad metadata tag");
        }
        const std::string key = t.substr(1, close - 1);
        const std::string value = Trim(t.substr(close + 1));
        try {
          if (key == "NUMBER OF ZONES") net.num_zones = std::stoi(value);
          if (key == "NUMBER OF NODES") net.num_nodes = std::stoi(value);
          if (key == "FIRST THRU NODE") net.first_thru_node = std::stoi(value);
          if (key == "NUMBER OF LINKS") declared_links = std::stoi(value);
        } catch (const std::exception&) {
          throw ParseError("tntp line " + std::to_string(line_no) + ": bad value for " + key);
        }
        continue;
      }
      in_metadata = false;  // files without metadata block
    }
    if (t.front() == '~') {
      std::vector<std::string> names;
      std::string body = t.substr(1);
      std::replace(body.begin(), body.end(), '\t', '|');
      std::istringstream cols(body);
      std::string col;
      while (std::getline(cols, col, '|')) {
        const std::string n = Normalize(col);
        if (!n.empty() && n != ";") names.push_back(n);
      }
      auto find = [&](std::initializer_list<const char*> keys, std::size_t& slot) {
        for (std::size_t k = 0; k < names.size(); ++k) {
          for (const char* key : keys) {
            if (names[k] == key) {
              slot = k;
              return true;
            }
          }
        }
        return false;
      };
      if (!find({"init_node", "init"}, col_init) || !find({"term_node", "term"}, col_term) ||
          !find({"capacity"}, col_cap) ||
          !find({"free_flow_time", "fft", "free_flow"}, col_fft)) {
        throw ParseError("tntp line " + std::to_string(line_no) +
                         ": header lacks init_node, term_node, capacity or free_flow_time");
      }
      continue;
    }
    const auto f = Fields(t);
    const std::size_t need = std::max({col_init, col_term, col_cap, col_fft}) + 1;
    if (f.size() < need) {
      throw ParseError("tntp line " + std::to_string(line_no) + ": expected at least " +
                       std::to_string(need) + " columns");
    }
    TntpLink link;
    try {
      link.init_node = std::stoi(f[col_init]);
      link.term_node = std::stoi(f[col_term]);
      link.capacity = std::stod(f[col_cap]);
      link.free_flow_time = std::stod(f[col_fft]);
    } catch (const std::exception&) {
      throw ParseError("tntp line " + std::to_string(line_no) + ": non-numeric link field");
    }
    net.links.push_back(link);
  }
  if (declared_links >= 0 && static_cast<std::size_t>(declared_links) != net.links.size()) {
    throw ParseError("tntp: metadata declares " + std::to_string(declared_links) +
                     " links but " + std::to_string(net.links.size()) + " were read");
  }
  int max_node = 0;
  for (const auto& l : net.links) max_node = std::max({max_node, l.init_node, l.term_node});
  net.num_nodes = std::max(net.num_nodes, max_node);
  return net;
}

Instance ImportTntp(const TntpNetwork& tntp, const std::string& attrs_json,
                    const TntpImportOptions& options) {
  json attrs = json::object();
  if (!Trim(attrs_json).empty()) {
    try {
      attrs = json::parse(attrs_json);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("attrs: malformed JSON: ") + e.what());
    }
    if (!attrs.is_object()) throw ParseError("attrs: top level must be an object");
  }
  for (const auto& [key, v] : attrs.items()) {
    static const char* kAllowed[] = {"name", "commodities", "edge_attrs", "stations",
                                     "return_epsilon", "edge_b"};
    if (std::none_of(std::begin(kAllowed), std::end(kAllowed),
                     [&](const char* k) { return key == k; })) {
      throw ParseError("attrs: unknown key '" + key + "'");
    }
  }

  json doc = json::object();
  doc["name"] = attrs.value("name", std::string("tntp"));
  json nodes = json::array();
  for (int v = 1; v <= tntp.num_nodes; ++v) nodes.push_back(std::to_string(v));
  doc["nodes"] = std::move(nodes);

  // A number applies to every link; an object assigns per link id.
  json edge_b = attrs.contains("edge_b") ? attrs.at("edge_b") : json::object();
  std::optional<json> uniform_b;
  if (edge_b.is_number() || edge_b.is_string()) {
    uniform_b = edge_b;
    edge_b = json::object();
  } else if (!edge_b.is_object()) {
    throw ParseError("attrs.edge_b: expected a number or an object keyed by edge");
  }
  std::map<std::string, int> seen;
  std::vector<std::string> ids;
  json edges = json::array();
  for (std::size_t k = 0; k < tntp.links.size(); ++k) {
    const TntpLink& l = tntp.links[k];
    std::string id = std::to_string(l.init_node) + "-" + std::to_string(l.term_node);
    if (const int n = seen[id]++; n > 0) id += "#" + std::to_string(n + 1);
    double tau = l.free_flow_time;
    if (!(tau > 0.0)) {
      if (!(options.min_transit_time > 0.0)) {
        throw ParseError("tntp link " + id + ": non-positive free_flow_time");
      }
      tau = options.min_transit_time;
    }
    if (!(l.capacity > 0.0)) throw ParseError("tntp link " + id + ": non-positive capacity");
    json e = {{"id", id},
              {"tail", std::to_string(l.init_node)},
              {"head", std::to_string(l.term_node)},
              {"tau", tau},
              {"nu", l.capacity * options.capacity_scale}};
    if (edge_b.contains(id)) {
      e["b"] = edge_b.at(id);
      edge_b.erase(id);
    } else if (uniform_b) {
      e["b"] = *uniform_b;
    }
    edges.push_back(std::move(e));
  }
  if (!edge_b.empty()) {
    throw ParseError("attrs.edge_b: unknown edge '" + edge_b.begin().key() + "'");
  }
  doc["edges"] = std::move(edges);
  for (const char* key : {"commodities", "edge_attrs", "stations", "return_epsilon"}) {
    if (attrs.contains(key)) doc[key] = attrs.at(key);
  }
  return ParseInstance(doc.dump());
}

}  // namespace evq
