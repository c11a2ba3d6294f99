#include "gdirac/graph.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gdirac {

using nlohmann::json;

void validate(const PhysicalParams& p) {
  if (!(p.mass > 0.0) || !std::isfinite(p.mass)) {
    throw ValidationError("mass must be positive and finite");
  }
  if (!(p.light_speed > 0.0) || !std::isfinite(p.light_speed)) {
    throw ValidationError("light speed must be positive and finite");
  }
}

MetricGraph::MetricGraph(std::vector<std::string> vertices, std::vector<Edge> edges,
                         std::map<std::size_t, EndpointCondition> endpoint_conditions)
    : vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      endpoint_conditions_(std::move(endpoint_conditions)) {
  if (vertices_.empty()) throw ValidationError("graph has no vertices");
  if (edges_.empty()) throw ValidationError("graph has no edges");

  std::set<std::string> names(vertices_.begin(), vertices_.end());
  if (names.size() != vertices_.size()) throw ValidationError("duplicate vertex name");
  std::set<std::string> ids;
  for (const auto& e : edges_) {
    if (!ids.insert(e.id).second) throw ValidationError("duplicate edge id '" + e.id + "'");
  }

  incidence_.assign(vertices_.size(), {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    auto& e = edges_[i];
    if (e.from >= vertices_.size()) {
      throw ValidationError("edge '" + e.id + "' has a dangling endpoint");
    }
    if (e.is_segment()) {
      if (!std::isfinite(e.length) || !(e.length > 0.0)) {
        throw ValidationError("segment '" + e.id + "' needs a positive finite length");
      }
      if (e.to >= vertices_.size()) {
        throw ValidationError("segment '" + e.id + "' has a dangling endpoint");
      }
      ++segments_;
    } else {
      e.length = std::numeric_limits<double>::infinity();
      e.to = kNoVertex;
    }
    incidence_[e.from].push_back({i, EndKind::origin});
    if (e.is_segment()) incidence_[e.to].push_back({i, EndKind::far});
  }

  // Connectivity by union-find over edge ends.
  std::vector<std::size_t> parent(vertices_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& e : edges_) {
    if (e.is_segment()) parent[root(e.from)] = root(e.to);
  }
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (incidence_[v].empty()) {
      throw ValidationError("vertex '" + vertices_[v] + "' has no incident edge");
    }
    if (root(v) != root(0)) throw ValidationError("graph is disconnected");
  }

  for (const auto& [v, cond] : endpoint_conditions_) {
    if (v >= vertices_.size()) throw ValidationError("endpoint condition on unknown vertex");
    if (incidence_[v].size() != 1) {
      throw ValidationError("endpoint condition on vertex '" + vertices_[v] +
                            "' requires degree 1");
    }
    if (cond.a == cplx{} && cond.b == cplx{}) {
      throw ValidationError("endpoint condition with a = b = 0");
    }
  }
}

std::size_t MetricGraph::vertex_at(Endpoint p) const {
  const auto& e = edges_.at(p.edge);
  return p.end == EndKind::origin ? e.from : e.to;
}

std::optional<std::size_t> MetricGraph::find_vertex(std::string_view name) const {
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (vertices_[v] == name) return v;
  }
  return std::nullopt;
}

std::optional<std::size_t> MetricGraph::find_edge(std::string_view id) const {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].id == id) return i;
  }
  return std::nullopt;
}

const EndpointCondition* MetricGraph::endpoint_condition(std::size_t v) const {
  auto it = endpoint_conditions_.find(v);
  return it == endpoint_conditions_.end() ? nullptr : &it->second;
}

bool MetricGraph::is_terminal_segment(std::size_t e) const {
  const auto& edge = edges_.at(e);
  if (!edge.is_segment() || edge.from == edge.to) return false;
  const bool from_leaf = degree(edge.from) == 1;
  const bool to_leaf = degree(edge.to) == 1;
  return from_leaf != to_leaf;
}

double MetricGraph::total_segment_length() const {
  double total = 0.0;
  for (const auto& e : edges_) {
    if (e.is_segment()) total += e.length;
  }
  return total;
}

namespace {

cplx parse_scalar(const json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ValidationError(std::string("field '") + what + "' must be a number or [re, im]");
}

json scalar_to_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace

GraphDocument parse_graph(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed graph document: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("graph document must be a JSON object");

  try {
    GraphDocument out;
    out.params.mass = require(doc, "mass").get<double>();
    out.params.light_speed = require(doc, "c").get<double>();
    validate(out.params);

    std::vector<std::string> vertices;
    for (const auto& v : require(doc, "vertices")) vertices.push_back(v.get<std::string>());
    auto index_of = [&](const std::string& name) {
      for (std::size_t v = 0; v < vertices.size(); ++v) {
        if (vertices[v] == name) return v;
      }
      throw ValidationError("edge endpoint refers to unknown vertex '" + name + "'");
    };

    std::vector<Edge> edges;
    for (const auto& je : require(doc, "edges")) {
      Edge e;
      e.id = require(je, "id").get<std::string>();
      const auto kind = require(je, "kind").get<std::string>();
      e.from = index_of(require(je, "from").get<std::string>());
      if (kind == "segment") {
        e.kind = EdgeKind::segment;
        e.length = require(je, "length").get<double>();
        e.to = index_of(require(je, "to").get<std::string>());
      } else if (kind == "halfline") {
        e.kind = EdgeKind::halfline;
      } else {
        throw ValidationError("unknown edge kind '" + kind + "'");
      }
      edges.push_back(std::move(e));
    }

    std::map<std::size_t, EndpointCondition> conditions;
    if (auto it = doc.find("endpoint_conditions"); it != doc.end()) {
      for (const auto& jc : *it) {
        const auto v = index_of(require(jc, "vertex").get<std::string>());
        conditions[v] = {parse_scalar(require(jc, "a"), "a"), parse_scalar(require(jc, "b"), "b")};
      }
    }
    out.graph = MetricGraph(std::move(vertices), std::move(edges), std::move(conditions));
    return out;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed graph document: ") + e.what());
  }
}

GraphDocument load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graph document '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

std::string to_json(const GraphDocument& doc) {
  const auto& g = doc.graph;
  json out;
  out["mass"] = doc.params.mass;
  out["c"] = doc.params.light_speed;
  out["vertices"] = g.vertices();
  json edges = json::array();
  for (const auto& e : g.edges()) {
    json je;
    je["id"] = e.id;
    je["kind"] = e.is_segment() ? "segment" : "halfline";
    if (e.is_segment()) je["length"] = e.length;
    je["from"] = g.vertices()[e.from];
    if (e.is_segment()) je["to"] = g.vertices()[e.to];
    edges.push_back(std::move(je));
  }
  out["edges"] = std::move(edges);
  if (!g.endpoint_conditions().empty()) {
    json conds = json::array();
    for (const auto& [v, c] : g.endpoint_conditions()) {
      conds.push_back({{"vertex", g.vertices()[v]}, {"a", scalar_to_json(c.a)}, {"b", scalar_to_json(c.b)}});
    }
    out["endpoint_conditions"] = std::move(conds);
  }
  return out.dump(2);
}

MetricGraph compact_core(const MetricGraph& g) {
  MetricGraph core;
  std::vector<std::size_t> remap(g.vertex_count(), kNoVertex);
  for (const auto& e : g.edges()) {
    if (!e.is_segment()) continue;
    for (auto v : {e.from, e.to}) {
      if (remap[v] == kNoVertex) {
        remap[v] = core.vertices_.size();
        core.vertices_.push_back(g.vertices()[v]);
      }
    }
    Edge copy = e;
    copy.from = remap[e.from];
    copy.to = remap[e.to];
    core.edges_.push_back(std::move(copy));
  }
  core.incidence_.assign(core.vertices_.size(), {});
  for (std::size_t i = 0; i < core.edges_.size(); ++i) {
    core.incidence_[core.edges_[i].from].push_back({i, EndKind::origin});
    core.incidence_[core.edges_[i].to].push_back({i, EndKind::far});
  }
  core.segments_ = core.edges_.size();
  return core;
}

}  // namespace gdirac
