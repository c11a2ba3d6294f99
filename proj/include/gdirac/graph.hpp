#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gdirac/common.hpp"

namespace gdirac {

/// Mass and speed of light, natural units with hbar = 1.
struct PhysicalParams {
  double mass = 0.5;
  double light_speed = 1.0;

  /// Spectral threshold m c^2.
  double threshold() const noexcept { return mass * light_speed * light_speed; }
};

/// Throws ValidationError unless m > 0 and c > 0.
void validate(const PhysicalParams& p);

enum class EdgeKind { segment, halfline };

/// Which end of an edge: coordinate 0 or coordinate l_e.
enum class EndKind { origin, far };

inline constexpr std::size_t kNoVertex = std::numeric_limits<std::size_t>::max();

struct Edge {
  std::string id;
  EdgeKind kind = EdgeKind::segment;
  double length = std::numeric_limits<double>::infinity();
  std::size_t from = kNoVertex;  // vertex at coordinate 0
  std::size_t to = kNoVertex;    // vertex at coordinate l_e (segments only)

  bool is_segment() const noexcept { return kind == EdgeKind::segment; }
};

/// One edge end sitting at a vertex.
struct Endpoint {
  std::size_t edge = 0;
  EndKind end = EndKind::origin;

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

/// Sign carried by the second-component trace at an endpoint in the balance
/// condition: +1 at coordinate 0, -1 at coordinate l_e.
inline double balance_sign(EndKind end) noexcept {
  return end == EndKind::origin ? 1.0 : -1.0;
}

/// Replacement condition a * Gamma0 = b * Gamma1 on the single trace slot of
/// a degree-1 vertex. a = 1, b = 0 at a far end (or a = 0, b = 1 at an
/// origin end) is the Kirchhoff-type condition psi2 = 0.
struct EndpointCondition {
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};
};

class MetricGraph {
 public:
  MetricGraph() = default;

  /// Builds and validates. Throws ValidationError on nonpositive or
  /// non-finite segment lengths, dangling endpoints, duplicate ids,
  /// disconnected graphs and misplaced endpoint conditions.
  MetricGraph(std::vector<std::string> vertices, std::vector<Edge> edges,
              std::map<std::size_t, EndpointCondition> endpoint_conditions = {});

  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t segment_count() const noexcept { return segments_; }
  std::size_t halfline_count() const noexcept { return edges_.size() - segments_; }
  bool is_compact() const noexcept { return halfline_count() == 0; }

  /// Endpoints incident at vertex v, in edge order (origin before far).
  const std::vector<Endpoint>& incident(std::size_t v) const { return incidence_.at(v); }
  std::size_t degree(std::size_t v) const { return incidence_.at(v).size(); }
  std::size_t vertex_at(Endpoint p) const;

  std::optional<std::size_t> find_vertex(std::string_view name) const;
  std::optional<std::size_t> find_edge(std::string_view id) const;

  const std::map<std::size_t, EndpointCondition>& endpoint_conditions() const noexcept {
    return endpoint_conditions_;
  }
  const EndpointCondition* endpoint_condition(std::size_t v) const;

  /// A segment one of whose ends is a degree-1 vertex and the other is not.
  bool is_terminal_segment(std::size_t e) const;

  double total_segment_length() const;

 private:
  friend MetricGraph compact_core(const MetricGraph& g);

  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Endpoint>> incidence_;
  std::map<std::size_t, EndpointCondition> endpoint_conditions_;
  std::size_t segments_ = 0;
};

struct GraphDocument {
  MetricGraph graph;
  PhysicalParams params;
};

/// Parses the JSON graph document. Throws ValidationError.
GraphDocument parse_graph(std::string_view text);
GraphDocument load_graph(const std::string& path);

/// Inverse of parse_graph (stable key order, full precision).
std::string to_json(const GraphDocument& doc);

/// Sub-graph of bounded edges and the vertices they touch. May be empty and
/// is not required to be connected.
MetricGraph compact_core(const MetricGraph& g);

}  // namespace gdirac
