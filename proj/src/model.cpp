#include "gdirac/model.hpp"

namespace gdirac {

GraphDocument builtin_model(cplx a, cplx b) {
  std::vector<Edge> edges = {
      {"e1", EdgeKind::halfline, std::numeric_limits<double>::infinity(), 0, kNoVertex},
      {"e2", EdgeKind::halfline, std::numeric_limits<double>::infinity(), 0, kNoVertex},
      {"e3", EdgeKind::segment, 1.0, 0, 1},
  };
  std::map<std::size_t, EndpointCondition> conds{{1, EndpointCondition{a, -kI * b}}};
  return {MetricGraph({"v0", "v1"}, std::move(edges), std::move(conds)), PhysicalParams{0.5, 1.0}};
}

}  // namespace gdirac
