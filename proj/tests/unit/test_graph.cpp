#include <doctest.h>

#include "fixtures.hpp"
#include "gdirac/model.hpp"

using namespace gdirac;

namespace {

const char* kStar = R"({
  "mass": 0.5, "c": 1.0,
  "vertices": ["o", "x"],
  "edges": [
    {"id": "h1", "kind": "halfline", "from": "o"},
    {"id": "h2", "kind": "halfline", "from": "o"},
    {"id": "s", "kind": "segment", "length": 2.0, "from": "o", "to": "x"}
  ]
})";

}  // namespace

TEST_CASE("graph document parses into edges, degrees and incidence") {
  const auto doc = parse_graph(kStar);
  const auto& g = doc.graph;
  CHECK(g.edge_count() == 3);
  CHECK(g.segment_count() == 1);
  CHECK(g.halfline_count() == 2);
  CHECK_FALSE(g.is_compact());
  CHECK(g.degree(*g.find_vertex("o")) == 3);
  CHECK(g.degree(*g.find_vertex("x")) == 1);
  CHECK(g.is_terminal_segment(*g.find_edge("s")));
  CHECK(g.total_segment_length() == doctest::Approx(2.0));
  CHECK(doc.params.threshold() == doctest::Approx(0.5));
}

TEST_CASE("serialisation round-trips") {
  for (const char* f : {"model_star.json", "lens.json", "decoupled_segment.json", "corpus/random_3.json"}) {
    const auto doc = fixtures::load(f);
    const auto text = to_json(doc);
    const auto again = parse_graph(text);
    CHECK(to_json(again) == text);
    CHECK(again.graph.edge_count() == doc.graph.edge_count());
  }
}

TEST_CASE("invalid documents are rejected") {
  CHECK_THROWS_AS(parse_graph("{"), ValidationError);
  CHECK_THROWS_AS(parse_graph(R"({"mass": -1, "c": 1, "vertices": ["a"], "edges": []})"), ValidationError);
  CHECK_THROWS_AS(parse_graph(R"({"mass": 1, "c": 1, "vertices": ["a", "b"],
    "edges": [{"id": "s", "kind": "segment", "length": -1, "from": "a", "to": "b"}]})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_graph(R"({"mass": 1, "c": 1, "vertices": ["a", "b"],
    "edges": [{"id": "s", "kind": "segment", "length": 1, "from": "a", "to": "q"}]})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_graph(R"({"mass": 1, "c": 1, "vertices": ["a", "b", "c", "d"],
    "edges": [{"id": "s", "kind": "segment", "length": 1, "from": "a", "to": "b"},
              {"id": "t", "kind": "segment", "length": 1, "from": "c", "to": "d"}]})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_graph(R"({"mass": 1, "c": 1, "vertices": ["a", "b"],
    "edges": [{"id": "s", "kind": "segment", "length": 1, "from": "a", "to": "b"},
              {"id": "s", "kind": "segment", "length": 2, "from": "a", "to": "b"}]})"),
                  ValidationError);
  CHECK_THROWS_AS(load_graph(fixtures::path("missing.json")), ValidationError);
}

TEST_CASE("compact core keeps the bounded edges") {
  const auto doc = fixtures::load("lens.json");
  const auto core = compact_core(doc.graph);
  CHECK(core.edge_count() == 2);
  CHECK(core.is_compact());
  CHECK(compact_core(fixtures::load("threshold_star.json").graph).segment_count() == 2);
}

TEST_CASE("builtin model is deterministic") {
  const auto a = to_json(builtin_model());
  const auto b = to_json(builtin_model());
  CHECK(a == b);
  const auto doc = builtin_model();
  CHECK(doc.params.mass == 0.5);
  CHECK(doc.params.light_speed == 1.0);
  CHECK(doc.graph.halfline_count() == 2);
  CHECK(doc.graph.segment_count() == 1);
}
