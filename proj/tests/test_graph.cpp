#include <doctest.h>

#include "fixtures.hpp"
#include "madf/generator.hpp"

using namespace madf;

namespace {

std::vector<std::string> codes(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.code);
  return out;
}

const CsdfEdge& edge(const CsdfInstance& g, const std::string& id) {
  for (const auto& e : g.edges)
    if (e.id == id) return e;
  throw std::runtime_error("no edge " + id);
}

}  // namespace

TEST_CASE("flattening expands counts and binds parameters") {
  ParamSeq seq{{{1, "p5"}, {1, 0}}};
  CHECK(seq.flatten({{"p5", 2}}) == std::vector<std::int64_t>{2, 0});
  ParamSeq counted{{{"n", 3}, {2, "v"}}};
  CHECK(counted.flatten({{"n", 2}, {"v", 7}}) == std::vector<std::int64_t>{3, 3, 7, 7});
  CHECK(counted.parameters() == std::set<std::string>{"n", "v"});
  CHECK_THROWS_AS(counted.flatten({{"n", 2}}), ModelError);
  CHECK_THROWS_WITH_AS(seq.flatten({{"p5", -1}}), doctest::Contains("negative"), ModelError);
}

TEST_CASE("G1 is well formed") { CHECK(validate_graph(fixtures::g1()).empty()); }

TEST_CASE("G1 in SI1 binds A5 to [2,0]/[0,0] and deactivates A4") {
  const auto g = instantiate_mode(fixtures::g1(), "SI1");
  CHECK(edge(g, "E3").consumption == std::vector<std::int64_t>{2, 0});
  CHECK(edge(g, "E5").consumption == std::vector<std::int64_t>{0, 0});
  CHECK_FALSE(g.actors[*g.index_of("A4")].active);
  CHECK(g.active_count() == 4);
  CHECK(g.actors[*g.index_of("A2")].wcet == 4);
}

TEST_CASE("G1 in SI2 activates every actor") {
  const auto g = instantiate_mode(fixtures::g1(), "SI2");
  CHECK(g.active_count() == 5);
  CHECK(edge(g, "E3").consumption == std::vector<std::int64_t>{1, 0});
  CHECK(edge(g, "E5").consumption == std::vector<std::int64_t>{0, 1});
  CHECK(g.actors[*g.index_of("A4")].wcet == 3);
}

TEST_CASE("count zero on every port makes an actor inactive") {
  MadfGraph g;
  g.source = "S";
  g.sink = "K";
  g.actors = {
      {"S", {}, {{"o", ParamSeq{{{1, 1}}}}, {"o2", ParamSeq{{{1, "b"}}}}}, {"b"}, {{"m", 1}}},
      {"X", {{"i", ParamSeq{{{"c", 1}}}}}, {{"o", ParamSeq{{{"c", 1}}}}}, {"c"}, {}},
      {"K", {{"i", ParamSeq{{{1, 1}}}}, {"i2", ParamSeq{{{1, "b"}}}}}, {}, {"b"}, {{"m", 1}}}};
  g.edges = {{"e1", {"S", "o"}, {"K", "i"}},
             {"e2", {"S", "o2"}, {"X", "i"}},
             {"e3", {"X", "o"}, {"K", "i2"}}};
  g.control.modes = {"m"};
  g.control.table["m"] = {{"S", {{"b", 0}}}, {"X", {{"c", 0}}}, {"K", {{"b", 0}}}};
  REQUIRE(validate_graph(g).empty());
  const auto inst = instantiate_mode(g, "m");
  CHECK_FALSE(inst.actors[1].active);
  CHECK(inst.actors[1].phases == 0);
  CHECK(repetition_vector(inst)["X"] == 0);
}

TEST_CASE("a port on two edges is one duplicate port connection") {
  auto g = fixtures::g1();
  g.actors.push_back({"A6", {{"IP1", ParamSeq{{{1, 1}}}}}, {}, {}, {{"SI1", 1}, {"SI2", 1}}});
  g.edges.push_back({"E6", {"A3", "OP1"}, {"A6", "IP1"}});
  const auto ds = validate_graph(g);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].code == "duplicate port connection");
  CHECK(ds[0].subject == "A3.OP1");
}

TEST_CASE("a mode omitting a parameter of A2 is one unbound parameter") {
  auto g = fixtures::g1();
  g.control.table["SI1"].erase("A2");
  const auto ds = validate_graph(g);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].code == "unbound parameter");
  CHECK(ds[0].subject == "SI1:A2.p2");
  CHECK_THROWS_AS(instantiate_mode(g, "SI2"), ModelError);
}

TEST_CASE("structural diagnostics name the offending element") {
  SUBCASE("unknown endpoint") {
    auto g = fixtures::g1();
    g.edges[0].to.port = "nope";
    const auto c = codes(validate_graph(g));
    CHECK(std::find(c.begin(), c.end(), "unknown endpoint") != c.end());
  }
  SUBCASE("unconnected port") {
    auto g = fixtures::g1();
    g.edges.pop_back();
    const auto c = codes(validate_graph(g));
    CHECK(c == std::vector<std::string>{"unconnected port", "unconnected port"});
  }
  SUBCASE("source with a predecessor") {
    auto g = fixtures::g1();
    g.source = "A2";
    const auto c = codes(validate_graph(g));
    CHECK(std::find(c.begin(), c.end(), "source has predecessors") != c.end());
  }
  SUBCASE("duplicate mode") {
    auto g = fixtures::g1();
    g.control.modes.push_back("SI1");
    CHECK(codes(validate_graph(g)) == std::vector<std::string>{"duplicate mode"});
  }
  SUBCASE("negative rate") {
    auto g = fixtures::g1();
    g.control.table["SI1"]["A2"]["p2"] = -1;
    CHECK(codes(validate_graph(g)) == std::vector<std::string>{"negative rate", "negative rate"});
  }
  SUBCASE("missing wcet") {
    auto g = fixtures::g1();
    g.actors[1].wcet.erase("SI2");
    CHECK(codes(validate_graph(g)) == std::vector<std::string>{"missing wcet"});
  }
  SUBCASE("unknown mode") {
    CHECK_THROWS_WITH_AS(instantiate_mode(fixtures::g1(), "SI9"), doctest::Contains("SI9"),
                         ModelError);
  }
}

TEST_CASE("instantiation succeeds exactly when validation is clean") {
  std::vector<MadfGraph> graphs{fixtures::g1(), io::load_graph(fixtures::data("broken.json"))};
  auto unbound = fixtures::g1();
  unbound.control.table["SI2"]["A5"].erase("p6");
  graphs.push_back(unbound);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) graphs.push_back(generate_case(seed).graph);
  for (const auto& g : graphs) {
    const bool clean = validate_graph(g).empty();
    for (const auto& mode : g.control.modes) {
      bool ok = true;
      try {
        instantiate_mode(g, mode);
      } catch (const ModelError&) {
        ok = false;
      }
      CHECK(ok == clean);
    }
  }
}

TEST_CASE("graph JSON round-trips") {
  std::vector<MadfGraph> graphs{fixtures::g1()};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) graphs.push_back(generate_case(seed).graph);
  for (const auto& g : graphs) {
    const auto j = io::graph_to_json(g);
    const auto back = io::graph_from_json(io::parse_json(j.dump()));
    CHECK(back == g);
    CHECK(io::graph_to_json(back).dump() == j.dump());
  }
}
