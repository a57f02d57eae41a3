#include <doctest.h>

#include "madf/generator.hpp"
#include "madf/io.hpp"

using namespace madf;

TEST_CASE("generator is deterministic and produces valid cases") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto a = generate_case(seed);
    CHECK(io::graph_to_json(a.graph).dump() == io::graph_to_json(generate_case(seed).graph).dump());
    CHECK(validate_graph(a.graph).empty());
    const auto n = a.graph.actors.size();
    CHECK(n >= 2);
    CHECK(n <= 6);
    CHECK(a.graph.control.modes.size() <= 3);
    std::vector<SteadyStateSchedule> modes;
    for (const auto& m : a.graph.control.modes)
      modes.push_back(steady_state(instantiate_mode(a.graph, m)));
    CHECK(validate_allocation(a.allocation, modes).empty());
  }
  CHECK(io::graph_to_json(generate_case(1).graph) != io::graph_to_json(generate_case(2).graph));
}
