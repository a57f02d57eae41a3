#pragma once

// Random consistent, acyclic MADF graphs for property testing.
//
// Actors A1..An form a chain from the source A1 to the sink An, plus random
// forward edges. Middle actors may be inactive in some modes; an inactive
// actor is bypassed by an edge from its predecessor to its successor.
// Every consumer reads at least one token in its first phase, so each
// actor starts no earlier than its producers and the sink starts last.

#include <cstdint>

#include "madf/transition.hpp"

namespace madf {

struct GeneratorOptions {
  int min_actors = 2;
  int max_actors = 6;
  int min_modes = 1;
  int max_modes = 3;
  Time max_wcet = 6;
};

struct GeneratedCase {
  MadfGraph graph;
  Allocation allocation;  // EDF on two PEs when feasible, else one actor per PE
};

/// Deterministic for a given seed on a given standard library.
GeneratedCase generate_case(std::uint64_t seed, const GeneratorOptions& opts = {});

}  // namespace madf
