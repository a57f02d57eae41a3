#pragma once

#include <map>
#include <string>

#include "madf/io.hpp"

#ifndef MADF_DATA_DIR
#define MADF_DATA_DIR "data"
#endif

namespace fixtures {

inline std::string data(const std::string& name) { return std::string(MADF_DATA_DIR) + "/" + name; }

inline const madf::MadfGraph& g1() {
  static const auto g = madf::io::load_graph(data("g1.json"));
  return g;
}

inline const madf::SteadyStateSchedule& g1_mode(const std::string& mode) {
  static const auto modes = [] {
    std::map<std::string, madf::SteadyStateSchedule> m;
    for (const auto& id : g1().control.modes)
      m[id] = madf::steady_state(madf::instantiate_mode(g1(), id));
    return m;
  }();
  return modes.at(mode);
}

inline std::map<std::string, madf::SteadyStateSchedule> g1_modes() {
  return {{"SI1", g1_mode("SI1")}, {"SI2", g1_mode("SI2")}};
}

inline const madf::Allocation& alloc3pe() {
  static const auto a = madf::io::load_allocation(data("alloc3pe.json"));
  return a;
}

inline const madf::Allocation& alloc_per_actor() {
  static const auto a = madf::io::load_allocation(data("alloc_per_actor.json"));
  return a;
}

}  // namespace fixtures
