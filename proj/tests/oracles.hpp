#pragma once

// Independent reference computations used only by the tests. They follow
// the textbook definitions literally, with plain loops and no shared code
// paths beyond the data types.

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "madf/io.hpp"

namespace oracle {

using madf::Rational;
using madf::Time;

/// Tokens on `e` at instant X when the producer releases at
/// s_j + m*T_j and each firing's tokens appear at its deadline.
inline std::int64_t available(const madf::CsdfEdge& e, Time s_j, Time t_j, Time x) {
  std::int64_t total = e.initial_tokens;
  for (Time m = 0; s_j + m * t_j + t_j <= x; ++m)
    total += e.production[static_cast<std::size_t>(m) % e.production.size()];
  return total;
}

/// Tokens read by consumer releases at t + m*T_i, m >= 0, up to and including X.
inline std::int64_t demanded(const madf::CsdfEdge& e, Time t, Time t_i, Time x) {
  std::int64_t total = 0;
  for (Time m = 0; t + m * t_i <= x; ++m)
    total += e.consumption[static_cast<std::size_t>(m) % e.consumption.size()];
  return total;
}

/// Smallest t in [0, s_j + H] with enough tokens at every instant of
/// [max(s_j, t), max(s_j, t) + H]; -1 if none.
inline Time edge_start(const madf::CsdfEdge& e, Time s_j, Time t_j, Time t_i, Time hyper) {
  for (Time t = 0; t <= s_j + hyper; ++t) {
    bool ok = true;
    const Time x0 = std::max(s_j, t);
    for (Time k = 0; ok && k <= hyper; ++k)
      ok = available(e, s_j, t_j, x0 + k) >= demanded(e, t, t_i, x0 + k);
    if (ok) return t;
  }
  return -1;
}

/// Start offsets by repeated relaxation over all edges (no topological sort).
inline std::map<std::string, Time> start_times(const madf::CsdfInstance& g,
                                               const madf::SteadyStateSchedule& s) {
  std::map<std::string, Time> start;
  for (const auto& a : g.actors)
    if (a.active) start[a.id] = 0;
  for (std::size_t round = 0; round < g.actors.size(); ++round)
    for (const auto& e : g.edges) {
      const auto& p = g.actors[e.producer];
      const auto& c = g.actors[e.consumer];
      if (!p.active || !c.active || e.consumption_sum() == 0 || e.producer == e.consumer) continue;
      const Time t =
          edge_start(e, start[p.id], s.period.at(p.id), s.period.at(c.id), s.hyper_period);
      start[c.id] = std::max(start[c.id], t);
    }
  return start;
}

inline int heaviside(Time z) { return z >= 0 ? 1 : 0; }

/// U_j(k) = sum_old (u - h(k - S^o) u) + sum_new h(k - S^l - t) u.
inline Rational pe_utilization(Time k, Time t, const std::set<std::string>& pe,
                               const madf::SteadyStateSchedule& o,
                               const madf::SteadyStateSchedule& l) {
  Rational u = 0;
  for (const auto& a : pe) {
    if (o.active(a))
      u += o.utilization.at(a) - Rational(heaviside(k - o.start.at(a))) * o.utilization.at(a);
    if (l.active(a)) u += Rational(heaviside(k - l.start.at(a) - t)) * l.utilization.at(a);
  }
  return u;
}

/// Full integer sweep of t in [x, S_snk^o] and k in [t, S_snk^o] under EDF.
inline Time delta(const madf::Allocation& alloc, const madf::SteadyStateSchedule& o,
                  const madf::SteadyStateSchedule& l, Time x) {
  const Time end = o.sink_start();
  for (Time t = x; t <= end; ++t) {
    bool ok = true;
    for (Time k = t; ok && k <= end; ++k)
      for (const auto& [pe, actors] : alloc.partitions)
        if (pe_utilization(k, t, actors, o, l) > Rational(1)) ok = false;
    if (ok) return t;
  }
  return -1;
}

}  // namespace oracle
