#include "madf/csdf.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include "madf/kernels.hpp"

namespace madf {

std::int64_t RepetitionVector::operator[](const ActorId& id) const {
  auto it = q.find(id);
  return it == q.end() ? 0 : it->second;
}

namespace {

bool constrains(const CsdfInstance& g, const CsdfEdge& e) {
  return g.actors[e.producer].active && g.actors[e.consumer].active && !e.idle();
}

std::string join(const std::vector<ActorId>& ids) {
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
  return out;
}

}  // namespace

RepetitionVector repetition_vector(const CsdfInstance& g) {
  const std::size_t n = g.actors.size();
  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    if (!constrains(g, e)) continue;
    if (e.production_sum() == 0 || e.consumption_sum() == 0)
      throw AnalysisError("inconsistent", "edge " + e.id +
                                              " has zero rate on one side only; "
                                              "the balance equation has only the trivial solution");
    incident[e.producer].push_back(k);
    incident[e.consumer].push_back(k);
  }

  // Propagate rational firing ratios; each component is normalized on its own.
  std::vector<Rational> r(n, Rational(0));
  std::vector<int> component(n, -1);
  int components = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (!g.actors[root].active || component[root] >= 0) continue;
    const int c = components++;
    component[root] = c;
    r[root] = 1;
    std::deque<std::size_t> work{root};
    while (!work.empty()) {
      const auto a = work.front();
      work.pop_front();
      for (auto k : incident[a]) {
        const auto& e = g.edges[k];
        const Rational prd = e.production_sum();
        const Rational cns = e.consumption_sum();
        const std::size_t other = e.producer == a ? e.consumer : e.producer;
        const Rational expected = e.producer == a ? r[a] * prd / cns : r[a] * cns / prd;
        if (component[other] < 0) {
          component[other] = c;
          r[other] = expected;
          work.push_back(other);
        } else if (r[other] != expected) {
          throw AnalysisError("inconsistent", "edge " + e.id + " violates the balance equation (" +
                                                  g.actors[e.producer].id + " -> " +
                                                  g.actors[e.consumer].id + ")");
        }
      }
    }
  }

  RepetitionVector out;
  for (int c = 0; c < components; ++c) {
    std::int64_t den = 1;
    for (std::size_t i = 0; i < n; ++i)
      if (component[i] == c) den = std::lcm(den, r[i].denominator());
    std::int64_t g_all = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (component[i] == c) g_all = std::gcd(g_all, (r[i] * den).numerator());
    for (std::size_t i = 0; i < n; ++i)
      if (component[i] == c)
        out.q[g.actors[i].id] =
            (r[i] * den).numerator() / g_all * static_cast<std::int64_t>(g.actors[i].phases);
  }
  for (const auto& a : g.actors)
    if (!a.active) out.q[a.id] = 0;
  return out;
}

LivenessResult check_liveness(const CsdfInstance& g, const RepetitionVector& q) {
  std::vector<std::int64_t> tokens;
  for (const auto& e : g.edges) tokens.push_back(e.initial_tokens);
  std::vector<std::int64_t> fired(g.actors.size(), 0);
  std::vector<std::vector<std::size_t>> ins(g.actors.size()), outs(g.actors.size());
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    ins[g.edges[k].consumer].push_back(k);
    outs[g.edges[k].producer].push_back(k);
  }
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t a = 0; a < g.actors.size(); ++a) {
      const auto& actor = g.actors[a];
      if (!actor.active) continue;
      while (fired[a] < q[actor.id]) {
        const auto phase = static_cast<std::size_t>(fired[a]) % actor.phases;
        const bool ready = std::all_of(ins[a].begin(), ins[a].end(), [&](std::size_t k) {
          return g.edges[k].consumption[phase] <= tokens[k];
        });
        if (!ready) break;
        for (auto k : ins[a]) tokens[k] -= g.edges[k].consumption[phase];
        for (auto k : outs[a]) tokens[k] += g.edges[k].production[phase];
        ++fired[a];
        progress = true;
      }
    }
  }
  LivenessResult result;
  for (std::size_t a = 0; a < g.actors.size(); ++a)
    if (g.actors[a].active && fired[a] < q[g.actors[a].id]) result.stuck.push_back(g.actors[a].id);
  result.live = result.stuck.empty();
  return result;
}

ActorMap<Time> sps_periods(const CsdfInstance& g, const RepetitionVector& q) {
  std::int64_t lcm_q = 1;
  Time bottleneck = 0;
  for (const auto& a : g.actors) {
    if (!a.active) continue;
    lcm_q = std::lcm(lcm_q, q[a.id]);
    bottleneck = std::max(bottleneck, a.wcet * q[a.id]);
  }
  const Time scale = ceil_div(bottleneck, lcm_q);
  ActorMap<Time> periods;
  for (const auto& a : g.actors)
    if (a.active) periods[a.id] = lcm_q / q[a.id] * scale;
  return periods;
}

namespace {

std::int64_t released_sum(const std::vector<std::int64_t>& seq, PeriodicTask task,
                          TimeWindow window) {
  if (seq.empty() || window.end <= window.begin) return 0;
  const Time first = std::max<Time>(0, ceil_div(window.begin - task.start, task.period));
  std::int64_t total = 0;
  for (Time m = first; task.start + m * task.period < window.end; ++m)
    total += seq[static_cast<std::size_t>(m) % seq.size()];
  return total;
}

}  // namespace

std::int64_t cumulative_produced(const CsdfEdge& edge, const PeriodicTask& producer,
                                 TimeWindow window) {
  return released_sum(edge.production, producer, window);
}

std::int64_t cumulative_consumed(const CsdfEdge& edge, const PeriodicTask& consumer,
                                 TimeWindow window) {
  return released_sum(edge.consumption, consumer, window);
}

Time edge_start_scan(const CsdfEdge& edge, PeriodicTask producer, Time consumer_period,
                     Time hyper) {
  const Time s_j = producer.start;
  const Time horizon = s_j + 2 * hyper;  // max(S_j, t) + k with t <= S_j + H, k <= H
  const auto size = static_cast<std::size_t>(horizon + 1);

  // available[X]: tokens on the edge at X, counting a firing released at r
  // once its deadline r + T_j <= X.
  std::vector<std::int64_t> available(size, 0);
  available[0] = edge.initial_tokens;
  for (Time m = 0;; ++m) {
    const Time at = s_j + (m + 1) * producer.period;
    if (at > horizon) break;
    available[static_cast<std::size_t>(at)] +=
        edge.production[static_cast<std::size_t>(m) % edge.production.size()];
  }
  kernels::inclusive_scan(available);

  // demand[y]: tokens consumed by releases at offsets <= y from the consumer start.
  std::vector<std::int64_t> demand(size, 0);
  for (Time m = 0; m * consumer_period <= horizon; ++m)
    demand[static_cast<std::size_t>(m * consumer_period)] +=
        edge.consumption[static_cast<std::size_t>(m) % edge.consumption.size()];
  kernels::inclusive_scan(demand);

  const auto window = static_cast<std::size_t>(hyper + 1);
  for (Time t = 0; t <= s_j + hyper; ++t) {
    const Time x0 = std::max(s_j, t);
    const std::span<const std::int64_t> have(available.data() + x0, window);
    const std::span<const std::int64_t> need(demand.data() + (x0 - t), window);
    if (kernels::min_difference(have, need) >= 0) return t;
  }
  throw AnalysisError("unsupported structure",
                      "no start offset within [0, S_j + H] satisfies edge " + edge.id);
}

Time edge_start_closed_form(const CsdfEdge& edge, PeriodicTask producer, Time consumer_period,
                            Time hyper) {
  const auto& prd = edge.production;
  const auto& cns = edge.consumption;
  const Time q_j = hyper / producer.period;
  const Time q_i = hyper / consumer_period;
  std::vector<std::int64_t> prefix;  // tokens produced by the first m+1 firings of an iteration
  std::int64_t per_iteration = 0;
  for (Time m = 0; m < q_j; ++m) {
    per_iteration += prd[static_cast<std::size_t>(m) % prd.size()];
    prefix.push_back(per_iteration);
  }
  if (per_iteration == 0) {
    // Nothing is ever produced: only the initial tokens can be read.
    std::int64_t need = 0;
    for (Time m = 0; m < q_i; ++m) need += cns[static_cast<std::size_t>(m) % cns.size()];
    if (need == 0) return 0;
    throw AnalysisError("inconsistent", "edge " + edge.id + " is consumed but never produced");
  }
  // Time from which the c-th token (1-based) is available.
  auto available_at = [&](std::int64_t c) -> Time {
    const std::int64_t produced = c - edge.initial_tokens;
    const std::int64_t full = (produced - 1) / per_iteration;
    const std::int64_t rest = produced - full * per_iteration;
    const auto it = std::lower_bound(prefix.begin(), prefix.end(), rest);
    const Time m = full * q_j + static_cast<Time>(it - prefix.begin());
    return producer.start + (m + 1) * producer.period;
  };
  Time start = 0;
  std::int64_t consumed = 0;
  // One full consumer iteration past the point where the initial tokens run out.
  const Time releases = q_i * (2 + edge.initial_tokens / per_iteration);
  for (Time m = 0; m < releases; ++m) {
    consumed += cns[static_cast<std::size_t>(m) % cns.size()];
    if (consumed <= edge.initial_tokens) continue;
    start = std::max(start, available_at(consumed) - m * consumer_period);
  }
  if (start > producer.start + hyper)
    throw AnalysisError("unsupported structure",
                        "no start offset within [0, S_j + H] satisfies edge " + edge.id);
  return start;
}

ActorMap<Time> earliest_start_times(const CsdfInstance& g, const RepetitionVector& q,
                                    const ActorMap<Time>& periods, StartTimeMethod method) {
  Time hyper = 0;
  for (const auto& a : g.actors)
    if (a.active) hyper = q[a.id] * periods.at(a.id);
  if (method == StartTimeMethod::automatic)
    method = hyper <= kScanHyperPeriodLimit ? StartTimeMethod::scan : StartTimeMethod::closed_form;
  auto edge_start = [&](const CsdfEdge& e, PeriodicTask producer, Time consumer_period) {
    return method == StartTimeMethod::scan
               ? edge_start_scan(e, producer, consumer_period, hyper)
               : edge_start_closed_form(e, producer, consumer_period, hyper);
  };

  const std::size_t n = g.actors.size();
  std::vector<std::vector<std::size_t>> into(n);
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    if (!constrains(g, e)) continue;
    const auto& id = g.actors[e.producer].id;
    if (e.producer == e.consumer) {
      // Relative to itself the actor must be able to start at offset 0.
      const Time need = edge_start(e, {0, periods.at(id)}, periods.at(id));
      if (need > 0)
        throw AnalysisError("unsupported structure",
                            "self-loop " + e.id + " on " + id + " lacks initial tokens");
      continue;
    }
    into[e.consumer].push_back(k);
    succ[e.producer].push_back(e.consumer);
    ++indegree[e.consumer];
  }

  std::vector<std::size_t> order;
  std::deque<std::size_t> ready;
  for (std::size_t a = 0; a < n; ++a)
    if (g.actors[a].active && indegree[a] == 0) ready.push_back(a);
  while (!ready.empty()) {
    const auto a = ready.front();
    ready.pop_front();
    order.push_back(a);
    for (auto b : succ[a])
      if (--indegree[b] == 0) ready.push_back(b);
  }
  if (order.size() != g.active_count()) {
    std::vector<ActorId> cyclic;
    for (std::size_t a = 0; a < n; ++a)
      if (g.actors[a].active && indegree[a] > 0) cyclic.push_back(g.actors[a].id);
    throw AnalysisError("unsupported structure",
                        "cyclic data dependencies among " + join(cyclic) +
                            "; strictly periodic start times need an acyclic graph");
  }

  ActorMap<Time> start;
  for (auto a : order) {
    Time s = 0;
    for (auto k : into[a]) {
      const auto& e = g.edges[k];
      const auto& pid = g.actors[e.producer].id;
      s = std::max(s, edge_start(e, {start.at(pid), periods.at(pid)}, periods.at(g.actors[a].id)));
    }
    start[g.actors[a].id] = s;
  }
  return start;
}

SteadyStateSchedule steady_state(const CsdfInstance& g, StartTimeMethod method) {
  SteadyStateSchedule s;
  s.mode = g.mode;
  s.source = g.actors[g.source].id;
  s.sink = g.actors[g.sink].id;
  s.q = repetition_vector(g);
  const auto live = check_liveness(g, s.q);
  if (!live)
    throw AnalysisError("deadlock",
                        "mode " + g.mode + " deadlocks; stuck actors: " + join(live.stuck));
  s.period = sps_periods(g, s.q);
  s.start = earliest_start_times(g, s.q, s.period, method);
  for (const auto& a : g.actors) {
    if (!a.active) continue;
    s.wcet[a.id] = a.wcet;
    s.utilization[a.id] = Rational(a.wcet, s.period.at(a.id));
    s.hyper_period = s.q[a.id] * s.period.at(a.id);
  }
  s.latency = s.sink_start() - s.source_start();
  return s;
}

}  // namespace madf
