#include "madf/generator.hpp"

#include <numeric>
#include <random>

namespace madf {

namespace {

struct Rng {
  std::mt19937_64 gen;
  std::int64_t operator()(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(gen); }
};

struct EdgePlan {
  int from;
  int to;
  int out_port;
  int in_port;
  bool bypass;
};

}  // namespace

GeneratedCase generate_case(std::uint64_t seed, const GeneratorOptions& opts) {
  Rng rng{std::mt19937_64(seed)};
  const int n = static_cast<int>(rng(opts.min_actors, opts.max_actors));
  const int modes = static_cast<int>(rng(opts.min_modes, opts.max_modes));
  auto name = [](int i) { return "A" + std::to_string(i + 1); };

  // inactive[m][i]: middle actors only, never two neighbours, and every
  // actor active in at least one mode.
  std::vector<std::vector<bool>> inactive(modes, std::vector<bool>(n, false));
  std::vector<bool> ever_inactive(n, false);
  std::vector<int> inactive_count(n, 0);
  for (int m = 0; m < modes; ++m)
    for (int i = 1; i + 1 < n; ++i)
      if (!inactive[m][i - 1] && inactive_count[i] + 1 < modes && rng.chance(0.25)) {
        ++inactive_count[i];
        inactive[m][i] = true;
        ever_inactive[i] = true;
      }

  std::vector<EdgePlan> edges;
  std::vector<int> outs(n, 0), ins(n, 0);
  auto add_edge = [&](int from, int to, bool bypass) {
    edges.push_back({from, to, outs[from]++, ins[to]++, bypass});
  };
  for (int i = 0; i + 1 < n; ++i) add_edge(i, i + 1, false);
  for (int i = 1; i + 1 < n; ++i)
    if (ever_inactive[i]) add_edge(i - 1, i + 1, true);
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      if (rng.chance(0.2)) add_edge(i, j, false);

  MadfGraph g;
  g.source = name(0);
  g.sink = name(n - 1);
  for (int i = 0; i < n; ++i) {
    DataflowActor a;
    a.id = name(i);
    a.params = {"n2", "n3"};
    auto seq = [](const std::string& port) {
      return ParamSeq{{{Expr(std::int64_t{1}), Expr(port + "_v1")},
                       {Expr("n2"), Expr(port + "_v2")},
                       {Expr("n3"), Expr(port + "_v3")}}};
    };
    for (int k = 0; k < ins[i]; ++k) {
      const std::string port = "I" + std::to_string(k + 1);
      a.inputs.push_back({port, seq(port)});
      for (const char* v : {"_v1", "_v2", "_v3"}) a.params.push_back(port + v);
    }
    for (int k = 0; k < outs[i]; ++k) {
      const std::string port = "O" + std::to_string(k + 1);
      a.outputs.push_back({port, seq(port)});
      for (const char* v : {"_v1", "_v2", "_v3"}) a.params.push_back(port + v);
    }
    g.actors.push_back(std::move(a));
  }
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    g.edges.push_back({"E" + std::to_string(k + 1),
                       {name(e.from), "O" + std::to_string(e.out_port + 1)},
                       {name(e.to), "I" + std::to_string(e.in_port + 1)},
                       0});
  }

  for (int m = 0; m < modes; ++m) {
    const ModeId mode = "M" + std::to_string(m + 1);
    g.control.modes.push_back(mode);
    auto& table = g.control.table[mode];
    std::vector<std::int64_t> n2(n), n3(n), cycles(n);
    for (int i = 0; i < n; ++i) {
      auto& val = table[name(i)];
      if (inactive[m][i]) {
        n2[i] = n3[i] = 0;
      } else {
        n2[i] = rng(0, 2);
        n3[i] = rng(0, 1);
        cycles[i] = rng(1, 3);
        g.actors[i].wcet[mode] = rng(1, opts.max_wcet);
      }
      val["n2"] = n2[i];
      val["n3"] = n3[i];
    }
    // Values of one port: total `sum` tokens per cycle of the actor, at
    // least one in the first phase; zero everywhere when sum == 0.
    auto bind_port = [&](int actor, const std::string& port, std::int64_t sum) {
      auto& val = table[name(actor)];
      std::int64_t v2 = 0, v3 = 0;
      if (sum > 0) {
        if (n2[actor] > 0) v2 = rng(0, (sum - 1) / n2[actor]);
        if (n3[actor] > 0) v3 = rng(0, (sum - 1 - n2[actor] * v2) / n3[actor]);
      }
      val[port + "_v1"] = sum - n2[actor] * v2 - n3[actor] * v3;
      val[port + "_v2"] = v2;
      val[port + "_v3"] = v3;
    };
    for (const auto& e : edges) {
      bool carries = !inactive[m][e.from] && !inactive[m][e.to];
      if (carries && e.bypass && !inactive[m][e.from + 1]) carries = rng.chance(0.5);
      std::int64_t prd = 0, cns = 0;
      if (carries) {
        const auto tokens = std::lcm(cycles[e.from], cycles[e.to]) * rng(1, 2);
        prd = tokens / cycles[e.from];
        cns = tokens / cycles[e.to];
      }
      bind_port(e.from, "O" + std::to_string(e.out_port + 1), prd);
      bind_port(e.to, "I" + std::to_string(e.in_port + 1), cns);
    }
  }

  GeneratedCase out;
  out.graph = std::move(g);
  std::vector<SteadyStateSchedule> schedules;
  for (const auto& mode : out.graph.control.modes)
    schedules.push_back(steady_state(instantiate_mode(out.graph, mode)));
  Allocation two;
  for (int i = 0; i < n; ++i) two.partitions["PE" + std::to_string(rng(1, 2))].insert(name(i));
  if (validate_allocation(two, schedules).empty()) {
    out.allocation = std::move(two);
  } else {
    for (int i = 0; i < n; ++i) out.allocation.partitions["PE" + std::to_string(i + 1)] = {name(i)};
  }
  return out;
}

}  // namespace madf
