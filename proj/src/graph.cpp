#include "madf/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace madf {

std::int64_t Expr::evaluate(const Valuation& values) const {
  if (const auto* literal = std::get_if<std::int64_t>(&term)) return *literal;
  const auto& name = std::get<std::string>(term);
  auto it = values.find(name);
  if (it == values.end())
    throw ModelError("unbound parameter", "parameter '" + name + "' has no value");
  return it->second;
}

std::set<std::string> ParamSeq::parameters() const {
  std::set<std::string> names;
  for (const auto& seg : segments) {
    if (const auto* p = seg.count.param()) names.insert(*p);
    if (const auto* p = seg.value.param()) names.insert(*p);
  }
  return names;
}

std::vector<std::int64_t> ParamSeq::flatten(const Valuation& values) const {
  std::vector<std::int64_t> out;
  for (const auto& seg : segments) {
    const auto count = seg.count.evaluate(values);
    const auto value = seg.value.evaluate(values);
    if (count < 0 || value < 0)
      throw ModelError("negative rate", "sequence binds to a negative count or value");
    out.insert(out.end(), static_cast<std::size_t>(count), value);
  }
  return out;
}

const Port* DataflowActor::input(const std::string& port) const {
  for (const auto& p : inputs)
    if (p.id == port) return &p;
  return nullptr;
}

const Port* DataflowActor::output(const std::string& port) const {
  for (const auto& p : outputs)
    if (p.id == port) return &p;
  return nullptr;
}

bool ControlActor::has_mode(const ModeId& mode) const {
  return std::find(modes.begin(), modes.end(), mode) != modes.end();
}

std::set<ActorId> ControlActor::controlled() const {
  std::set<ActorId> ids;
  for (const auto& [mode, actors] : table)
    for (const auto& [actor, values] : actors) ids.insert(actor);
  return ids;
}

const DataflowActor* MadfGraph::find(const ActorId& id) const {
  for (const auto& a : actors)
    if (a.id == id) return &a;
  return nullptr;
}

std::int64_t CsdfEdge::production_sum() const {
  return std::accumulate(production.begin(), production.end(), std::int64_t{0});
}

std::int64_t CsdfEdge::consumption_sum() const {
  return std::accumulate(consumption.begin(), consumption.end(), std::int64_t{0});
}

std::optional<std::size_t> CsdfInstance::index_of(const ActorId& id) const {
  for (std::size_t i = 0; i < actors.size(); ++i)
    if (actors[i].id == id) return i;
  return std::nullopt;
}

std::size_t CsdfInstance::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(actors.begin(), actors.end(), [](const CsdfActor& a) { return a.active; }));
}

namespace {

using Diags = std::vector<Diagnostic>;

void report(Diags& out, std::string code, std::string subject, std::string message) {
  out.push_back({std::move(code), std::move(subject), std::move(message)});
}

/// Structural checks that do not depend on a mode.
void check_structure(const MadfGraph& g, Diags& out) {
  std::set<ActorId> seen_actors;
  for (const auto& a : g.actors) {
    if (!seen_actors.insert(a.id).second)
      report(out, "duplicate actor", a.id, "actor id '" + a.id + "' is declared twice");
    std::set<std::string> ports;
    for (const auto* group : {&a.inputs, &a.outputs})
      for (const auto& p : *group)
        if (!ports.insert(p.id).second)
          report(out, "duplicate port", a.id + "." + p.id, "port id is declared twice");
    std::set<std::string> params(a.params.begin(), a.params.end());
    if (params.size() != a.params.size())
      report(out, "duplicate parameter", a.id, "parameter vector repeats a name");
    for (const auto* group : {&a.inputs, &a.outputs})
      for (const auto& p : *group)
        for (const auto& name : p.rates.parameters())
          if (!params.count(name))
            report(out, "unknown parameter", a.id + "." + p.id,
                   "sequence references '" + name + "' which is not in the parameter vector");
  }

  std::set<std::string> edge_ids;
  std::map<std::pair<ActorId, std::string>, int> uses;
  for (const auto& e : g.edges) {
    if (!edge_ids.insert(e.id).second)
      report(out, "duplicate edge", e.id, "edge id is declared twice");
    const auto* from = g.find(e.from.actor);
    const auto* to = g.find(e.to.actor);
    if (!from || !from->output(e.from.port))
      report(out, "unknown endpoint", e.id,
             "producer " + e.from.actor + "." + e.from.port + " is not an output port");
    else
      ++uses[{e.from.actor, e.from.port}];
    if (!to || !to->input(e.to.port))
      report(out, "unknown endpoint", e.id,
             "consumer " + e.to.actor + "." + e.to.port + " is not an input port");
    else
      ++uses[{e.to.actor, e.to.port}];
    if (e.initial_tokens < 0)
      report(out, "negative initial tokens", e.id, "initial token count is negative");
  }
  for (const auto& a : g.actors)
    for (const auto* group : {&a.inputs, &a.outputs})
      for (const auto& p : *group) {
        const int n = uses[{a.id, p.id}];
        if (n > 1)
          report(out, "duplicate port connection", a.id + "." + p.id,
                 "port is connected to " + std::to_string(n) + " edges");
        else if (n == 0)
          report(out, "unconnected port", a.id + "." + p.id, "port is not connected to any edge");
      }

  if (!g.find(g.source)) report(out, "unknown source", g.source, "source actor does not exist");
  if (!g.find(g.sink)) report(out, "unknown sink", g.sink, "sink actor does not exist");
  for (const auto& e : g.edges) {
    if (e.to.actor == g.source)
      report(out, "source has predecessors", e.id, "edge feeds the source actor");
    if (e.from.actor == g.sink)
      report(out, "sink has successors", e.id, "edge leaves the sink actor");
  }

  const auto& c = g.control;
  if (c.modes.empty()) report(out, "no modes", "control", "mode table is empty");
  std::set<ModeId> modes;
  for (const auto& m : c.modes)
    if (!modes.insert(m).second) report(out, "duplicate mode", m, "mode id is declared twice");
  for (const auto& [mode, actors] : c.table) {
    if (!modes.count(mode))
      report(out, "unknown mode", mode, "mode table entry for an undeclared mode");
    for (const auto& [actor, values] : actors) {
      const auto* a = g.find(actor);
      if (!a) {
        report(out, "unknown actor in mode table", mode + ":" + actor, "actor does not exist");
        continue;
      }
      for (const auto& [name, v] : values)
        if (std::find(a->params.begin(), a->params.end(), name) == a->params.end())
          report(out, "unknown parameter in mode table", mode + ":" + actor + "." + name,
                 "actor has no such parameter");
    }
  }
}

const Valuation& valuation_of(const MadfGraph& g, const ModeId& mode, const ActorId& actor) {
  static const Valuation empty;
  auto m = g.control.table.find(mode);
  if (m == g.control.table.end()) return empty;
  auto a = m->second.find(actor);
  return a == m->second.end() ? empty : a->second;
}

struct BoundActor {
  std::vector<std::vector<std::int64_t>> inputs;
  std::vector<std::vector<std::int64_t>> outputs;
  bool ok = true;
  bool active = true;
  std::size_t phases = 1;
};

/// Binds one mode. Diagnostics go to `out`; returns nullopt if the mode
/// cannot be instantiated.
std::optional<CsdfInstance> bind_mode(const MadfGraph& g, const ModeId& mode, Diags& out) {
  const std::size_t before = out.size();
  std::map<ActorId, BoundActor> bound;
  for (const auto& a : g.actors) {
    BoundActor b;
    const auto& values = valuation_of(g, mode, a.id);
    for (const auto& name : a.params)
      if (!values.count(name)) {
        report(out, "unbound parameter", mode + ":" + a.id + "." + name,
               "mode assigns no value to parameter '" + name + "'");
        b.ok = false;
      }
    if (!b.ok) {
      bound[a.id] = std::move(b);
      continue;
    }
    auto bind_group = [&](const std::vector<Port>& ports, auto& dest) {
      for (const auto& p : ports) {
        try {
          dest.push_back(p.rates.flatten(values));
        } catch (const ModelError& err) {
          if (err.kind() == "negative rate")
            report(out, "negative rate", mode + ":" + a.id + "." + p.id, err.what());
          // Unknown parameters are reported structurally.
          b.ok = false;
          dest.emplace_back();
        }
      }
    };
    bind_group(a.inputs, b.inputs);
    bind_group(a.outputs, b.outputs);
    if (b.ok) {
      std::set<std::size_t> lengths;
      bool all_zero = true;
      for (const auto* group : {&b.inputs, &b.outputs})
        for (const auto& seq : *group) {
          lengths.insert(seq.size());
          all_zero = all_zero && std::all_of(seq.begin(), seq.end(), [](auto v) { return v == 0; });
        }
      if (lengths.size() > 1) {
        report(out, "phase mismatch", mode + ":" + a.id,
               "sequences of one actor have different lengths");
        b.ok = false;
      }
      const bool has_ports = !lengths.empty();
      b.active = !(has_ports && all_zero);
      b.phases = has_ports ? *lengths.begin() : 1;
      if (b.active) {
        auto w = a.wcet.find(mode);
        if (w == a.wcet.end() || w->second <= 0) {
          report(out, "missing wcet", mode + ":" + a.id, "active actor needs a positive WCET");
          b.ok = false;
        }
      }
    }
    bound[a.id] = std::move(b);
  }
  if (out.size() != before) return std::nullopt;

  CsdfInstance inst;
  inst.mode = mode;
  std::map<ActorId, std::size_t> index;
  for (const auto& a : g.actors) {
    const auto& b = bound[a.id];
    index[a.id] = inst.actors.size();
    CsdfActor ca{a.id, b.active, b.phases, 0};
    if (b.active) ca.wcet = a.wcet.at(mode);
    inst.actors.push_back(ca);
  }
  auto port_index = [](const std::vector<Port>& ports, const std::string& id) {
    for (std::size_t i = 0; i < ports.size(); ++i)
      if (ports[i].id == id) return i;
    return ports.size();
  };
  for (const auto& e : g.edges) {
    const auto* from = g.find(e.from.actor);
    const auto* to = g.find(e.to.actor);
    CsdfEdge ce;
    ce.id = e.id;
    ce.producer = index[e.from.actor];
    ce.consumer = index[e.to.actor];
    ce.production = bound[from->id].outputs[port_index(from->outputs, e.from.port)];
    ce.consumption = bound[to->id].inputs[port_index(to->inputs, e.to.port)];
    ce.initial_tokens = e.initial_tokens;
    const bool pa = inst.actors[ce.producer].active;
    const bool ca = inst.actors[ce.consumer].active;
    if (pa != ca && !ce.idle())
      report(out, "rate to inactive actor", mode + ":" + e.id,
             "edge between an active and an inactive actor carries tokens");
    inst.edges.push_back(std::move(ce));
  }
  inst.source = index[g.source];
  inst.sink = index[g.sink];
  if (!inst.actors[inst.source].active)
    report(out, "inactive source", mode + ":" + g.source, "source must be active in every mode");
  if (!inst.actors[inst.sink].active)
    report(out, "inactive sink", mode + ":" + g.sink, "sink must be active in every mode");

  // Undirected connectivity over active actors.
  std::vector<std::size_t> parent(inst.actors.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = root(parent[i]);
  };
  for (const auto& e : inst.edges)
    if (inst.actors[e.producer].active && inst.actors[e.consumer].active)
      parent[root(e.producer)] = root(e.consumer);
  std::set<std::size_t> components;
  for (std::size_t i = 0; i < inst.actors.size(); ++i)
    if (inst.actors[i].active) components.insert(root(i));
  if (components.size() > 1)
    report(out, "disconnected", mode, "active actors form more than one component");

  if (out.size() != before) return std::nullopt;
  return inst;
}

}  // namespace

std::vector<Diagnostic> validate_graph(const MadfGraph& graph) {
  Diags out;
  check_structure(graph, out);
  if (!out.empty()) return out;  // per-mode binding needs sound structure
  for (const auto& mode : graph.control.modes) bind_mode(graph, mode, out);
  return out;
}

CsdfInstance instantiate_mode(const MadfGraph& graph, const ModeId& mode) {
  if (!graph.control.has_mode(mode))
    throw ModelError("unknown mode", "mode '" + mode + "' is not in the mode table");
  auto diags = validate_graph(graph);
  if (!diags.empty()) {
    // Prefer a diagnostic about the requested mode.
    auto it = std::find_if(diags.begin(), diags.end(), [&](const Diagnostic& d) {
      return d.subject.rfind(mode + ":", 0) == 0 || d.subject == mode;
    });
    const auto& d = it != diags.end() ? *it : diags.front();
    throw ModelError(d.code, d.subject + ": " + d.message);
  }
  Diags scratch;
  return *bind_mode(graph, mode, scratch);
}

}  // namespace madf
