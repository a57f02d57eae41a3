#include "madf/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace madf::io {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path, std::string("missing key '") + key + "'");
  return *it;
}

std::string string_at(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

std::int64_t int_at(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<std::int64_t>();
}

const Json& array_at(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  return j;
}

Expr expr_from(const Json& j, const std::string& path) {
  if (j.is_string()) return Expr(j.get<std::string>());
  return Expr(int_at(j, path));
}

Json expr_to(const Expr& e) {
  if (const auto* p = e.param()) return *p;
  return std::get<std::int64_t>(e.term);
}

// [[count, value], ...]; a bare literal or name stands for [1, value].
ParamSeq seq_from(const Json& j, const std::string& path) {
  ParamSeq seq;
  std::size_t i = 0;
  for (const auto& item : array_at(j, path)) {
    const auto at = path + "/" + std::to_string(i++);
    if (item.is_array()) {
      if (item.size() != 2) schema_error(at, "expected a [count, value] pair");
      seq.segments.push_back({expr_from(item[0], at + "/0"), expr_from(item[1], at + "/1")});
    } else {
      seq.segments.push_back({Expr(std::int64_t{1}), expr_from(item, at)});
    }
  }
  return seq;
}

Json seq_to(const ParamSeq& seq) {
  Json out = Json::array();
  for (const auto& s : seq.segments)
    out.push_back(Json::array({expr_to(s.count), expr_to(s.value)}));
  return out;
}

Endpoint endpoint_from(const Json& j, const std::string& path) {
  const auto text = string_at(j, path);
  const auto dot = text.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == text.size())
    schema_error(path, "expected 'actor.port', got '" + text + "'");
  return {text.substr(0, dot), text.substr(dot + 1)};
}

std::vector<Port> ports_from(const Json& obj, const char* key, const std::string& path) {
  std::vector<Port> ports;
  auto it = obj.find(key);
  if (it == obj.end()) return ports;
  std::size_t i = 0;
  for (const auto& p : array_at(*it, path + "/" + key)) {
    const auto at = path + "/" + key + "/" + std::to_string(i++);
    ports.push_back({string_at(field(p, "id", at), at + "/id"),
                     seq_from(field(p, "rates", at), at + "/rates")});
  }
  return ports;
}

Json ports_to(const std::vector<Port>& ports) {
  Json out = Json::array();
  for (const auto& p : ports) out.push_back({{"id", p.id}, {"rates", seq_to(p.rates)}});
  return out;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const auto end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(
        origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": malformed JSON",
        line, column);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json load_json(const std::string& path) { return parse_json(read_file(path), path); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot write file");
  out << text;
}

MadfGraph graph_from_json(const Json& j) {
  MadfGraph g;
  g.source = string_at(field(j, "source", ""), "/source");
  g.sink = string_at(field(j, "sink", ""), "/sink");

  std::size_t i = 0;
  for (const auto& a : array_at(field(j, "actors", ""), "/actors")) {
    const auto at = "/actors/" + std::to_string(i++);
    DataflowActor actor;
    actor.id = string_at(field(a, "id", at), at + "/id");
    if (auto it = a.find("params"); it != a.end()) {
      std::size_t k = 0;
      for (const auto& p : array_at(*it, at + "/params"))
        actor.params.push_back(string_at(p, at + "/params/" + std::to_string(k++)));
    }
    actor.inputs = ports_from(a, "inputs", at);
    actor.outputs = ports_from(a, "outputs", at);
    if (auto it = a.find("wcet"); it != a.end()) {
      if (!it->is_object()) schema_error(at + "/wcet", "expected an object of mode -> integer");
      for (const auto& [mode, v] : it->items()) {
        const auto w = int_at(v, at + "/wcet/" + mode);
        if (w <= 0) schema_error(at + "/wcet/" + mode, "WCET must be positive");
        actor.wcet[mode] = w;
      }
    }
    g.actors.push_back(std::move(actor));
  }

  i = 0;
  for (const auto& e : array_at(field(j, "edges", ""), "/edges")) {
    const auto at = "/edges/" + std::to_string(i++);
    Edge edge;
    edge.id = string_at(field(e, "id", at), at + "/id");
    edge.from = endpoint_from(field(e, "from", at), at + "/from");
    edge.to = endpoint_from(field(e, "to", at), at + "/to");
    if (auto it = e.find("tokens"); it != e.end())
      edge.initial_tokens = int_at(*it, at + "/tokens");
    g.edges.push_back(std::move(edge));
  }

  i = 0;
  for (const auto& m : array_at(field(j, "modes", ""), "/modes")) {
    const auto at = "/modes/" + std::to_string(i++);
    const auto id = string_at(field(m, "id", at), at + "/id");
    g.control.modes.push_back(id);
    auto& table = g.control.table[id];
    if (auto it = m.find("params"); it != m.end()) {
      if (!it->is_object()) schema_error(at + "/params", "expected an object of actor -> values");
      for (const auto& [actor, values] : it->items()) {
        if (!values.is_object())
          schema_error(at + "/params/" + actor, "expected an object of parameter -> integer");
        auto& val = table[actor];
        for (const auto& [name, v] : values.items())
          val[name] = int_at(v, at + "/params/" + actor + "/" + name);
      }
    }
  }
  return g;
}

Json graph_to_json(const MadfGraph& g) {
  Json actors = Json::array();
  for (const auto& a : g.actors) {
    Json wcet = Json::object();
    for (const auto& [mode, w] : a.wcet) wcet[mode] = w;
    actors.push_back({{"id", a.id},
                      {"params", a.params},
                      {"inputs", ports_to(a.inputs)},
                      {"outputs", ports_to(a.outputs)},
                      {"wcet", wcet}});
  }
  Json edges = Json::array();
  for (const auto& e : g.edges)
    edges.push_back({{"id", e.id},
                     {"from", e.from.actor + "." + e.from.port},
                     {"to", e.to.actor + "." + e.to.port},
                     {"tokens", e.initial_tokens}});
  Json modes = Json::array();
  for (const auto& m : g.control.modes) {
    Json params = Json::object();
    if (auto it = g.control.table.find(m); it != g.control.table.end())
      for (const auto& [actor, values] : it->second) {
        Json v = Json::object();
        for (const auto& [name, x] : values) v[name] = x;
        params[actor] = v;
      }
    modes.push_back({{"id", m}, {"params", params}});
  }
  return {{"source", g.source},
          {"sink", g.sink},
          {"actors", actors},
          {"edges", edges},
          {"modes", modes}};
}

namespace {

template <class F>
auto load_with(const std::string& path, F&& from_json) {
  const auto j = load_json(path);
  try {
    return from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + e.what());
  }
}

}  // namespace

MadfGraph load_graph(const std::string& path) { return load_with(path, graph_from_json); }

}  // namespace madf::io

namespace madf::io {

namespace {

Json time_map_to_json(const ActorMap<Time>& m) {
  Json out = Json::object();
  for (const auto& [a, t] : m) out[a] = t;
  return out;
}

ActorMap<Time> time_map_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object of actor -> integer");
  ActorMap<Time> out;
  for (const auto& [a, v] : j.items()) out[a] = int_at(v, path + "/" + a);
  return out;
}

Json optional_time(const std::optional<Time>& t) { return t ? Json(*t) : Json(nullptr); }

std::optional<Time> optional_time_from(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return int_at(*it, path + "/" + key);
}

Rational rational_at(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  try {
    return parse_rational(string_at(j, path));
  } catch (const ParseError& e) {
    schema_error(path, e.what());
  }
}

template <class T, class F>
std::vector<T> list_from(const Json& j, const std::string& path, F&& item) {
  std::vector<T> out;
  std::size_t i = 0;
  for (const auto& x : array_at(j, path)) out.push_back(item(x, path + "/" + std::to_string(i++)));
  return out;
}

Diagnostic diagnostic_from(const Json& j, const std::string& path) {
  return {string_at(field(j, "code", path), path + "/code"),
          string_at(field(j, "subject", path), path + "/subject"),
          string_at(field(j, "message", path), path + "/message")};
}

Violation violation_at(const Json& j, const std::string& path) {
  return {string_at(field(j, "kind", path), path + "/kind"),
          int_at(field(j, "time", path), path + "/time"),
          string_at(field(j, "subject", path), path + "/subject"),
          string_at(field(j, "message", path), path + "/message")};
}

/// Left-aligned columns separated by two spaces.
std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], r[c].size());
    }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += r[c];
      if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace

UtilizationBound bound_from_json(const Json& j) {
  const auto name = string_at(field(j, "scheduler", ""), "/scheduler");
  if (name == "edf") return UtilizationBound::edf();
  if (name == "rm") return UtilizationBound::rm();
  if (name == "fixed") return UtilizationBound::fixed(rational_at(field(j, "bound", ""), "/bound"));
  schema_error("/scheduler", "unknown scheduler '" + name + "' (expected edf, rm or fixed)");
}

Json bound_to_json(const UtilizationBound& b) {
  switch (b.policy) {
    case UtilizationBound::Policy::edf:
      return {{"scheduler", "edf"}};
    case UtilizationBound::Policy::rm:
      return {{"scheduler", "rm"}};
    case UtilizationBound::Policy::fixed:
      return {{"scheduler", "fixed"}, {"bound", to_string(b.value)}};
  }
  return {};
}

Allocation allocation_from_json(const Json& j) {
  Allocation a;
  if (j.contains("scheduler")) a.bound = bound_from_json(j);
  const auto& parts = field(j, "partitions", "");
  if (!parts.is_object()) schema_error("/partitions", "expected an object of PE -> actor list");
  for (const auto& [pe, actors] : parts.items()) {
    auto& set = a.partitions[pe];
    std::size_t i = 0;
    for (const auto& x : array_at(actors, "/partitions/" + pe))
      set.insert(string_at(x, "/partitions/" + pe + "/" + std::to_string(i++)));
  }
  return a;
}

Json allocation_to_json(const Allocation& a) {
  Json out = bound_to_json(a.bound);
  Json parts = Json::object();
  for (const auto& [pe, actors] : a.partitions)
    parts[pe] = Json(std::vector<ActorId>(actors.begin(), actors.end()));
  out["partitions"] = parts;
  return out;
}

Allocation load_allocation(const std::string& path) {
  return load_with(path, allocation_from_json);
}

Scenario scenario_from_json(const Json& j) {
  Scenario sc;
  sc.initial_mode = string_at(field(j, "initial_mode", ""), "/initial_mode");
  sc.horizon = int_at(field(j, "horizon", ""), "/horizon");
  if (auto it = j.find("requests"); it != j.end())
    sc.requests =
        list_from<ModeChangeRequest>(*it, "/requests", [](const Json& r, const std::string& at) {
          return ModeChangeRequest{int_at(field(r, "time", at), at + "/time"),
                                   string_at(field(r, "target", at), at + "/target")};
        });
  try {
    if (auto it = j.find("protocol"); it != j.end())
      sc.protocol = parse_protocol(string_at(*it, "/protocol"));
    if (auto it = j.find("timing"); it != j.end())
      sc.timing = parse_timing(string_at(*it, "/timing"));
  } catch (const ParseError& e) {
    schema_error("", e.what());
  }
  return sc;
}

Json scenario_to_json(const Scenario& sc) {
  Json reqs = Json::array();
  for (const auto& r : sc.requests) reqs.push_back({{"time", r.time}, {"target", r.target}});
  return {{"initial_mode", sc.initial_mode},
          {"requests", reqs},
          {"horizon", sc.horizon},
          {"protocol", to_string(sc.protocol)},
          {"timing", to_string(sc.timing)}};
}

Scenario load_scenario(const std::string& path) { return load_with(path, scenario_from_json); }

Json schedule_to_json(const SteadyStateSchedule& s) {
  Json actors = Json::array();
  for (const auto& [a, q] : s.q.q) {
    Json row = {{"id", a}, {"active", s.active(a)}, {"q", q}};
    if (s.active(a)) {
      row["wcet"] = s.wcet.at(a);
      row["period"] = s.period.at(a);
      row["start"] = s.start.at(a);
      row["utilization"] = to_string(s.utilization.at(a));
    }
    actors.push_back(row);
  }
  return {{"mode", s.mode},       {"source", s.source},
          {"sink", s.sink},       {"hyper_period", s.hyper_period},
          {"latency", s.latency}, {"actors", actors}};
}

SteadyStateSchedule schedule_from_json(const Json& j) {
  SteadyStateSchedule s;
  s.mode = string_at(field(j, "mode", ""), "/mode");
  s.source = string_at(field(j, "source", ""), "/source");
  s.sink = string_at(field(j, "sink", ""), "/sink");
  s.hyper_period = int_at(field(j, "hyper_period", ""), "/hyper_period");
  s.latency = int_at(field(j, "latency", ""), "/latency");
  std::size_t i = 0;
  for (const auto& row : array_at(field(j, "actors", ""), "/actors")) {
    const auto at = "/actors/" + std::to_string(i++);
    const auto id = string_at(field(row, "id", at), at + "/id");
    s.q.q[id] = int_at(field(row, "q", at), at + "/q");
    const auto& active = field(row, "active", at);
    if (!active.is_boolean()) schema_error(at + "/active", "expected a boolean");
    if (!active.get<bool>()) continue;
    s.wcet[id] = int_at(field(row, "wcet", at), at + "/wcet");
    s.period[id] = int_at(field(row, "period", at), at + "/period");
    s.start[id] = int_at(field(row, "start", at), at + "/start");
    s.utilization[id] = rational_at(field(row, "utilization", at), at + "/utilization");
  }
  return s;
}

Json transition_to_json(const TransitionAnalysis& t) {
  return {{"from", t.from},
          {"to", t.to},
          {"x", t.x},
          {"delta", t.delta},
          {"allocation_aware", t.allocation_aware},
          {"delta_min", t.delta_min},
          {"delta_max", t.delta_max},
          {"sigma_lower", time_map_to_json(t.sigma_lower)},
          {"sigma_upper", time_map_to_json(t.sigma_upper)}};
}

TransitionAnalysis transition_from_json(const Json& j) {
  TransitionAnalysis t;
  t.from = string_at(field(j, "from", ""), "/from");
  t.to = string_at(field(j, "to", ""), "/to");
  t.x = int_at(field(j, "x", ""), "/x");
  t.delta = int_at(field(j, "delta", ""), "/delta");
  const auto& aware = field(j, "allocation_aware", "");
  if (!aware.is_boolean()) schema_error("/allocation_aware", "expected a boolean");
  t.allocation_aware = aware.get<bool>();
  t.delta_min = int_at(field(j, "delta_min", ""), "/delta_min");
  t.delta_max = int_at(field(j, "delta_max", ""), "/delta_max");
  t.sigma_lower = time_map_from_json(field(j, "sigma_lower", ""), "/sigma_lower");
  t.sigma_upper = time_map_from_json(field(j, "sigma_upper", ""), "/sigma_upper");
  return t;
}

Json diagnostic_to_json(const Diagnostic& d) {
  return {{"code", d.code}, {"subject", d.subject}, {"message", d.message}};
}

Json violation_to_json(const Violation& v) {
  return {{"kind", v.kind}, {"time", v.time}, {"subject", v.subject}, {"message", v.message}};
}

Violation violation_from_json(const Json& j) { return violation_at(j, ""); }

Json trace_summary_to_json(const SimTrace& t) {
  Json segs = Json::array();
  for (const auto& s : t.segments)
    segs.push_back({{"mode", s.mode},
                    {"request", optional_time(s.request)},
                    {"old_completion", s.old_completion},
                    {"origin", s.origin},
                    {"iterations", s.iterations},
                    {"source_start", optional_time(s.source_start)},
                    {"sink_start", optional_time(s.sink_start)},
                    {"delay", optional_time(s.delay())},
                    {"latency", optional_time(s.latency())},
                    {"first_start", time_map_to_json(s.first_start)}});
  Json fifo = Json::object();
  for (const auto& [e, v] : t.fifo_min) fifo[e] = v;
  Json viol = Json::array();
  for (const auto& v : t.violations) viol.push_back(violation_to_json(v));
  return {{"timing", to_string(t.timing)},
          {"protocol", to_string(t.protocol)},
          {"segments", segs},
          {"fifo_min", fifo},
          {"violations", viol}};
}

SimTrace trace_summary_from_json(const Json& j) {
  SimTrace t;
  try {
    t.timing = parse_timing(string_at(field(j, "timing", ""), "/timing"));
    t.protocol = parse_protocol(string_at(field(j, "protocol", ""), "/protocol"));
  } catch (const ParseError& e) {
    schema_error("", e.what());
  }
  t.segments = list_from<ModeSegment>(
      field(j, "segments", ""), "/segments", [](const Json& s, const std::string& at) {
        ModeSegment m;
        m.mode = string_at(field(s, "mode", at), at + "/mode");
        m.request = optional_time_from(s, "request", at);
        m.old_completion = int_at(field(s, "old_completion", at), at + "/old_completion");
        m.origin = int_at(field(s, "origin", at), at + "/origin");
        m.iterations = int_at(field(s, "iterations", at), at + "/iterations");
        m.source_start = optional_time_from(s, "source_start", at);
        m.sink_start = optional_time_from(s, "sink_start", at);
        m.first_start = time_map_from_json(field(s, "first_start", at), at + "/first_start");
        return m;
      });
  const auto& fifo = field(j, "fifo_min", "");
  if (!fifo.is_object()) schema_error("/fifo_min", "expected an object");
  for (const auto& [e, v] : fifo.items()) t.fifo_min[e] = int_at(v, "/fifo_min/" + e);
  t.violations = list_from<Violation>(field(j, "violations", ""), "/violations", violation_at);
  return t;
}

std::string trace_to_csv(const SimTrace& t) {
  std::string out = "time,actor,mode,firing,kind\n";
  for (const auto& e : t.events)
    out += std::to_string(e.time) + "," + e.actor + "," + e.mode + "," + std::to_string(e.firing) +
           "," + to_string(e.kind) + "\n";
  return out;
}

std::string schedules_to_text(const std::vector<SteadyStateSchedule>& modes,
                              const std::vector<ActorId>& actors) {
  std::string out;
  for (const auto& s : modes) {
    out += "mode " + s.mode + "  H=" + std::to_string(s.hyper_period) +
           "  L=" + std::to_string(s.latency) + "\n";
    std::vector<std::vector<std::string>> rows{{""},       {"q"},     {"WCET"},
                                               {"period"}, {"start"}, {"utilization"}};
    for (const auto& a : actors) {
      rows[0].push_back(a);
      const bool on = s.active(a);
      rows[1].push_back(std::to_string(s.q[a]));
      rows[2].push_back(on ? std::to_string(s.wcet.at(a)) : "-");
      rows[3].push_back(on ? std::to_string(s.period.at(a)) : "-");
      rows[4].push_back(on ? std::to_string(s.start.at(a)) : "-");
      rows[5].push_back(on ? to_string(s.utilization.at(a)) : "-");
    }
    out += table(rows) + "\n";
  }
  return out;
}

std::string transitions_to_text(const std::vector<TransitionAnalysis>& ts) {
  std::vector<std::vector<std::string>> rows{
      {"transition", "delay_min", "delay_max", "x", "delta"}};
  for (const auto& t : ts)
    rows.push_back({t.from + "->" + t.to, std::to_string(t.delta_min), std::to_string(t.delta_max),
                    std::to_string(t.x), std::to_string(t.delta)});
  return table(rows);
}

std::string trace_summary_to_text(const SimTrace& t) {
  std::string out = "timing " + to_string(t.timing) + ", protocol " + to_string(t.protocol) + "\n";
  auto opt = [](const std::optional<Time>& v) { return v ? std::to_string(*v) : std::string("-"); };
  std::vector<std::vector<std::string>> rows{
      {"segment", "mode", "request", "origin", "source_start", "sink_start", "delay", "latency"}};
  for (std::size_t i = 0; i < t.segments.size(); ++i) {
    const auto& s = t.segments[i];
    rows.push_back({std::to_string(i), s.mode, opt(s.request), std::to_string(s.origin),
                    opt(s.source_start), opt(s.sink_start), opt(s.delay()), opt(s.latency())});
  }
  out += table(rows);
  std::vector<std::vector<std::string>> fifo{{"edge", "fifo_min"}};
  for (const auto& [e, v] : t.fifo_min) fifo.push_back({e, std::to_string(v)});
  out += "\n" + table(fifo);
  if (!t.violations.empty()) {
    out += "\nviolations:\n";
    for (const auto& v : t.violations)
      out +=
          "  " + std::to_string(v.time) + " " + v.kind + " " + v.subject + ": " + v.message + "\n";
  }
  return out;
}

std::string diagnostics_to_text(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) out += d.code + " [" + d.subject + "]: " + d.message + "\n";
  return out;
}

Json report_to_json(const Report& r) {
  auto list = [](const auto& xs, auto&& f) {
    Json out = Json::array();
    for (const auto& x : xs) out.push_back(f(x));
    return out;
  };
  return {{"graph", graph_to_json(r.graph)},
          {"diagnostics", list(r.diagnostics, diagnostic_to_json)},
          {"modes", list(r.modes, schedule_to_json)},
          {"allocation", r.allocation ? allocation_to_json(*r.allocation) : Json(nullptr)},
          {"allocation_diagnostics", list(r.allocation_diagnostics, diagnostic_to_json)},
          {"transitions", list(r.transitions, transition_to_json)},
          {"scenario", r.scenario ? scenario_to_json(*r.scenario) : Json(nullptr)},
          {"simulation", r.simulation ? trace_summary_to_json(*r.simulation) : Json(nullptr)},
          {"violations", list(r.violations, violation_to_json)}};
}

Report report_from_json(const Json& j) {
  auto nested = [](const Json& x, const std::string& at, auto&& f) {
    try {
      return f(x);
    } catch (const ParseError& e) {
      throw ParseError(at + e.what());
    }
  };
  auto present = [&](const char* key) {
    auto it = j.find(key);
    return it != j.end() && !it->is_null();
  };
  Report r;
  r.graph = nested(field(j, "graph", ""), "/graph", graph_from_json);
  r.diagnostics =
      list_from<Diagnostic>(field(j, "diagnostics", ""), "/diagnostics", diagnostic_from);
  r.modes = list_from<SteadyStateSchedule>(
      field(j, "modes", ""), "/modes",
      [&](const Json& x, const std::string& at) { return nested(x, at, schedule_from_json); });
  if (present("allocation"))
    r.allocation = nested(j["allocation"], "/allocation", allocation_from_json);
  r.allocation_diagnostics = list_from<Diagnostic>(field(j, "allocation_diagnostics", ""),
                                                   "/allocation_diagnostics", diagnostic_from);
  r.transitions = list_from<TransitionAnalysis>(
      field(j, "transitions", ""), "/transitions",
      [&](const Json& x, const std::string& at) { return nested(x, at, transition_from_json); });
  if (present("scenario")) r.scenario = nested(j["scenario"], "/scenario", scenario_from_json);
  if (present("simulation"))
    r.simulation = nested(j["simulation"], "/simulation", trace_summary_from_json);
  r.violations = list_from<Violation>(field(j, "violations", ""), "/violations", violation_at);
  return r;
}

std::string report_to_text(const Report& r) {
  std::string out;
  std::vector<ActorId> actors;
  for (const auto& a : r.graph.actors) actors.push_back(a.id);
  if (!r.diagnostics.empty()) out += "diagnostics:\n" + diagnostics_to_text(r.diagnostics) + "\n";
  if (!r.modes.empty()) out += schedules_to_text(r.modes, actors);
  if (r.allocation) {
    out += "allocation (" + r.allocation->bound.name() + "):\n";
    for (const auto& [pe, set] : r.allocation->partitions) {
      out += "  " + pe + ":";
      for (const auto& a : set) out += " " + a;
      out += "\n";
    }
    out += diagnostics_to_text(r.allocation_diagnostics) + "\n";
  }
  if (!r.transitions.empty()) out += transitions_to_text(r.transitions) + "\n";
  if (r.simulation) out += trace_summary_to_text(*r.simulation);
  if (!r.violations.empty()) {
    out += "\nverification:\n";
    for (const auto& v : r.violations)
      out +=
          "  " + std::to_string(v.time) + " " + v.kind + " " + v.subject + ": " + v.message + "\n";
  }
  return out;
}

Json error_to_json(const Error& e) {
  Json err = {{"kind", e.kind()}, {"message", e.what()}};
  if (const auto* p = dynamic_cast<const ParseError*>(&e); p && p->line() > 0) {
    err["line"] = p->line();
    err["column"] = p->column();
  }
  return {{"error", err}};
}

}  // namespace madf::io
