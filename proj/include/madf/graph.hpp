#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "madf/types.hpp"

namespace madf {

/// Parameter valuation of one actor: parameter name -> value.
using Valuation = std::map<std::string, std::int64_t>;

/// An integer literal or the name of a parameter of the owning actor.
struct Expr {
  std::variant<std::int64_t, std::string> term;

  Expr() : term(std::int64_t{0}) {}
  Expr(std::int64_t literal) : term(literal) {}          // NOLINT(implicit)
  Expr(int literal) : term(std::int64_t{literal}) {}     // NOLINT(implicit)
  Expr(std::string param) : term(std::move(param)) {}    // NOLINT(implicit)
  Expr(const char* param) : term(std::string(param)) {}  // NOLINT(implicit)

  bool is_literal() const { return std::holds_alternative<std::int64_t>(term); }
  const std::string* param() const { return std::get_if<std::string>(&term); }
  /// Throws ModelError("unbound parameter") if the name has no value.
  std::int64_t evaluate(const Valuation& values) const;

  bool operator==(const Expr&) const = default;
};

/// `count[value]` repeated for every segment; flattening concatenates them.
struct ParamSeq {
  struct Segment {
    Expr count;
    Expr value;
    bool operator==(const Segment&) const = default;
  };
  std::vector<Segment> segments;

  /// Parameter names referenced anywhere in the sequence.
  std::set<std::string> parameters() const;
  /// Binds every expression and expands the segments into a flat sequence.
  std::vector<std::int64_t> flatten(const Valuation& values) const;

  bool operator==(const ParamSeq&) const = default;
};

struct Port {
  std::string id;
  ParamSeq rates;
  bool operator==(const Port&) const = default;
};

struct DataflowActor {
  ActorId id;
  std::vector<Port> inputs;
  std::vector<Port> outputs;
  std::vector<std::string> params;
  std::map<ModeId, Time> wcet;

  const Port* input(const std::string& port) const;
  const Port* output(const std::string& port) const;
  bool operator==(const DataflowActor&) const = default;
};

/// Mode table of the control actor. The control actor itself is not scheduled.
struct ControlActor {
  std::vector<ModeId> modes;  // declaration order
  std::map<ModeId, std::map<ActorId, Valuation>> table;

  bool has_mode(const ModeId& mode) const;
  /// Actors that receive a parameter vector over a control edge.
  std::set<ActorId> controlled() const;
  bool operator==(const ControlActor&) const = default;
};

struct Endpoint {
  ActorId actor;
  std::string port;
  bool operator==(const Endpoint&) const = default;
};

struct Edge {
  std::string id;
  Endpoint from;  // output port
  Endpoint to;    // input port
  std::int64_t initial_tokens = 0;
  bool operator==(const Edge&) const = default;
};

struct MadfGraph {
  std::vector<DataflowActor> actors;
  ControlActor control;
  std::vector<Edge> edges;
  ActorId source;
  ActorId sink;

  const DataflowActor* find(const ActorId& id) const;
  bool operator==(const MadfGraph&) const = default;
};

struct Diagnostic {
  std::string code;     // e.g. "duplicate port connection"
  std::string subject;  // actor / port / edge / mode identity
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

/// Every structural invariant of MadfGraph, checked across all modes.
/// The result is empty iff the graph is well formed.
std::vector<Diagnostic> validate_graph(const MadfGraph& graph);

/// One actor of a mode-instantiated graph.
struct CsdfActor {
  ActorId id;
  bool active = true;
  std::size_t phases = 1;
  Time wcet = 0;
};

struct CsdfEdge {
  std::string id;
  std::size_t producer = 0;
  std::size_t consumer = 0;
  std::vector<std::int64_t> production;
  std::vector<std::int64_t> consumption;
  std::int64_t initial_tokens = 0;

  std::int64_t production_sum() const;
  std::int64_t consumption_sum() const;
  /// Edge carries no tokens in this mode.
  bool idle() const { return production_sum() == 0 && consumption_sum() == 0; }
};

/// Concrete cyclo-static graph of one mode.
struct CsdfInstance {
  ModeId mode;
  std::vector<CsdfActor> actors;
  std::vector<CsdfEdge> edges;
  std::size_t source = 0;
  std::size_t sink = 0;

  std::optional<std::size_t> index_of(const ActorId& id) const;
  std::size_t active_count() const;
};

/// Binds the mode's parameter valuation and flattens every sequence.
/// Throws ModelError for unknown modes, unbound parameters, negative
/// values, or any other diagnostic reported by validate_graph.
CsdfInstance instantiate_mode(const MadfGraph& graph, const ModeId& mode);

}  // namespace madf
