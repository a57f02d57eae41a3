#pragma once

// JSON file formats and report rendering. Syntax errors carry line/column;
// schema errors carry the JSON path of the offending value. Every JSON
// writer has a reader that restores the same value.

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "madf/simulator.hpp"

namespace madf::io {

using Json = nlohmann::ordered_json;

/// Parses text; throws ParseError with the line/column of a syntax error.
Json parse_json(const std::string& text, const std::string& origin = "<input>");
Json load_json(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

MadfGraph graph_from_json(const Json& j);
Json graph_to_json(const MadfGraph& g);
MadfGraph load_graph(const std::string& path);

UtilizationBound bound_from_json(const Json& j);
Json bound_to_json(const UtilizationBound& b);
Allocation allocation_from_json(const Json& j);
Json allocation_to_json(const Allocation& a);
Allocation load_allocation(const std::string& path);

Scenario scenario_from_json(const Json& j);
Json scenario_to_json(const Scenario& sc);
Scenario load_scenario(const std::string& path);

Json schedule_to_json(const SteadyStateSchedule& s);
SteadyStateSchedule schedule_from_json(const Json& j);
Json transition_to_json(const TransitionAnalysis& t);
TransitionAnalysis transition_from_json(const Json& j);
Json diagnostic_to_json(const Diagnostic& d);
Json violation_to_json(const Violation& v);
Violation violation_from_json(const Json& j);

/// Trace without its event list: segments, FIFO minima, violations.
Json trace_summary_to_json(const SimTrace& t);
SimTrace trace_summary_from_json(const Json& j);
/// time,actor,mode,firing,kind
std::string trace_to_csv(const SimTrace& t);

/// Table with one column per actor (in `actors` order), rows q, WCET,
/// period, start, utilization.
std::string schedules_to_text(const std::vector<SteadyStateSchedule>& modes,
                              const std::vector<ActorId>& actors);
std::string transitions_to_text(const std::vector<TransitionAnalysis>& ts);
std::string trace_summary_to_text(const SimTrace& t);
std::string diagnostics_to_text(const std::vector<Diagnostic>& ds);

/// Everything one run can produce, as a single document.
struct Report {
  MadfGraph graph;
  std::vector<Diagnostic> diagnostics;
  std::vector<SteadyStateSchedule> modes;
  std::optional<Allocation> allocation;
  std::vector<Diagnostic> allocation_diagnostics;
  std::vector<TransitionAnalysis> transitions;
  std::optional<Scenario> scenario;
  std::optional<SimTrace> simulation;  // summary only
  std::vector<Violation> violations;   // from verify_trace
};

Json report_to_json(const Report& r);
Report report_from_json(const Json& j);
std::string report_to_text(const Report& r);

/// {"error": {"kind", "message", "line"?, "column"?}}
Json error_to_json(const Error& e);

}  // namespace madf::io
