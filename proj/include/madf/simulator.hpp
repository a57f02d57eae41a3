#pragma once

// Discrete-event execution of a MADF graph across mode changes.
//
// Two timing regimes:
//  - sps: every actor is a strictly periodic task; a firing released at r
//    consumes at r and produces at r + T.
//  - self_timed: firings start as soon as tokens are available and the
//    previous firing of the same actor has completed; they consume at the
//    start and produce at start + WCET. Input-free actors release one
//    iteration every hyper-period.
//
// Events at equal times are ordered: mode change requests, completions and
// productions, releases, mode-switch records; actors by id.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "madf/transition.hpp"

namespace madf {

enum class Protocol { moo, st, sync };
enum class Timing { sps, self_timed };

std::string to_string(Protocol p);
std::string to_string(Timing t);
Protocol parse_protocol(const std::string& text);
Timing parse_timing(const std::string& text);

struct ModeChangeRequest {
  Time time = 0;
  ModeId target;
  bool operator==(const ModeChangeRequest&) const = default;
};

struct Scenario {
  ModeId initial_mode;
  std::vector<ModeChangeRequest> requests;  // strictly increasing times
  Time horizon = 0;
  Protocol protocol = Protocol::moo;
  Timing timing = Timing::sps;
  bool operator==(const Scenario&) const = default;
};

/// Throws ModelError("invalid scenario") on unknown modes, unordered
/// requests or a horizon shorter than last request + its target's H.
void validate_scenario(const Scenario& sc, const std::map<ModeId, SteadyStateSchedule>& modes);

enum class EventKind { release, complete, mode_switch, mcr_accepted, mcr_ignored };
std::string to_string(EventKind k);

struct TraceEvent {
  Time time = 0;
  ActorId actor;  // empty for mode change requests
  ModeId mode;
  std::int64_t firing = 0;  // per-actor count over the whole run; request index for MCRs
  EventKind kind = EventKind::release;
  std::size_t segment = 0;  // index into SimTrace::segments
  bool operator==(const TraceEvent&) const = default;
};

/// One stretch of execution in a single mode. Segment 0 is the initial
/// mode; every later segment was opened by an accepted request.
struct ModeSegment {
  ModeId mode;
  std::optional<Time> request;   // accepting request time
  Time old_completion = 0;       // F of the previous segment
  Time origin = 0;               // source start of the first iteration
  std::int64_t iterations = -1;  // -1 while open-ended
  std::optional<Time> source_start;
  std::optional<Time> sink_start;
  ActorMap<Time> first_start;

  /// Observed transition delay (sink start - request).
  std::optional<Time> delay() const;
  /// Observed latency of the first iteration.
  std::optional<Time> latency() const;
  bool operator==(const ModeSegment&) const = default;
};

struct Violation {
  std::string kind;  // fifo underflow, deadline miss, overload, periodicity, ...
  Time time = 0;
  std::string subject;
  std::string message;
  bool operator==(const Violation&) const = default;
};

struct SimTrace {
  Timing timing = Timing::sps;
  Protocol protocol = Protocol::moo;
  std::vector<TraceEvent> events;
  std::vector<ModeSegment> segments;
  std::map<std::string, std::int64_t> fifo_min;  // edge id -> lowest occupancy
  std::vector<Violation> violations;

  bool operator==(const SimTrace&) const = default;
};

/// `schedules` holds the SPS analysis of every mode the scenario visits.
/// Under MOO the new mode starts at F + delta (delta from the allocation,
/// or x without one); under SYNC at F + S_snk^old; under ST (self-timed
/// only) as soon as data and completion of the old iteration allow.
SimTrace simulate(const MadfGraph& graph, const std::map<ModeId, SteadyStateSchedule>& schedules,
                  const Allocation* alloc, const Scenario& sc);

/// First firing starts of one self-timed iteration, relative to the source.
ActorMap<Time> self_timed_offsets(const CsdfInstance& g, const SteadyStateSchedule& sps);
/// `sps` with start offsets and latency replaced by the self-timed ones.
SteadyStateSchedule self_timed_schedule(const CsdfInstance& g, const SteadyStateSchedule& sps);

/// FIFO underflow, periodicity (sps), quiescence, observed delays within
/// the analysed bounds and first-iteration latency equal to the mode's L.
/// `schedules` must match the trace's regime (self-timed offsets for a
/// self-timed trace).
std::vector<Violation> verify_trace(const SimTrace& trace,
                                    const std::map<ModeId, SteadyStateSchedule>& schedules,
                                    const std::vector<TransitionAnalysis>& analyses);

}  // namespace madf
