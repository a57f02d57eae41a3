#pragma once

// Per-mode steady-state analysis under strictly periodic scheduling (SPS):
// repetition vector, liveness, periods, earliest start offsets,
// hyper-period, iteration latency and utilization.
//
// Timing contract: a firing released at r consumes its input tokens at r
// and produces its output tokens at r + T (implicit deadline). A token
// produced at time X may be consumed by a release at X.

#include <cstdint>
#include <string>
#include <vector>

#include "madf/graph.hpp"

namespace madf {

/// Firings per graph iteration; 0 for inactive actors.
struct RepetitionVector {
  ActorMap<std::int64_t> q;

  std::int64_t operator[](const ActorId& id) const;
  bool operator==(const RepetitionVector&) const = default;
};

/// Minimal positive integer solution of the balance equations, scaled by
/// the phase counts. Throws AnalysisError("inconsistent") naming an edge
/// that violates the balance.
RepetitionVector repetition_vector(const CsdfInstance& g);

struct LivenessResult {
  bool live = false;
  std::vector<ActorId> stuck;  // actors with firings left when deadlocked

  explicit operator bool() const { return live; }
};

/// Zero-duration symbolic execution of one iteration from the initial tokens.
LivenessResult check_liveness(const CsdfInstance& g, const RepetitionVector& q);

/// Minimum SPS periods of the active actors.
ActorMap<Time> sps_periods(const CsdfInstance& g, const RepetitionVector& q);

/// Half-open interval [begin, end) of integer time.
struct TimeWindow {
  Time begin = 0;
  Time end = 0;
};

/// Strictly periodic release pattern of one actor.
struct PeriodicTask {
  Time start = 0;
  Time period = 1;
};

/// Tokens written to `edge` by firings of its producer released in `window`.
std::int64_t cumulative_produced(const CsdfEdge& edge, const PeriodicTask& producer,
                                 TimeWindow window);
/// Tokens read from `edge` by firings of its consumer released in `window`.
std::int64_t cumulative_consumed(const CsdfEdge& edge, const PeriodicTask& consumer,
                                 TimeWindow window);

enum class StartTimeMethod {
  scan,         // integer scan over t and k, as the SPS start-time equation states
  closed_form,  // per-release maximum; O(q) per edge
  automatic,    // scan for small hyper-periods, closed form otherwise
};

/// Earliest start offsets (relative to the source) so that no actor is ever
/// blocked on input. Requires acyclic data dependencies; self-loops are
/// accepted when their initial tokens suffice. Throws
/// AnalysisError("unsupported structure") otherwise.
ActorMap<Time> earliest_start_times(const CsdfInstance& g, const RepetitionVector& q,
                                    const ActorMap<Time>& periods,
                                    StartTimeMethod method = StartTimeMethod::automatic);

/// Earliest start of one consumer against one producer edge (the inner
/// minimization of the start-time equation), with `producer_start` the
/// producer's offset and `hyper` the iteration period.
Time edge_start_scan(const CsdfEdge& edge, PeriodicTask producer, Time consumer_period, Time hyper);
Time edge_start_closed_form(const CsdfEdge& edge, PeriodicTask producer, Time consumer_period,
                            Time hyper);

struct SteadyStateSchedule {
  ModeId mode;
  RepetitionVector q;
  ActorMap<Time> period;
  ActorMap<Time> start;
  ActorMap<Time> wcet;
  ActorMap<Rational> utilization;
  Time hyper_period = 0;
  Time latency = 0;
  ActorId source;
  ActorId sink;

  bool active(const ActorId& id) const { return period.count(id) != 0; }
  Time source_start() const { return start.at(source); }
  Time sink_start() const { return start.at(sink); }
  bool operator==(const SteadyStateSchedule&) const = default;
};

/// Full steady-state analysis of one mode. Throws AnalysisError for
/// inconsistent or deadlocked graphs.
SteadyStateSchedule steady_state(const CsdfInstance& g,
                                 StartTimeMethod method = StartTimeMethod::automatic);

/// Hyper-periods up to this bound use the scan in automatic mode.
inline constexpr Time kScanHyperPeriodLimit = Time{1} << 14;

}  // namespace madf
