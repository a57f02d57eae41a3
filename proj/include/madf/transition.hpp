#pragma once

// Mode-transition analysis under the Maximum-Overlap Offset (MOO) protocol.
//
// Times in a TransitionAnalysis are relative to F, the completion time of
// the old mode's last source iteration. Absolute values follow by adding F
// (see source_completion).

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "madf/csdf.hpp"

namespace madf {

/// Per-PE schedulability test on total utilization.
struct UtilizationBound {
  enum class Policy { edf, rm, fixed };
  Policy policy = Policy::edf;
  Rational value = 1;  // used by Policy::fixed

  static UtilizationBound edf() { return {Policy::edf, 1}; }
  /// Liu-Layland n(2^{1/n} - 1), with n the number of tasks on the PE.
  static UtilizationBound rm() { return {Policy::rm, 1}; }
  static UtilizationBound fixed(Rational ub);

  /// Whether `tasks` tasks of total utilization `u` fit. Exact for every policy.
  bool admits(const Rational& u, std::size_t tasks) const;
  std::string name() const;
  bool operator==(const UtilizationBound&) const = default;
};

/// Partition of the actors over processing elements.
struct Allocation {
  std::map<std::string, std::set<ActorId>> partitions;  // PE id -> actors
  UtilizationBound bound;

  /// PE hosting `actor`, or nullptr.
  const std::string* pe_of(const ActorId& actor) const;
  bool operator==(const Allocation&) const = default;
};

/// Disjointness, coverage of every actor active in some schedule, and
/// per-mode steady-state schedulability on every PE.
std::vector<Diagnostic> validate_allocation(const Allocation& alloc,
                                            const std::vector<SteadyStateSchedule>& modes);

struct TransitionAnalysis {
  ModeId from;
  ModeId to;
  Time x = 0;
  Time delta = 0;
  bool allocation_aware = false;  // delta == x when false
  ActorMap<Time> sigma_lower;     // earliest new-mode starts, relative to F
  ActorMap<Time> sigma_upper;     // synchronous-protocol starts, relative to F
  Time delta_min = 0;
  Time delta_max = 0;
  bool operator==(const TransitionAnalysis&) const = default;
};

/// max(0, max over actors active in both modes of S^old - S^new).
Time moo_offset(const SteadyStateSchedule& old_mode, const SteadyStateSchedule& new_mode);
Time moo_offset(const ActorMap<Time>& old_start, const ActorMap<Time>& new_start);

/// Completion of the last old-mode source iteration started before t_mcr,
/// for an old mode whose source started at t_start.
Time source_completion(Time t_start, Time t_mcr, Time old_hyper);

/// F + S_snk^old + S_i^new for every new-mode actor. Rejects old modes where
/// some actor starts after the sink.
ActorMap<Time> start_upper_bound(const SteadyStateSchedule& old_mode,
                                 const SteadyStateSchedule& new_mode, Time f_src);
/// F + x + S_i^new for every new-mode actor.
ActorMap<Time> start_lower_bound(const SteadyStateSchedule& old_mode,
                                 const SteadyStateSchedule& new_mode, Time f_src, Time x);

enum class UtilizationPart { old_mode, new_mode, both };

struct PeLoad {
  Rational utilization = 0;
  std::size_t tasks = 0;  // tasks contributing at that instant
};

/// Demand on `pe` at relative time k when the new mode is offset by t:
/// old actors release their share at S^old, new actors claim it at t + S^new.
PeLoad load_at(Time k, Time t, const Allocation& alloc, const SteadyStateSchedule& old_mode,
               const SteadyStateSchedule& new_mode, const std::string& pe,
               UtilizationPart part = UtilizationPart::both);
Rational utilization_at(Time k, Time t, const Allocation& alloc,
                        const SteadyStateSchedule& old_mode, const SteadyStateSchedule& new_mode,
                        const std::string& pe, UtilizationPart part = UtilizationPart::both);

/// Smallest t in [x, S_snk^old] keeping every PE within its bound for all
/// integer k in [t, S_snk^old]. Throws AnalysisError("overload") if none.
Time allocation_delta(const Allocation& alloc, const SteadyStateSchedule& old_mode,
                      const SteadyStateSchedule& new_mode, Time x);
/// Same result, evaluating each candidate only where the load can change.
Time allocation_delta_event_points(const Allocation& alloc, const SteadyStateSchedule& old_mode,
                                   const SteadyStateSchedule& new_mode, Time x);

/// (delta + S_snk^new, delta + S_snk^new + H^old).
std::pair<Time, Time> delay_bounds(const SteadyStateSchedule& old_mode,
                                   const SteadyStateSchedule& new_mode, Time delta);

/// Full analysis of one ordered mode pair; `alloc` may be null.
TransitionAnalysis analyze_transition(const SteadyStateSchedule& old_mode,
                                      const SteadyStateSchedule& new_mode,
                                      const Allocation* alloc = nullptr);

/// Every ordered pair of distinct modes, in declaration order, analyzed
/// concurrently.
std::vector<TransitionAnalysis> analyze_all_transitions(
    const std::vector<SteadyStateSchedule>& modes, const Allocation* alloc = nullptr);

}  // namespace madf
