#include "madf/transition.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <future>

namespace madf {

UtilizationBound UtilizationBound::fixed(Rational ub) {
  if (ub <= Rational(0) || ub > Rational(1))
    throw ModelError("invalid bound", "utilization bound must lie in (0, 1], got " + to_string(ub));
  return {Policy::fixed, ub};
}

bool UtilizationBound::admits(const Rational& u, std::size_t tasks) const {
  switch (policy) {
    case Policy::edf:
      return u <= Rational(1);
    case Policy::fixed:
      return u <= value;
    case Policy::rm: {
      if (tasks == 0) return u.numerator() == 0;
      // u <= n(2^{1/n} - 1)  <=>  (1 + u/n)^n <= 2
      using boost::multiprecision::cpp_rational;
      const cpp_rational base =
          1 + cpp_rational(u.numerator(), u.denominator()) / static_cast<long long>(tasks);
      cpp_rational power = 1;
      for (std::size_t i = 0; i < tasks; ++i) power *= base;
      return power <= 2;
    }
  }
  return false;
}

std::string UtilizationBound::name() const {
  switch (policy) {
    case Policy::edf:
      return "edf";
    case Policy::rm:
      return "rm";
    case Policy::fixed:
      return "fixed(" + to_string(value) + ")";
  }
  return "?";
}

const std::string* Allocation::pe_of(const ActorId& actor) const {
  for (const auto& [pe, actors] : partitions)
    if (actors.count(actor)) return &pe;
  return nullptr;
}

std::vector<Diagnostic> validate_allocation(const Allocation& alloc,
                                            const std::vector<SteadyStateSchedule>& modes) {
  std::vector<Diagnostic> out;
  std::map<ActorId, std::string> owner;
  for (const auto& [pe, actors] : alloc.partitions)
    for (const auto& a : actors)
      if (auto [it, fresh] = owner.emplace(a, pe); !fresh)
        out.push_back(
            {"duplicate allocation", a, "actor is mapped to " + it->second + " and " + pe});
  std::set<ActorId> known;
  for (const auto& s : modes)
    for (const auto& [a, T] : s.period) {
      known.insert(a);
      if (!owner.count(a))
        out.push_back(
            {"unallocated actor", a, "actor is active in mode " + s.mode + " but mapped to no PE"});
    }
  for (const auto& [a, pe] : owner)
    if (!known.count(a))
      out.push_back({"unknown actor", pe + ":" + a, "actor is not active in any analyzed mode"});
  for (const auto& s : modes)
    for (const auto& [pe, actors] : alloc.partitions) {
      Rational u = 0;
      std::size_t n = 0;
      for (const auto& a : actors)
        if (auto it = s.utilization.find(a); it != s.utilization.end()) {
          u += it->second;
          ++n;
        }
      if (!alloc.bound.admits(u, n))
        out.push_back(
            {"overloaded PE", pe + "@" + s.mode,
             "utilization " + to_string(u) + " exceeds the " + alloc.bound.name() + " bound"});
    }
  return out;
}

Time moo_offset(const ActorMap<Time>& old_start, const ActorMap<Time>& new_start) {
  Time x = 0;
  for (const auto& [a, s_old] : old_start)
    if (auto it = new_start.find(a); it != new_start.end()) x = std::max(x, s_old - it->second);
  return x;
}

Time moo_offset(const SteadyStateSchedule& old_mode, const SteadyStateSchedule& new_mode) {
  return moo_offset(old_mode.start, new_mode.start);
}

Time source_completion(Time t_start, Time t_mcr, Time old_hyper) {
  if (t_mcr < t_start)
    throw AnalysisError("invalid argument", "mode change request at " + std::to_string(t_mcr) +
                                                " precedes the mode start " +
                                                std::to_string(t_start));
  return t_start + ceil_div(t_mcr - t_start, old_hyper) * old_hyper;
}

namespace {

void require_sink_last(const SteadyStateSchedule& s) {
  for (const auto& [a, start] : s.start)
    if (start > s.sink_start())
      throw AnalysisError("unsupported structure",
                          "in mode " + s.mode + " actor " + a + " starts after the sink (" +
                              std::to_string(start) + " > " + std::to_string(s.sink_start()) + ")");
}

}  // namespace

ActorMap<Time> start_upper_bound(const SteadyStateSchedule& old_mode,
                                 const SteadyStateSchedule& new_mode, Time f_src) {
  require_sink_last(old_mode);
  ActorMap<Time> out;
  for (const auto& [a, s] : new_mode.start) out[a] = f_src + old_mode.sink_start() + s;
  return out;
}

ActorMap<Time> start_lower_bound(const SteadyStateSchedule&, const SteadyStateSchedule& new_mode,
                                 Time f_src, Time x) {
  ActorMap<Time> out;
  for (const auto& [a, s] : new_mode.start) out[a] = f_src + x + s;
  return out;
}

PeLoad load_at(Time k, Time t, const Allocation& alloc, const SteadyStateSchedule& old_mode,
               const SteadyStateSchedule& new_mode, const std::string& pe, UtilizationPart part) {
  PeLoad load;
  auto it = alloc.partitions.find(pe);
  if (it == alloc.partitions.end()) return load;
  for (const auto& a : it->second) {
    if (part != UtilizationPart::new_mode)
      if (auto u = old_mode.utilization.find(a);
          u != old_mode.utilization.end() && k < old_mode.start.at(a)) {
        load.utilization += u->second;
        ++load.tasks;
      }
    if (part != UtilizationPart::old_mode)
      if (auto u = new_mode.utilization.find(a);
          u != new_mode.utilization.end() && k >= new_mode.start.at(a) + t) {
        load.utilization += u->second;
        ++load.tasks;
      }
  }
  return load;
}

Rational utilization_at(Time k, Time t, const Allocation& alloc,
                        const SteadyStateSchedule& old_mode, const SteadyStateSchedule& new_mode,
                        const std::string& pe, UtilizationPart part) {
  return load_at(k, t, alloc, old_mode, new_mode, pe, part).utilization;
}

namespace {

bool fits_at(Time k, Time t, const Allocation& alloc, const SteadyStateSchedule& old_mode,
             const SteadyStateSchedule& new_mode) {
  for (const auto& [pe, actors] : alloc.partitions) {
    const auto load = load_at(k, t, alloc, old_mode, new_mode, pe);
    if (!alloc.bound.admits(load.utilization, load.tasks)) return false;
  }
  return true;
}

[[noreturn]] void no_feasible_offset(const Allocation& alloc, const SteadyStateSchedule& old_mode,
                                     const SteadyStateSchedule& new_mode) {
  const Time end = old_mode.sink_start();
  for (const auto& [pe, actors] : alloc.partitions) {
    const auto load = load_at(end, end, alloc, old_mode, new_mode, pe);
    if (!alloc.bound.admits(load.utilization, load.tasks))
      throw AnalysisError("overload", "PE " + pe + " cannot host mode " + new_mode.mode +
                                          " (utilization " + to_string(load.utilization) + ")");
  }
  throw AnalysisError("overload", "no offset keeps every PE schedulable during " + old_mode.mode +
                                      " -> " + new_mode.mode);
}

}  // namespace

Time allocation_delta(const Allocation& alloc, const SteadyStateSchedule& old_mode,
                      const SteadyStateSchedule& new_mode, Time x) {
  require_sink_last(old_mode);
  const Time end = old_mode.sink_start();
  for (Time t = x; t <= end; ++t) {
    bool ok = true;
    for (Time k = t; ok && k <= end; ++k) ok = fits_at(k, t, alloc, old_mode, new_mode);
    if (ok) return t;
  }
  no_feasible_offset(alloc, old_mode, new_mode);
}

Time allocation_delta_event_points(const Allocation& alloc, const SteadyStateSchedule& old_mode,
                                   const SteadyStateSchedule& new_mode, Time x) {
  require_sink_last(old_mode);
  const Time end = old_mode.sink_start();
  for (Time t = x; t <= end; ++t) {
    std::set<Time> points{t};
    for (const auto& [a, s] : old_mode.start)
      if (s >= t && s <= end) points.insert(s);
    for (const auto& [a, s] : new_mode.start)
      if (t + s <= end) points.insert(t + s);
    const bool ok = std::all_of(points.begin(), points.end(),
                                [&](Time k) { return fits_at(k, t, alloc, old_mode, new_mode); });
    if (ok) return t;
  }
  no_feasible_offset(alloc, old_mode, new_mode);
}

std::pair<Time, Time> delay_bounds(const SteadyStateSchedule& old_mode,
                                   const SteadyStateSchedule& new_mode, Time delta) {
  const Time lo = delta + new_mode.sink_start();
  return {lo, lo + old_mode.hyper_period};
}

TransitionAnalysis analyze_transition(const SteadyStateSchedule& old_mode,
                                      const SteadyStateSchedule& new_mode,
                                      const Allocation* alloc) {
  require_sink_last(old_mode);
  TransitionAnalysis t;
  t.from = old_mode.mode;
  t.to = new_mode.mode;
  t.x = moo_offset(old_mode, new_mode);
  t.allocation_aware = alloc != nullptr;
  t.delta = alloc ? allocation_delta_event_points(*alloc, old_mode, new_mode, t.x) : t.x;
  t.sigma_lower = start_lower_bound(old_mode, new_mode, 0, t.x);
  t.sigma_upper = start_upper_bound(old_mode, new_mode, 0);
  std::tie(t.delta_min, t.delta_max) = delay_bounds(old_mode, new_mode, t.delta);
  return t;
}

std::vector<TransitionAnalysis> analyze_all_transitions(
    const std::vector<SteadyStateSchedule>& modes, const Allocation* alloc) {
  std::vector<std::future<TransitionAnalysis>> jobs;
  for (const auto& o : modes)
    for (const auto& l : modes)
      if (&o != &l)
        jobs.push_back(std::async(std::launch::async,
                                  [&o, &l, alloc] { return analyze_transition(o, l, alloc); }));
  std::vector<TransitionAnalysis> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace madf
