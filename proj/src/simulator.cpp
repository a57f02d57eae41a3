#include "madf/simulator.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

namespace madf {

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::moo:
      return "moo";
    case Protocol::st:
      return "st";
    case Protocol::sync:
      return "sync";
  }
  return "?";
}

std::string to_string(Timing t) { return t == Timing::sps ? "sps" : "self-timed"; }

Protocol parse_protocol(const std::string& text) {
  if (text == "moo") return Protocol::moo;
  if (text == "st") return Protocol::st;
  if (text == "sync") return Protocol::sync;
  throw ParseError("unknown protocol '" + text + "' (expected moo, st or sync)");
}

Timing parse_timing(const std::string& text) {
  if (text == "sps") return Timing::sps;
  if (text == "self-timed" || text == "self_timed") return Timing::self_timed;
  throw ParseError("unknown timing '" + text + "' (expected sps or self-timed)");
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::release:
      return "release";
    case EventKind::complete:
      return "complete";
    case EventKind::mode_switch:
      return "mode-switch";
    case EventKind::mcr_accepted:
      return "mcr-accepted";
    case EventKind::mcr_ignored:
      return "mcr-ignored";
  }
  return "?";
}

std::optional<Time> ModeSegment::delay() const {
  if (!request || !sink_start) return std::nullopt;
  return *sink_start - *request;
}

std::optional<Time> ModeSegment::latency() const {
  if (!source_start || !sink_start) return std::nullopt;
  return *sink_start - *source_start;
}

void validate_scenario(const Scenario& sc, const std::map<ModeId, SteadyStateSchedule>& modes) {
  auto fail = [](const std::string& what) { throw ModelError("invalid scenario", what); };
  if (!modes.count(sc.initial_mode)) fail("initial mode '" + sc.initial_mode + "' is not analysed");
  Time last = -1;
  for (const auto& r : sc.requests) {
    if (!modes.count(r.target)) fail("request targets unknown mode '" + r.target + "'");
    if (r.time < 0) fail("request time is negative");
    if (r.time <= last) fail("request times must be strictly increasing");
    last = r.time;
  }
  const auto& final_mode = sc.requests.empty() ? sc.initial_mode : sc.requests.back().target;
  const Time need = std::max<Time>(last, 0) + modes.at(final_mode).hyper_period;
  if (sc.horizon < need)
    fail("horizon " + std::to_string(sc.horizon) + " ends before " + std::to_string(need) +
         " (last request plus one hyper-period of its target)");
  if (sc.protocol == Protocol::st && sc.timing == Timing::sps)
    fail("the self-timed transition protocol needs self-timed timing");
}

namespace {

constexpr Time kNoConstraint = std::numeric_limits<Time>::min();

enum class Ev { request, complete, produce, release, wake };

struct Event {
  Time time;
  int cls;
  std::size_t rank;  // actor order by id
  std::uint64_t seq;
  Ev type;
  std::size_t actor = 0;
  std::uint64_t generation = 0;
  std::size_t segment = 0;
  std::int64_t index = 0;  // firing within the segment, or request index

  bool operator>(const Event& o) const {
    return std::tie(time, cls, rank, seq) > std::tie(o.time, o.cls, o.rank, o.seq);
  }
};

struct ActorState {
  std::size_t segment = 0;
  std::int64_t fired = 0;  // within the segment
  std::int64_t total = 0;
  Time busy_until = kNoConstraint;
  std::uint64_t generation = 0;
};

class Engine {
 public:
  Engine(const std::map<ModeId, CsdfInstance>& inst,
         const std::map<ModeId, SteadyStateSchedule>& sps,
         const std::map<ModeId, SteadyStateSchedule>& regime, const Allocation* alloc,
         const Scenario& sc)
      : inst_(inst), sps_(sps), regime_(regime), alloc_(alloc), sc_(sc) {
    const auto& g = inst_.at(sc.initial_mode);
    n_ = g.actors.size();
    source_ = g.source;
    sink_ = g.sink;
    std::vector<std::size_t> order(n_);
    for (std::size_t i = 0; i < n_; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return g.actors[a].id < g.actors[b].id; });
    rank_.resize(n_);
    for (std::size_t r = 0; r < n_; ++r) rank_[order[r]] = r;
    ins_.resize(n_);
    outs_.resize(n_);
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      ins_[g.edges[k].consumer].push_back(k);
      outs_[g.edges[k].producer].push_back(k);
      tokens_.push_back(g.edges[k].initial_tokens);
      trace_.fifo_min[g.edges[k].id] = g.edges[k].initial_tokens;
    }
    for (const auto& [mode, m] : inst_) {
      auto& p = periodic_[mode];
      p.assign(n_, true);
      for (const auto& e : m.edges)
        if (e.consumption_sum() > 0) p[e.consumer] = false;
    }
    actors_.resize(n_);
    trace_.timing = sc.timing;
    trace_.protocol = sc.protocol;
  }

  SimTrace run() {
    open_segment(sc_.initial_mode, std::nullopt, 0, 0);
    for (std::size_t i = 0; i < sc_.requests.size(); ++i)
      push({sc_.requests[i].time, 0, 0, 0, Ev::request, 0, 0, 0, static_cast<std::int64_t>(i)});
    if (sc_.timing == Timing::sps) {
      for (std::size_t a = 0; a < n_; ++a) schedule_release(a, 0);
    } else {
      push({0, 2, 0, 0, Ev::wake});
    }

    while (!queue_.empty() && queue_.top().time <= sc_.horizon) {
      const Time now = queue_.top().time;
      while (!queue_.empty() && queue_.top().time == now) {
        const Event ev = queue_.top();
        queue_.pop();
        handle(ev, now);
      }
      if (sc_.timing == Timing::self_timed) start_ready(now);
      for (auto& e : switches_) trace_.events.push_back(std::move(e));
      switches_.clear();
    }
    if (sc_.timing == Timing::sps && alloc_) check_processors();
    return std::move(trace_);
  }

 private:
  const CsdfInstance& mode_graph(std::size_t s) const { return inst_.at(trace_.segments[s].mode); }
  const SteadyStateSchedule& mode_sps(std::size_t s) const {
    return sps_.at(trace_.segments[s].mode);
  }
  const SteadyStateSchedule& mode_regime(std::size_t s) const {
    return regime_.at(trace_.segments[s].mode);
  }
  const ActorId& id(std::size_t a) const { return inst_.at(sc_.initial_mode).actors[a].id; }

  void push(Event e) {
    e.seq = seq_++;
    queue_.push(e);
  }

  void open_segment(const ModeId& mode, std::optional<Time> request, Time completion, Time origin) {
    ModeSegment seg;
    seg.mode = mode;
    seg.request = request;
    seg.old_completion = completion;
    seg.origin = origin;
    trace_.segments.push_back(seg);
    origin_known_.push_back(true);
    last_start_.emplace_back();
  }

  /// Firings of actor a in segment s; -1 when unbounded.
  std::int64_t firings(std::size_t a, std::size_t s) const {
    const auto q = mode_sps(s).q[id(a)];
    if (q == 0) return 0;
    const auto it = trace_.segments[s].iterations;
    return it < 0 ? -1 : it * q;
  }

  /// Moves the actor to the segment of its next firing; false if none.
  bool advance(std::size_t a) {
    auto& st = actors_[a];
    for (;;) {
      const auto count = firings(a, st.segment);
      if (count < 0 || st.fired < count) return true;
      if (st.segment + 1 >= trace_.segments.size()) return false;
      ++st.segment;
      st.fired = 0;
    }
  }

  void schedule_release(std::size_t a, Time now) {
    if (!advance(a)) return;
    const auto& st = actors_[a];
    const auto& seg = trace_.segments[st.segment];
    const auto& reg = mode_regime(st.segment);
    Time at = seg.origin + reg.start.at(id(a)) + st.fired * reg.period.at(id(a));
    if (at < now) {
      trace_.violations.push_back({"late release", now, id(a),
                                   "release planned at " + std::to_string(at) +
                                       " could only happen at " + std::to_string(now)});
      at = now;
    }
    push({at, 2, rank_[a], 0, Ev::release, a, st.generation, st.segment, st.fired});
  }

  void handle(const Event& ev, Time now) {
    switch (ev.type) {
      case Ev::request:
        on_request(static_cast<std::size_t>(ev.index), now);
        break;
      case Ev::complete:
        trace_.events.push_back({now, id(ev.actor), trace_.segments[ev.segment].mode, ev.index,
                                 EventKind::complete, ev.segment});
        if (sc_.timing == Timing::self_timed) produce(ev);
        break;
      case Ev::produce:
        produce(ev);
        break;
      case Ev::release:
        if (ev.generation != actors_[ev.actor].generation) break;
        fire(ev.actor, now);
        schedule_release(ev.actor, now);
        break;
      case Ev::wake:
        break;
    }
  }

  void produce(const Event& ev) {
    const auto& g = mode_graph(ev.segment);
    const auto phase = static_cast<std::size_t>(ev.index) % g.actors[ev.actor].phases;
    for (auto k : outs_[ev.actor]) {
      const auto& prd = g.edges[k].production;
      if (!prd.empty()) tokens_[k] += prd[phase];
    }
  }

  bool tokens_ready(std::size_t a, std::size_t s, std::int64_t j) const {
    const auto& g = mode_graph(s);
    const auto phase = static_cast<std::size_t>(j) % g.actors[a].phases;
    for (auto k : ins_[a]) {
      const auto& cns = g.edges[k].consumption;
      if (!cns.empty() && cns[phase] > tokens_[k]) return false;
    }
    return true;
  }

  /// Starts (self-timed) or releases (sps) the actor's next firing now.
  void fire(std::size_t a, Time now) {
    auto& st = actors_[a];
    const std::size_t s = st.segment;
    const std::int64_t j = st.fired;
    auto& seg = trace_.segments[s];
    const auto& g = mode_graph(s);
    const auto& actor = g.actors[a];
    const auto phase = static_cast<std::size_t>(j) % actor.phases;
    for (auto k : ins_[a]) {
      const auto& cns = g.edges[k].consumption;
      if (cns.empty()) continue;
      tokens_[k] -= cns[phase];
      const auto& eid = g.edges[k].id;
      if (tokens_[k] < trace_.fifo_min[eid]) {
        if (tokens_[k] < 0 && trace_.fifo_min[eid] >= 0)
          trace_.violations.push_back({"fifo underflow", now, eid,
                                       id(a) + " read " + std::to_string(cns[phase]) +
                                           " tokens with " +
                                           std::to_string(tokens_[k] + cns[phase]) + " available"});
        trace_.fifo_min[eid] = tokens_[k];
      }
    }
    trace_.events.push_back({now, id(a), seg.mode, st.total, EventKind::release, s});
    if (j == 0) {
      seg.first_start[id(a)] = now;
      if (s > 0) switches_.push_back({now, id(a), seg.mode, st.total, EventKind::mode_switch, s});
      if (a == source_) {
        seg.source_start = now;
        if (!origin_known_[s]) {
          seg.origin = now;
          origin_known_[s] = true;
        }
      }
      if (a == sink_) {
        seg.sink_start = now;
        if (pending_ && *pending_ == s) pending_.reset();
      }
    }
    last_start_[s][id(a)] = now;

    const Time done = now + actor.wcet;
    push({done, 1, rank_[a], 0, Ev::complete, a, 0, s, j});
    if (sc_.timing == Timing::sps) {
      const Time period = mode_sps(s).period.at(id(a));
      if (actor.wcet > period)
        trace_.violations.push_back(
            {"deadline miss", done, id(a), "completes after release + period"});
      push({now + period, 1, rank_[a], 0, Ev::produce, a, 0, s, j});
    }
    st.busy_until = done;
    ++st.fired;
    ++st.total;
  }

  /// Earliest start of firing j of actor a in segment s (self-timed);
  /// nullopt while it depends on a source start that has not happened.
  std::optional<Time> not_before(std::size_t a, std::size_t s, std::int64_t j) const {
    const auto& seg = trace_.segments[s];
    const auto& mode = seg.mode;
    const bool st_segment = s > 0 && sc_.protocol == Protocol::st;
    if (periodic_.at(mode)[a]) {
      const auto q = mode_sps(s).q[id(a)];
      if (j % q != 0) return kNoConstraint;
      if (st_segment && a == source_ && j == 0) return *seg.request;
      if (!origin_known_[s]) return std::nullopt;
      return seg.origin + (j / q) * mode_sps(s).hyper_period;
    }
    if (s > 0 && !st_segment && j == 0) return seg.origin + mode_regime(s).start.at(id(a));
    return kNoConstraint;
  }

  void start_ready(Time now) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t r = 0; r < n_; ++r) {
        const std::size_t a = by_rank(r);
        if (!advance(a)) continue;
        auto& st = actors_[a];
        if (st.busy_until > now) continue;
        const auto earliest = not_before(a, st.segment, st.fired);
        if (!earliest) continue;
        if (*earliest > now) {
          if (wake_at_[a] != *earliest) {
            wake_at_[a] = *earliest;
            push({*earliest, 2, rank_[a], 0, Ev::wake, a});
          }
          continue;
        }
        if (!tokens_ready(a, st.segment, st.fired)) continue;
        fire(a, now);
        progress = true;
      }
    }
  }

  std::size_t by_rank(std::size_t r) const {
    return static_cast<std::size_t>(std::find(rank_.begin(), rank_.end(), r) - rank_.begin());
  }

  void on_request(std::size_t i, Time now) {
    const auto& req = sc_.requests[i];
    if (pending_) {
      trace_.events.push_back(
          {now, "", req.target, static_cast<std::int64_t>(i), EventKind::mcr_ignored, *pending_});
      return;
    }
    const std::size_t cur = trace_.segments.size() - 1;
    auto& seg = trace_.segments[cur];
    const auto& old_sps = mode_sps(cur);
    const Time hyper = old_sps.hyper_period;
    const std::int64_t n = ceil_div(now - seg.origin, hyper);
    seg.iterations = n;
    const Time completion = seg.origin + n * hyper;
    for (std::size_t a = 0; a < n_; ++a) {
      const auto& st = actors_[a];
      if (st.segment == cur && st.fired > firings(a, cur))
        trace_.violations.push_back(
            {"quiescence", now, id(a), "already past the last iteration of the old mode"});
    }

    const auto& old_reg = regime_.at(seg.mode);
    const auto& new_reg = regime_.at(req.target);
    Time origin = 0;
    bool known = true;
    switch (sc_.protocol) {
      case Protocol::moo: {
        const Time x = moo_offset(old_reg, new_reg);
        origin =
            completion + (alloc_ ? allocation_delta_event_points(*alloc_, old_reg, new_reg, x) : x);
        break;
      }
      case Protocol::sync:
        origin = completion + old_reg.sink_start();
        break;
      case Protocol::st:
        known = false;
        break;
    }
    trace_.events.push_back(
        {now, "", req.target, static_cast<std::int64_t>(i), EventKind::mcr_accepted, cur + 1});
    open_segment(req.target, now, completion, origin);
    origin_known_.back() = known;
    pending_ = cur + 1;

    for (std::size_t a = 0; a < n_; ++a) {
      ++actors_[a].generation;
      if (sc_.timing == Timing::sps) schedule_release(a, now);
    }
  }

  void check_processors() {
    struct Span {
      Time begin, end;
      Rational u;
    };
    std::map<std::string, std::vector<Span>> spans;
    for (std::size_t s = 0; s < trace_.segments.size(); ++s) {
      const auto& seg = trace_.segments[s];
      const auto& sched = mode_sps(s);
      for (const auto& [actor, first] : seg.first_start) {
        const auto* pe = alloc_->pe_of(actor);
        if (!pe) continue;
        const bool closed = seg.iterations >= 0;
        const Time end =
            closed ? last_start_[s].at(actor) + sched.period.at(actor) : sc_.horizon + 1;
        spans[*pe].push_back({first, end, sched.utilization.at(actor)});
      }
    }
    for (const auto& [pe, list] : spans) {
      std::set<Time> points;
      for (const auto& sp : list) points.insert(sp.begin);
      for (Time k : points) {
        Rational u = 0;
        std::size_t tasks = 0;
        for (const auto& sp : list)
          if (sp.begin <= k && k < sp.end) {
            u += sp.u;
            ++tasks;
          }
        if (!alloc_->bound.admits(u, tasks))
          trace_.violations.push_back({"overload", k, pe,
                                       "demanded utilization " + to_string(u) + " exceeds the " +
                                           alloc_->bound.name() + " bound"});
      }
    }
  }

  const std::map<ModeId, CsdfInstance>& inst_;
  const std::map<ModeId, SteadyStateSchedule>& sps_;
  const std::map<ModeId, SteadyStateSchedule>& regime_;
  const Allocation* alloc_;
  const Scenario& sc_;

  std::size_t n_ = 0;
  std::size_t source_ = 0;
  std::size_t sink_ = 0;
  std::vector<std::size_t> rank_;
  std::vector<std::vector<std::size_t>> ins_, outs_;
  std::map<ModeId, std::vector<bool>> periodic_;
  std::vector<std::int64_t> tokens_;
  std::vector<ActorState> actors_;
  std::map<std::size_t, Time> wake_at_;
  std::vector<bool> origin_known_;
  std::vector<ActorMap<Time>> last_start_;
  std::optional<std::size_t> pending_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  std::vector<TraceEvent> switches_;
  SimTrace trace_;
};

}  // namespace

ActorMap<Time> self_timed_offsets(const CsdfInstance& g, const SteadyStateSchedule& sps) {
  const std::map<ModeId, CsdfInstance> inst{{g.mode, g}};
  const std::map<ModeId, SteadyStateSchedule> sched{{g.mode, sps}};
  Scenario sc;
  sc.initial_mode = g.mode;
  sc.timing = Timing::self_timed;
  sc.horizon = sps.hyper_period * static_cast<Time>(g.active_count() + 2);
  const auto trace = Engine(inst, sched, sched, nullptr, sc).run();
  const auto& first = trace.segments.front().first_start;
  ActorMap<Time> out;
  for (const auto& a : g.actors) {
    if (!a.active) continue;
    auto it = first.find(a.id);
    if (it == first.end())
      throw AnalysisError("deadlock",
                          "actor " + a.id + " never fires in self-timed execution of " + g.mode);
    out[a.id] = it->second;
  }
  return out;
}

SteadyStateSchedule self_timed_schedule(const CsdfInstance& g, const SteadyStateSchedule& sps) {
  SteadyStateSchedule s = sps;
  s.start = self_timed_offsets(g, sps);
  s.latency = s.sink_start() - s.source_start();
  return s;
}

SimTrace simulate(const MadfGraph& graph, const std::map<ModeId, SteadyStateSchedule>& schedules,
                  const Allocation* alloc, const Scenario& sc) {
  validate_scenario(sc, schedules);
  std::map<ModeId, CsdfInstance> inst;
  for (const auto& [mode, s] : schedules) inst.emplace(mode, instantiate_mode(graph, mode));
  if (sc.timing == Timing::sps) return Engine(inst, schedules, schedules, alloc, sc).run();
  std::map<ModeId, SteadyStateSchedule> regime;
  for (const auto& [mode, s] : schedules)
    regime.emplace(mode, self_timed_schedule(inst.at(mode), s));
  return Engine(inst, schedules, regime, alloc, sc).run();
}

std::vector<Violation> verify_trace(const SimTrace& trace,
                                    const std::map<ModeId, SteadyStateSchedule>& schedules,
                                    const std::vector<TransitionAnalysis>& analyses) {
  std::vector<Violation> out = trace.violations;

  // Releases per (actor, segment).
  std::map<std::pair<ActorId, std::size_t>, std::vector<Time>> releases;
  for (const auto& e : trace.events)
    if (e.kind == EventKind::release) releases[{e.actor, e.segment}].push_back(e.time);

  for (const auto& [key, times] : releases) {
    const auto& [actor, s] = key;
    const auto& mode = trace.segments[s].mode;
    const auto& sched = schedules.at(mode);
    if (trace.timing == Timing::sps) {
      const Time period = sched.period.at(actor);
      for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] - times[i - 1] != period) {
          out.push_back({"periodicity", times[i], actor,
                         "release gap " + std::to_string(times[i] - times[i - 1]) +
                             " differs from period " + std::to_string(period) + " in " + mode});
          break;
        }
    }
    const auto q = sched.q[actor];
    if (s + 1 < trace.segments.size() && q > 0 && static_cast<std::int64_t>(times.size()) % q != 0)
      out.push_back({"quiescence", times.back(), actor,
                     "left mode " + mode + " after " + std::to_string(times.size()) +
                         " firings, not a multiple of " + std::to_string(q)});
  }

  for (std::size_t s = 0; s < trace.segments.size(); ++s) {
    const auto& seg = trace.segments[s];
    if (auto l = seg.latency(); l && *l != schedules.at(seg.mode).latency)
      out.push_back({"latency", *seg.sink_start, seg.mode,
                     "first iteration latency " + std::to_string(*l) + " differs from " +
                         std::to_string(schedules.at(seg.mode).latency)});
    if (s == 0) continue;
    const auto d = seg.delay();
    if (!d) continue;
    const auto& from = trace.segments[s - 1].mode;
    auto it = std::find_if(analyses.begin(), analyses.end(), [&](const TransitionAnalysis& t) {
      return t.from == from && t.to == seg.mode;
    });
    if (it == analyses.end()) continue;
    if (*d < it->delta_min || *d > it->delta_max)
      out.push_back({"delay bound", *seg.sink_start, from + "->" + seg.mode,
                     "observed delay " + std::to_string(*d) + " outside [" +
                         std::to_string(it->delta_min) + ", " + std::to_string(it->delta_max) +
                         "]"});
  }
  return out;
}

}  // namespace madf
