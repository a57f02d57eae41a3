#include <doctest.h>

#include "fixtures.hpp"
#include "madf/generator.hpp"

using namespace madf;

namespace {

Scenario scenario(const ModeId& initial, std::vector<ModeChangeRequest> reqs, Time horizon,
                  Protocol p = Protocol::moo, Timing t = Timing::sps) {
  return {initial, std::move(reqs), horizon, p, t};
}

std::size_t count_kind(const std::vector<Violation>& vs, const std::string& kind) {
  return static_cast<std::size_t>(
      std::count_if(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == kind; }));
}

std::map<ModeId, SteadyStateSchedule> self_timed_modes() {
  std::map<ModeId, SteadyStateSchedule> out;
  for (const auto& [m, s] : fixtures::g1_modes())
    out.emplace(m, self_timed_schedule(instantiate_mode(fixtures::g1(), m), s));
  return out;
}

}  // namespace

TEST_CASE("parse and print protocol and timing") {
  for (auto p : {Protocol::moo, Protocol::st, Protocol::sync})
    CHECK(parse_protocol(to_string(p)) == p);
  for (auto t : {Timing::sps, Timing::self_timed}) CHECK(parse_timing(to_string(t)) == t);
  CHECK_THROWS(parse_protocol("fast"));
}

TEST_CASE("scenario validation") {
  const auto modes = fixtures::g1_modes();
  CHECK_NOTHROW(validate_scenario(scenario("SI2", {{13, "SI1"}}, 60), modes));
  CHECK_THROWS_AS(validate_scenario(scenario("SI9", {}, 60), modes), ModelError);
  CHECK_THROWS_AS(validate_scenario(scenario("SI2", {{13, "SI1"}, {13, "SI2"}}, 60), modes),
                  ModelError);
  CHECK_THROWS_AS(validate_scenario(scenario("SI2", {{13, "SI1"}}, 15), modes), ModelError);
  CHECK_THROWS_AS(validate_scenario(scenario("SI2", {}, 60, Protocol::st, Timing::sps), modes),
                  ModelError);
}

TEST_CASE("self-timed offsets of G1") {
  const auto st = self_timed_modes();
  CHECK(st.at("SI1").start == ActorMap<Time>{{"A1", 0}, {"A2", 1}, {"A3", 5}, {"A5", 10}});
  CHECK(st.at("SI2").start ==
        ActorMap<Time>{{"A1", 0}, {"A2", 1}, {"A3", 9}, {"A4", 2}, {"A5", 10}});
  CHECK(st.at("SI1").latency == 10);
  CHECK(st.at("SI2").latency == 10);
}

TEST_CASE("steady-state SPS runs are periodic and never underflow") {
  const auto modes = fixtures::g1_modes();
  for (const auto& m : {"SI1", "SI2"}) {
    const auto trace = simulate(fixtures::g1(), modes, &fixtures::alloc3pe(), scenario(m, {}, 24));
    CHECK(trace.violations.empty());
    CHECK(verify_trace(trace, modes, {}).empty());
    for (const auto& [edge, low] : trace.fifo_min) CHECK(low >= 0);
    CHECK(trace.segments.at(0).latency() == modes.at(m).latency);
  }
}

TEST_CASE("starting one actor too early underflows exactly one FIFO") {
  auto modes = fixtures::g1_modes();
  modes.at("SI1").start.at("A2") -= 1;
  const auto trace = simulate(fixtures::g1(), modes, nullptr, scenario("SI1", {}, 24));
  CHECK(count_kind(trace.violations, "fifo underflow") == 1);
  CHECK(trace.violations.at(0).subject == "E1");
}

TEST_CASE("SPS MOO transition on the worked example") {
  const auto modes = fixtures::g1_modes();
  const auto sc = scenario("SI2", {{13, "SI1"}}, 80);
  const auto with3 = simulate(fixtures::g1(), modes, &fixtures::alloc3pe(), sc);
  REQUIRE(with3.segments.size() == 2);
  CHECK(with3.segments[1].old_completion == 16);
  CHECK(with3.segments[1].origin == 24);
  CHECK(with3.segments[1].delay() == 25);
  CHECK(with3.segments[1].latency() == 14);
  CHECK(count_kind(with3.violations, "overload") == 0);

  const auto per_actor = simulate(fixtures::g1(), modes, &fixtures::alloc_per_actor(), sc);
  CHECK(per_actor.segments[1].origin == 22);
  CHECK(per_actor.segments[1].delay() == 23);

  const auto analyses =
      analyze_all_transitions({modes.at("SI1"), modes.at("SI2")}, &fixtures::alloc3pe());
  CHECK(verify_trace(with3, modes, analyses).empty());
}

TEST_CASE("SYNC starts the new mode after the old sink") {
  const auto modes = fixtures::g1_modes();
  const auto trace = simulate(fixtures::g1(), modes, &fixtures::alloc3pe(),
                              scenario("SI2", {{13, "SI1"}}, 80, Protocol::sync));
  CHECK(trace.segments[1].origin == 36);
  CHECK(trace.segments[1].delay() == 37);
  CHECK(trace.violations.empty());
}

TEST_CASE("MCR phase sweep stays within the analysed bounds") {
  const auto modes = fixtures::g1_modes();
  const auto t = analyze_transition(modes.at("SI2"), modes.at("SI1"), &fixtures::alloc3pe());
  for (Time mcr = 8; mcr < 16; ++mcr) {
    const auto trace =
        simulate(fixtures::g1(), modes, &fixtures::alloc3pe(), scenario("SI2", {{mcr, "SI1"}}, 80));
    const auto d = trace.segments.at(1).delay();
    REQUIRE(d);
    CHECK(*d >= t.delta_min);
    CHECK(*d <= t.delta_max);
    CHECK(verify_trace(trace, modes, {t}).empty());
  }
}

TEST_CASE("requests during a pending transition are ignored") {
  const auto modes = fixtures::g1_modes();
  const auto trace =
      simulate(fixtures::g1(), modes, nullptr, scenario("SI2", {{13, "SI1"}, {20, "SI2"}}, 80));
  CHECK(trace.segments.size() == 2);
  const auto ignored =
      std::count_if(trace.events.begin(), trace.events.end(),
                    [](const TraceEvent& e) { return e.kind == EventKind::mcr_ignored; });
  CHECK(ignored == 1);
}

TEST_CASE("self-timed protocol traces of G1") {
  const auto modes = fixtures::g1_modes();
  const auto st_modes = self_timed_modes();
  const std::vector<ModeChangeRequest> reqs{{1, "SI1"}, {23, "SI2"}};

  const auto st = simulate(fixtures::g1(), modes, nullptr,
                           scenario("SI2", reqs, 80, Protocol::st, Timing::self_timed));
  REQUIRE(st.segments.size() == 3);
  CHECK(st.segments[1].delay() == 17);
  CHECK(st.segments[1].latency() == 16);
  CHECK(st.segments[2].delay() == 19);
  CHECK(st.segments[2].latency() == 19);
  CHECK(count_kind(verify_trace(st, st_modes, {}), "latency") == 2);

  const auto moo = simulate(fixtures::g1(), modes, nullptr,
                            scenario("SI2", reqs, 80, Protocol::moo, Timing::self_timed));
  REQUIRE(moo.segments.size() == 3);
  CHECK(moo.segments[1].delay() == 21);
  CHECK(moo.segments[1].latency() == 10);
  CHECK(moo.segments[2].latency() == 10);
  CHECK(count_kind(verify_trace(moo, st_modes, {}), "latency") == 0);
  CHECK(count_kind(moo.violations, "fifo underflow") == 0);
}

TEST_CASE("simulation is deterministic") {
  const auto modes = fixtures::g1_modes();
  const auto sc = scenario("SI2", {{1, "SI1"}, {23, "SI2"}}, 80, Protocol::st, Timing::self_timed);
  CHECK(simulate(fixtures::g1(), modes, nullptr, sc) ==
        simulate(fixtures::g1(), modes, nullptr, sc));
}

TEST_CASE("generated graphs: computed schedules never underflow, earlier starts do") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto c = generate_case(seed);
    std::map<ModeId, SteadyStateSchedule> modes;
    for (const auto& m : c.graph.control.modes)
      modes.emplace(m, steady_state(instantiate_mode(c.graph, m)));
    for (const auto& [m, s] : modes) {
      const auto trace =
          simulate(c.graph, modes, &c.allocation, scenario(m, {}, s.latency + 3 * s.hyper_period));
      CHECK(count_kind(trace.violations, "fifo underflow") == 0);
      CHECK(count_kind(trace.violations, "overload") == 0);
      for (const auto& [a, start] : s.start) {
        if (a == s.source || start == 0) continue;
        auto early = modes;
        early.at(m).start.at(a) -= 1;
        const auto bad =
            simulate(c.graph, early, nullptr, scenario(m, {}, s.latency + 3 * s.hyper_period));
        CAPTURE(seed);
        CAPTURE(a);
        CHECK(count_kind(bad.violations, "fifo underflow") >= 1);
      }
    }
  }
}
