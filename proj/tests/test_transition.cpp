#include <doctest.h>

#include "fixtures.hpp"
#include "madf/generator.hpp"
#include "oracles.hpp"

using namespace madf;

namespace {

const SteadyStateSchedule& si1() { return fixtures::g1_mode("SI1"); }
const SteadyStateSchedule& si2() { return fixtures::g1_mode("SI2"); }

std::vector<SteadyStateSchedule> schedules_of(const MadfGraph& g) {
  std::vector<SteadyStateSchedule> out;
  for (const auto& m : g.control.modes) out.push_back(steady_state(instantiate_mode(g, m)));
  return out;
}

}  // namespace

TEST_CASE("MOO offset") {
  const ActorMap<Time> st2{{"A1", 0}, {"A2", 1}, {"A3", 9}, {"A5", 10}, {"A4", 2}};
  const ActorMap<Time> st1{{"A1", 0}, {"A2", 1}, {"A3", 5}, {"A5", 10}};
  CHECK(moo_offset(st2, st1) == 4);
  CHECK(moo_offset(st1, st2) == 0);
  CHECK(moo_offset(si2(), si1()) == 6);
  CHECK(moo_offset(si1(), si2()) == 0);
  CHECK(moo_offset(ActorMap<Time>{{"A", 3}}, ActorMap<Time>{{"B", 0}}) == 0);
}

TEST_CASE("source completion") {
  CHECK(source_completion(8, 13, 8) == 16);
  CHECK(source_completion(8, 16, 8) == 16);
  CHECK(source_completion(0, 1, 8) == 8);
  CHECK_THROWS_AS(source_completion(8, 7, 8), AnalysisError);
}

TEST_CASE("start-time bounds of the worked example") {
  const Time f = source_completion(8, 13, si2().hyper_period);
  REQUIRE(f == 16);
  const Time x = moo_offset(si2(), si1());
  const auto upper = start_upper_bound(si2(), si1(), f);
  const auto lower = start_lower_bound(si2(), si1(), f, x);
  CHECK(upper.at("A5") == 50);
  CHECK(upper.at("A5") - 13 == 37);
  CHECK(lower.at("A5") == 36);
  CHECK(lower.at("A5") - 13 == 23);
  CHECK(upper.at("A1") == f + si2().sink_start());
  for (const auto& [a, t] : lower) CHECK(t <= upper.at(a));
}

TEST_CASE("PE utilization during SI2 to SI1") {
  const auto& alloc = fixtures::alloc3pe();
  const auto old_part = UtilizationPart::old_mode;
  CHECK(utilization_at(6, 6, alloc, si2(), si1(), "PE1", old_part) == Rational(3, 4));
  CHECK(utilization_at(8, 6, alloc, si2(), si1(), "PE1", old_part) == Rational(3, 8));
  CHECK(utilization_at(14, 8, alloc, si2(), si1(), "PE1") == Rational(1));
  CHECK(utilization_at(6, 6, alloc, si2(), si1(), "PE1") == Rational(5, 4));
  const auto& pe1 = alloc.partitions.at("PE1");
  for (Time t = 0; t <= 20; ++t)
    for (Time k = 0; k <= 30; ++k)
      CHECK(utilization_at(k, t, alloc, si2(), si1(), "PE1") ==
            oracle::pe_utilization(k, t, pe1, si2(), si1()));
}

TEST_CASE("the Heaviside step is one at zero") {
  // A4 starts at 8 in SI2: its share is gone at exactly k = 8.
  Allocation a;
  a.partitions["P"] = {"A4"};
  CHECK(utilization_at(7, 0, a, si2(), si1(), "P") == Rational(3, 8));
  CHECK(utilization_at(8, 0, a, si2(), si1(), "P") == Rational(0));
  CHECK(oracle::heaviside(0) == 1);
}

TEST_CASE("monotone parts of the PE load") {
  const auto& alloc = fixtures::alloc3pe();
  for (Time t = 0; t <= 20; ++t)
    for (Time k = 0; k < 30; ++k) {
      CHECK(utilization_at(k + 1, t, alloc, si2(), si1(), "PE1", UtilizationPart::old_mode) <=
            utilization_at(k, t, alloc, si2(), si1(), "PE1", UtilizationPart::old_mode));
      CHECK(utilization_at(k + 1, t, alloc, si2(), si1(), "PE1", UtilizationPart::new_mode) >=
            utilization_at(k, t, alloc, si2(), si1(), "PE1", UtilizationPart::new_mode));
    }
}

TEST_CASE("allocation-aware delta") {
  const Time x = moo_offset(si2(), si1());
  CHECK(allocation_delta(fixtures::alloc3pe(), si2(), si1(), x) == 8);
  CHECK(allocation_delta_event_points(fixtures::alloc3pe(), si2(), si1(), x) == 8);
  CHECK(oracle::delta(fixtures::alloc3pe(), si2(), si1(), x) == 8);
  CHECK(allocation_delta(fixtures::alloc_per_actor(), si2(), si1(), x) == x);
  CHECK(allocation_delta(fixtures::alloc_per_actor(), si1(), si2(), 0) == 0);
}

TEST_CASE("delay bounds") {
  CHECK(delay_bounds(si2(), si1(), 8) == std::pair<Time, Time>{22, 30});
  CHECK(delay_bounds(si2(), si1(), 6) == std::pair<Time, Time>{20, 28});
  CHECK(delay_bounds(si1(), si1(), 0) == std::pair<Time, Time>{14, 22});
}

TEST_CASE("full transition analysis of G1") {
  const auto t = analyze_transition(si2(), si1(), &fixtures::alloc3pe());
  CHECK(t.from == "SI2");
  CHECK(t.to == "SI1");
  CHECK(t.x == 6);
  CHECK(t.delta == 8);
  CHECK(t.allocation_aware);
  CHECK(t.delta_min == 22);
  CHECK(t.delta_max == 30);
  CHECK(t.sigma_lower.at("A5") == 20);
  CHECK(t.sigma_upper.at("A5") == 34);

  const auto free = analyze_transition(si2(), si1());
  CHECK_FALSE(free.allocation_aware);
  CHECK(free.delta == free.x);
  CHECK(free.delta_min == 20);

  const auto back = analyze_transition(si1(), si2(), &fixtures::alloc3pe());
  CHECK(back.x == 0);
  CHECK(back.delta_min == back.delta + 20);
  CHECK(back.delta_max == back.delta_min + 8);
}

TEST_CASE("all-pairs analysis order") {
  const auto all = analyze_all_transitions({si1(), si2()}, &fixtures::alloc_per_actor());
  REQUIRE(all.size() == 2);
  CHECK(all[0].from == "SI1");
  CHECK(all[1].from == "SI2");
  CHECK(all[1].delta_min == 20);
  CHECK(all[1].delta_max == 28);
}

TEST_CASE("utilization bounds") {
  CHECK(UtilizationBound::edf().admits(1, 5));
  CHECK_FALSE(UtilizationBound::edf().admits(Rational(9, 8), 1));
  const auto rm = UtilizationBound::rm();
  CHECK(rm.admits(1, 1));
  CHECK_FALSE(rm.admits(1, 2));
  CHECK(rm.admits(Rational(82, 100), 2));  // 2(sqrt2 - 1) = 0.8284
  CHECK_FALSE(rm.admits(Rational(83, 100), 2));
  CHECK(rm.admits(Rational(69, 100), 100));
  CHECK_FALSE(rm.admits(Rational(70, 100), 100));
  const auto fixed = UtilizationBound::fixed(Rational(1, 2));
  CHECK(fixed.admits(Rational(1, 2), 3));
  CHECK_FALSE(fixed.admits(Rational(3, 5), 1));
}

TEST_CASE("allocation validation") {
  const auto modes = std::vector<SteadyStateSchedule>{si1(), si2()};
  CHECK(validate_allocation(fixtures::alloc3pe(), modes).empty());
  CHECK(validate_allocation(fixtures::alloc_per_actor(), modes).empty());

  auto rm = fixtures::alloc3pe();
  rm.bound = UtilizationBound::rm();
  const auto diags = validate_allocation(rm, modes);
  REQUIRE_FALSE(diags.empty());
  CHECK(diags[0].code == "overloaded PE");

  Allocation bad;
  bad.partitions["P1"] = {"A1", "A2", "A9"};
  bad.partitions["P2"] = {"A1", "A3", "A4"};
  std::set<std::string> codes;
  for (const auto& d : validate_allocation(bad, modes)) codes.insert(d.code);
  CHECK(codes == std::set<std::string>{"duplicate allocation", "unallocated actor", "unknown actor",
                                       "overloaded PE"});
}

TEST_CASE("generated graphs: delta ordering, oracle agreement and history independence") {
  int pairs = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const auto c = generate_case(seed);
    const auto modes = schedules_of(c.graph);
    const auto all = analyze_all_transitions(modes, &c.allocation);
    std::size_t i = 0;
    for (const auto& o : modes)
      for (const auto& l : modes) {
        if (o.mode == l.mode) continue;
        const auto& t = all.at(i++);
        CHECK(t == analyze_transition(o, l, &c.allocation));
        CHECK(t.x <= t.delta);
        CHECK(t.delta <= o.sink_start());
        CHECK(t.delta_max == t.delta_min + o.hyper_period);
        CHECK(allocation_delta(c.allocation, o, l, t.x) == t.delta);
        CHECK(oracle::delta(c.allocation, o, l, t.x) == t.delta);
        for (const auto& [a, s] : t.sigma_lower) CHECK(s <= t.sigma_upper.at(a));
        ++pairs;
      }
    // reversed analysis order gives identical results
    std::vector<SteadyStateSchedule> reversed(modes.rbegin(), modes.rend());
    for (const auto& t : analyze_all_transitions(reversed, &c.allocation))
      for (const auto& u : all)
        if (t.from == u.from && t.to == u.to) CHECK(t == u);
  }
  CHECK(pairs > 100);
}
