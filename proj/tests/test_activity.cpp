#include <doctest.h>

#include "actseq/activity.hpp"
#include "actseq/simnet.hpp"

using namespace actseq;

namespace {

timed_interval make_interval(process_id owner, vector_clock lo, vector_clock hi) {
  timed_interval iv;
  iv.owner = owner;
  iv.lo = std::move(lo);
  iv.hi = std::move(hi);
  return iv;
}

} // namespace

TEST_CASE("interval overlap follows the crossing precedences") {
  // P1 up; P2 up after P1's control; P1 down after P2's control; P2 down last.
  auto a = make_interval(1, vector_clock{1, 0, 0, 0}, vector_clock{2, 1, 0, 0});
  auto b = make_interval(2, vector_clock{1, 1, 0, 0}, vector_clock{2, 2, 0, 0});
  CHECK(intervals_overlap(a, b));
  CHECK(intervals_overlap(b, a)); // symmetric

  // Disjoint on P1/P2: b begins only after a ended.
  auto c = make_interval(1, vector_clock{1, 0}, vector_clock{2, 0});
  auto d = make_interval(2, vector_clock{2, 1}, vector_clock{2, 2});
  CHECK_FALSE(intervals_overlap(c, d));
  CHECK_FALSE(intervals_overlap(d, c));

  // An interval overlaps itself: lo -> hi holds in both conjuncts.
  CHECK(intervals_overlap(a, a));
}

TEST_CASE("parse smart-lock constraint") {
  auto spec = parse_constraint("AND(1,2) < AND(3,4)");
  REQUIRE(spec.size() == 2);
  CHECK(spec.process_count() == 4);
  CHECK(spec.activities()[0].kind == ga_kind::all_of);
  CHECK(spec.activities()[0].members == std::vector<process_id>{1, 2});
  CHECK(spec.activities()[1].members == std::vector<process_id>{3, 4});
  CHECK(spec.activity_of(3).ga_id == 2);
}

TEST_CASE("parse minimal and whitespace forms") {
  auto spec = parse_constraint("OR(1,2)");
  REQUIRE(spec.size() == 1);
  CHECK(spec.activities()[0].kind == ga_kind::any_of);

  auto spaced = parse_constraint("  AND( 2 , 1 )<OR(3)  ");
  CHECK(render_constraint(spaced) == "AND(1,2) < OR(3)");
}

TEST_CASE("parse rejects bad constraints") {
  CHECK_THROWS_AS(parse_constraint("AND(1,2) < AND(2,3)"), constraint_error);
  CHECK_THROWS_AS(parse_constraint("AND()"), constraint_error);
  CHECK_THROWS_AS(parse_constraint("AND(1,3)"), constraint_error); // P2 missing
  CHECK_THROWS_AS(parse_constraint("XOR(1)"), constraint_error);
  CHECK_THROWS_AS(parse_constraint("AND(0)"), constraint_error);
  CHECK_THROWS_AS(parse_constraint("AND(1,2"), constraint_error);
  CHECK_THROWS_AS(parse_constraint(""), constraint_error);
}

TEST_CASE("parse of rendered form is identity") {
  auto rng = rng_stream::derive(99, 0xa11);
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 6.0);
    std::size_t m = 1 + static_cast<std::size_t>(rng.uniform01() * 2.0);
    m = std::min(m, n);
    std::vector<global_activity_spec> gas(m);
    for (auto& ga : gas) {
      ga.kind = rng.uniform01() < 0.5 ? ga_kind::all_of : ga_kind::any_of;
    }
    for (process_id pid = 1; pid <= n; ++pid) {
      std::size_t slot = pid <= m ? pid - 1
                                  : static_cast<std::size_t>(rng.uniform01() *
                                                             static_cast<double>(m));
      gas[std::min(slot, m - 1)].members.push_back(pid);
    }
    constraint_spec spec(std::move(gas));
    auto text = render_constraint(spec);
    auto spec2 = parse_constraint(text);
    CHECK(render_constraint(spec2) == text);
  }
}

TEST_CASE("overlap implies physical intersection on simulated intervals") {
  // Causality respects simulated real time, so causally overlapping
  // intervals must intersect physically; the converse need not hold.
  auto a = make_interval(1, vector_clock{1, 0}, vector_clock{2, 1});
  a.phys_lo = 10.0;
  a.phys_hi = 20.0;
  auto b = make_interval(2, vector_clock{1, 1}, vector_clock{2, 2});
  b.phys_lo = 12.0;
  b.phys_hi = 22.0;
  REQUIRE(intervals_overlap(a, b));
  CHECK(a.phys_lo < b.phys_hi);
  CHECK(b.phys_lo < a.phys_hi);
}
