#include <doctest.h>

#include "actseq/agent.hpp"

using namespace actseq;

namespace {

global_activity_spec ga(std::uint32_t id, std::vector<process_id> members) {
  global_activity_spec out;
  out.ga_id = id;
  out.kind = ga_kind::all_of;
  out.members = std::move(members);
  return out;
}

message control_from(process_id from, process_id to, vector_clock clock) {
  return message{from, to, 0.0, control_payload{std::move(clock)}};
}

} // namespace

TEST_CASE("up bumps the clock, notifies the activity, records the beginning") {
  agent p1(1, ga(1, {1, 2}), 4);
  auto msgs = p1.on_up(5.0);

  CHECK(p1.clock() == vector_clock{1, 0, 0, 0});
  REQUIRE(msgs.size() == 1);
  CHECK(msgs[0].to == 2);
  CHECK(msgs[0].is_control());
  CHECK(msgs[0].control().clock == vector_clock{1, 0, 0, 0});
  CHECK(p1.recorded_at_up());
}

TEST_CASE("up with a cleared flag still sends control but records nothing") {
  agent p1(1, ga(1, {1, 2}), 4);
  // Drive one reported interval to clear the flag.
  p1.on_up(1.0);
  p1.on_down(2.0);
  CHECK_FALSE(p1.msg_activity_flag());

  auto msgs = p1.on_up(3.0);
  REQUIRE(msgs.size() == 1);
  CHECK(msgs[0].to == 2);
  CHECK_FALSE(p1.recorded_at_up());
}

TEST_CASE("singleton activity member sends no up controls") {
  agent p1(1, ga(1, {1}), 1);
  auto msgs = p1.on_up(0.0);
  CHECK(msgs.empty());
  CHECK(p1.recorded_at_up());

  // n = 1: the down emits only the checking message.
  auto down = p1.on_down(1.0);
  REQUIRE(down.size() == 1);
  CHECK(down[0].to == checker_process);
}

TEST_CASE("down broadcasts to all and reports the interval") {
  agent p1(1, ga(1, {1, 2}), 4);
  p1.on_up(1.0);
  p1.on_control(control_from(2, 1, vector_clock{0, 1, 0, 0}));
  CHECK(p1.clock() == vector_clock{1, 1, 0, 0});

  auto msgs = p1.on_down(2.0);
  CHECK(p1.clock() == vector_clock{2, 1, 0, 0});
  REQUIRE(msgs.size() == 4); // controls to P2, P3, P4 plus the checking message

  int controls = 0;
  const checking_payload* report = nullptr;
  for (const auto& m : msgs) {
    if (m.is_control()) {
      ++controls;
      CHECK(m.control().clock == vector_clock{2, 1, 0, 0});
    } else {
      report = &m.checking();
      CHECK(m.to == checker_process);
    }
  }
  CHECK(controls == 3);
  REQUIRE(report != nullptr);
  CHECK(report->ga_id == 1);
  CHECK(report->seq == 1);
  CHECK(report->lo == vector_clock{1, 0, 0, 0});
  CHECK(report->hi == vector_clock{2, 1, 0, 0});
  CHECK(report->phys_lo == 1.0);
  CHECK(report->phys_hi == 2.0);
  CHECK_FALSE(p1.msg_activity_flag());
}

TEST_CASE("a flag cleared throughout the interval suppresses the report") {
  agent p1(1, ga(1, {1, 2}), 4);
  p1.on_up(1.0);
  p1.on_down(2.0); // reported, flag now false
  p1.on_up(3.0);   // beginning not re-recorded

  auto msgs = p1.on_down(4.0);
  CHECK(msgs.size() == 3); // controls only: nothing new to tell the checker
  for (const auto& m : msgs) {
    CHECK(m.is_control());
  }
}

TEST_CASE("a flag re-armed mid-interval reports with the retained beginning") {
  agent p1(1, ga(1, {1, 2}), 4);
  p1.on_up(1.0);
  p1.on_down(2.0); // reports [1,0,0,0] -> [2,0,0,0], flag cleared
  p1.on_up(3.0);   // runs with a cleared flag: beginning stays [1,0,0,0]

  p1.on_control(control_from(2, 1, vector_clock{0, 5, 0, 0}));
  CHECK(p1.msg_activity_flag());

  auto msgs = p1.on_down(4.0);
  const checking_payload* report = nullptr;
  for (const auto& m : msgs) {
    if (!m.is_control()) {
      report = &m.checking();
    }
  }
  REQUIRE(report != nullptr);
  CHECK(report->seq == 2);
  CHECK(report->lo == vector_clock{1, 0, 0, 0}); // the retained beginning
  CHECK(report->hi == vector_clock{4, 5, 0, 0});
  CHECK(leq(report->lo, report->hi));
}

TEST_CASE("control merges and re-arms the flag") {
  agent p1(1, ga(1, {1, 2}), 4);
  p1.on_up(1.0);
  p1.on_down(2.0);
  CHECK_FALSE(p1.msg_activity_flag());

  p1.on_control(control_from(3, 1, vector_clock{0, 3, 1, 0}));
  CHECK(p1.clock() == vector_clock{2, 3, 1, 0});
  CHECK(p1.msg_activity_flag());

  // Merging an already-covered clock changes nothing but the flag stays set.
  p1.on_control(control_from(3, 1, vector_clock{1, 1, 1, 0}));
  CHECK(p1.clock() == vector_clock{2, 3, 1, 0});
  CHECK(p1.msg_activity_flag());
}

TEST_CASE("protocol violations throw") {
  agent p1(1, ga(1, {1, 2}), 4);
  p1.on_up(1.0);
  CHECK_THROWS_AS(p1.on_up(2.0), protocol_error); // double up

  agent p2(2, ga(1, {1, 2}), 4);
  CHECK_THROWS_AS(p2.on_down(1.0), protocol_error); // down without up

  message stray{1, 2, 0.0, checking_payload{}};
  CHECK_THROWS_AS(p2.on_control(stray), protocol_error); // misrouted checking
}

TEST_CASE("sequence numbers rise and every report is causally ordered") {
  agent p1(1, ga(1, {1, 2}), 2);
  std::uint64_t last_seq = 0;
  for (int i = 0; i < 5; ++i) {
    p1.on_up(i * 10.0);
    // Re-arm between reports; the flag contract requires a control in between.
    auto msgs = p1.on_down(i * 10.0 + 5.0);
    for (const auto& m : msgs) {
      if (!m.is_control()) {
        CHECK(happened_before(m.checking().lo, m.checking().hi));
        CHECK(m.checking().seq > last_seq);
        last_seq = m.checking().seq;
      }
    }
    p1.on_control(control_from(2, 1, vector_clock{0, static_cast<std::uint64_t>(i + 1)}));
  }
  CHECK(last_seq == 5);
}

TEST_CASE("no second report without an intervening control") {
  agent p1(1, ga(1, {1, 2}), 2);
  p1.on_up(1.0);
  auto first = p1.on_down(2.0);
  bool reported_first = false;
  for (const auto& m : first) {
    reported_first |= !m.is_control();
  }
  CHECK(reported_first);

  p1.on_up(3.0);
  auto second = p1.on_down(4.0);
  for (const auto& m : second) {
    CHECK(m.is_control());
  }
}
