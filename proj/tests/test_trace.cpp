#include <doctest.h>

#include "actseq/simnet.hpp"
#include "actseq/trace.hpp"

using namespace actseq;

TEST_CASE("render and parse round-trip") {
  message ctl{1, 2, 12.5, control_payload{vector_clock{2, 1, 0, 0}}};
  checking_payload chk;
  chk.ga_id = 1;
  chk.seq = 3;
  chk.lo = vector_clock{1, 0, 0, 0};
  chk.hi = vector_clock{2, 1, 0, 0};
  message report{1, checker_process, 13.25, chk};

  auto ctl_line = render_trace_line(ctl);
  auto chk_line = render_trace_line(report);
  CHECK(ctl_line == "CTL,12.500000,1,2,0,0,[2,1,0,0],[]");
  CHECK(chk_line == "CHK,13.250000,1,0,3,1,[1,0,0,0],[2,1,0,0]");

  auto ctl2 = parse_trace_line(ctl_line, 1);
  CHECK(ctl2.is_control());
  CHECK(ctl2.from == 1);
  CHECK(ctl2.to == 2);
  CHECK(ctl2.control().clock == vector_clock{2, 1, 0, 0});

  auto chk2 = parse_trace_line(chk_line, 2);
  REQUIRE_FALSE(chk2.is_control());
  CHECK(chk2.checking().seq == 3);
  CHECK(chk2.checking().ga_id == 1);
  CHECK(chk2.checking().lo == vector_clock{1, 0, 0, 0});
  CHECK(chk2.checking().hi == vector_clock{2, 1, 0, 0});
}

TEST_CASE("random messages survive the round-trip") {
  auto rng = rng_stream::derive(5, 0x7ace);
  std::vector<message> msgs;
  for (int i = 0; i < 300; ++i) {
    auto clock_of = [&] {
      std::vector<std::uint64_t> e(4);
      for (auto& x : e) {
        x = static_cast<std::uint64_t>(rng.uniform01() * 100.0);
      }
      return vector_clock(e);
    };
    if (rng.uniform01() < 0.5) {
      msgs.push_back(message{static_cast<process_id>(1 + i % 4),
                             static_cast<process_id>(1 + (i + 1) % 4),
                             rng.uniform01() * 1e6, control_payload{clock_of()}});
    } else {
      checking_payload chk;
      chk.ga_id = 1 + i % 2;
      chk.seq = static_cast<std::uint64_t>(i);
      chk.lo = clock_of();
      chk.hi = clock_of();
      msgs.push_back(message{static_cast<process_id>(1 + i % 4), checker_process,
                             rng.uniform01() * 1e6, chk});
    }
  }
  auto text = render_trace(msgs);
  auto parsed = parse_trace(text);
  CHECK(render_trace(parsed) == text);
}

TEST_CASE("malformed lines carry their line number") {
  CHECK_THROWS_AS(parse_trace("CHK,1.0,1,0,1\n"), trace_error);
  CHECK_THROWS_AS(parse_trace("FOO,1.0,1,0,1,1,[1],[2]\n"), trace_error);
  CHECK_THROWS_AS(parse_trace("CHK,1.0,1,0,x,1,[1],[2]\n"), trace_error);
  CHECK_THROWS_AS(parse_trace("CHK,1.0,1,0,1,1,[1,[2]\n"), trace_error);

  try {
    parse_trace("CTL,1.0,1,2,0,0,[1,0],[]\nbroken\n");
    FAIL("expected a trace_error");
  } catch (const trace_error& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("blank lines and comments are skipped") {
  auto msgs = parse_trace("# header\n\nCTL,1.000000,1,2,0,0,[1],[]\n");
  CHECK(msgs.size() == 1);
}
