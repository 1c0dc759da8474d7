#include <doctest.h>

#include <cmath>

#include "actseq/harness.hpp"
#include "actseq/report.hpp"

using namespace actseq;

namespace {

constraint_spec smart_lock() { return parse_constraint(smart_lock_constraint); }

} // namespace

TEST_CASE("zero lifetime gives an empty schedule and no cycles") {
  scenario_params params;
  params.lifetime = 0.0;
  auto wl = generate_workload(params, smart_lock());
  CHECK(wl.transitions.empty());
  CHECK(wl.truth.num_phy == 0);

  auto run = run_experiment(params, smart_lock());
  CHECK(run.result.num_phy == 0);
  CHECK(run.result.probability == 0.0);
}

TEST_CASE("constant stay durations give floor(lifetime / cycle) cycles") {
  scenario_params params;
  params.lifetime = 10'000.0;
  auto wl = generate_workload(params, smart_lock(),
                              [](bool in) { return in ? 600.0 : 300.0; });
  CHECK(wl.truth.num_phy == 11); // floor(10000 / 900)
  for (const auto& c : wl.truth.cycles) {
    CHECK(c.valid());
    CHECK(c.corridor_exit <= params.lifetime);
  }
}

TEST_CASE("cycle count matches the renewal rate over ten seeds") {
  scenario_params params; // 20 days, 600 s in + 300 s out
  double expected = params.lifetime / 900.0;
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    params.seed = seed;
    auto wl = generate_workload(params, smart_lock());
    total += static_cast<double>(wl.truth.num_phy);
  }
  double mean = total / 10.0;
  CHECK(mean > expected * 0.9);
  CHECK(mean < expected * 1.1);
}

TEST_CASE("transitions are observed at the next dissemination tick") {
  // Phase comes from the seed; pin it by probing a reference transition.
  std::vector<transition> truth{{100.0, 1, true}};
  auto observed = apply_update_interval(truth, 60.0, 5, 1);
  REQUIRE(observed.size() == 1);
  double phase = std::fmod(observed[0].time, 60.0);
  double expected = phase + 60.0 * std::ceil((100.0 - phase) / 60.0);
  CHECK(observed[0].time == doctest::Approx(expected));
  CHECK(observed[0].time >= 100.0);
  CHECK(observed[0].time < 160.0);
}

TEST_CASE("a zero-phase tick grid maps 100 onto 120") {
  // Find a seed whose phase for P1 is close enough to zero to pin the
  // arithmetic, or use the formula directly: with phase 0 and period 60 a
  // transition at t=100 is observed at 120.
  double phase = 0.0;
  double period = 60.0;
  double t = 100.0;
  double steps = std::ceil((t - phase) / period);
  CHECK(phase + steps * period == 120.0);
}

TEST_CASE("a tiny update interval observes transitions almost immediately") {
  scenario_params params;
  params.lifetime = 5000.0;
  auto wl = generate_workload(params, smart_lock());
  auto observed = apply_update_interval(wl.transitions, 1e-6, params.seed, 4);
  REQUIRE(observed.size() == wl.transitions.size());
  for (std::size_t i = 0; i < observed.size(); ++i) {
    CHECK(observed[i].time >= wl.transitions[i].time);
    CHECK(observed[i].time - wl.transitions[i].time < 1e-5);
  }
}

TEST_CASE("collapse frequency matches the tick-miss probability") {
  // A stay of length d with period T collapses when no tick lands inside,
  // which happens with probability 1 - d/T under a uniform phase.
  const double d = 300.0, period = 5400.0;
  int collapsed = 0;
  const int samples = 2000;
  for (int i = 0; i < samples; ++i) {
    std::vector<transition> truth{{1000.0, 1, true}, {1000.0 + d, 1, false}};
    auto observed =
        apply_update_interval(truth, period, static_cast<std::uint64_t>(i), 1);
    if (observed[0].time == observed[1].time) {
      ++collapsed;
    }
  }
  double rate = static_cast<double>(collapsed) / samples;
  double expected = 1.0 - d / period;
  CHECK(rate == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("collapsed intervals stay up-then-down at one tick") {
  std::vector<transition> truth{{1000.0, 1, true}, {1010.0, 1, false}};
  auto observed = apply_update_interval(truth, 5400.0, 7, 1);
  REQUIRE(observed.size() == 2);
  CHECK(observed[0].up);
  CHECK_FALSE(observed[1].up);
  CHECK(observed[0].time <= observed[1].time);
}

TEST_CASE("experiment smoke run keeps the safety invariant") {
  scenario_params params;
  params.lifetime = 24 * 3600.0;
  params.update_interval = 30.0;
  params.seed = 21;
  auto run = run_experiment(params, smart_lock());
  CHECK(run.result.num_phy > 0);
  CHECK(run.result.num_oga <= run.result.num_phy);
  CHECK(run.result.probability > 0.5);

  auto report = physical_oracle(run, smart_lock());
  CHECK(report.ok());
  CHECK(report.matched == run.result.num_oga);

  // Causal overlap implies the observed physical periods intersect.
  for (const auto& det : run.detections) {
    const auto& ivs = det.occurrence.intervals;
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      for (std::size_t j = i + 1; j < ivs.size(); ++j) {
        REQUIRE(intervals_overlap(ivs[i], ivs[j]));
        CHECK(ivs[i].phys_lo <= ivs[j].phys_hi);
        CHECK(ivs[j].phys_lo <= ivs[i].phys_hi);
      }
    }
  }
}

TEST_CASE("probability approaches one as update interval and delay vanish") {
  scenario_params params;
  params.lifetime = 4 * 24 * 3600.0;
  params.update_interval = 1.0;
  params.mean_delay = 0.06;
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    params.seed = seed;
    total += run_experiment(params, smart_lock()).result.probability;
  }
  CHECK(total / 3.0 >= 0.98);
}

TEST_CASE("experiments are deterministic in params and seed") {
  scenario_params params;
  params.lifetime = 12 * 3600.0;
  params.update_interval = 120.0;
  params.seed = 77;
  auto a = run_experiment(params, smart_lock());
  auto b = run_experiment(params, smart_lock());
  CHECK(a.result.num_oga == b.result.num_oga);
  CHECK(a.result.num_phy == b.result.num_phy);
  CHECK(a.result.messages_sent == b.result.messages_sent);
}

TEST_CASE("physical oracle counts hand-built truths") {
  run_artifacts run;
  run.truth.cycles.push_back(truth_cycle{0.0, 300.0, 310.0, 400.0});
  run.truth.num_phy = 1;
  auto report = physical_oracle(run, smart_lock());
  CHECK(report.num_phy == 1);
  CHECK(report.ok());

  // Corrupted truth: corridor overlaps the office stay.
  run_artifacts bad;
  bad.truth.cycles.push_back(truth_cycle{0.0, 300.0, 250.0, 400.0});
  auto report2 = physical_oracle(bad, smart_lock());
  CHECK(report2.num_phy == 0);
}

TEST_CASE("physical oracle rejects a satisfaction with no preceding cycle") {
  run_artifacts run;
  run.truth.cycles.push_back(truth_cycle{1000.0, 1300.0, 1300.0, 1400.0});

  ga_occurrence first;
  first.ga_id = 1;
  timed_interval iv1;
  iv1.owner = 1;
  iv1.lo = vector_clock{1, 0, 0, 0};
  iv1.hi = vector_clock{2, 0, 0, 0};
  iv1.phys_lo = 10.0;
  iv1.phys_hi = 20.0;
  first.intervals = {iv1};
  first.que_lo = {iv1.lo};
  first.que_hi = {iv1.hi};

  ga_occurrence second = first;
  second.ga_id = 2;
  second.intervals[0].owner = 3;
  second.intervals[0].phys_lo = 30.0; // long before the only cycle's corridor
  second.intervals[0].phys_hi = 40.0;
  second.intervals[0].lo = vector_clock{2, 0, 1, 0};
  second.intervals[0].hi = vector_clock{2, 0, 2, 0};
  second.que_lo = {second.intervals[0].lo};
  second.que_hi = {second.intervals[0].hi};

  satisfaction_event ev;
  ev.count = 1;
  ev.chain = {first, second};
  run.satisfactions.push_back(satisfaction_record{50.0, ev});
  run.result.num_oga = 1;

  auto report = physical_oracle(run, smart_lock());
  CHECK_FALSE(report.ok());
}

TEST_CASE("invalid scenario parameters are rejected") {
  scenario_params params;
  params.update_interval = 0.0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);

  scenario_params negative;
  negative.lifetime = -1.0;
  CHECK_THROWS_AS(negative.validate(), std::invalid_argument);

  CHECK_THROWS_AS(run_experiment(scenario_params{}, parse_constraint("AND(1)")),
                  std::invalid_argument);
}
