#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "actseq/activity.hpp"
#include "actseq/checker.hpp"
#include "actseq/simnet.hpp"

namespace actseq {

/// Smart-lock scenario configuration. Defaults follow the evaluated
/// configuration: a 20-day lifetime, 600 s mean office stays, 300 s mean
/// corridor stays, and exponentially distributed message delays.
struct scenario_params {
  double lifetime = 20.0 * 24.0 * 3600.0;
  double mean_stay_in = 600.0;
  double mean_stay_out = 300.0;
  double update_interval = 60.0;
  double mean_delay = 0.06;
  delay_kind delay = delay_kind::exponential;
  std::uint64_t seed = 1;

  void validate() const;
};

/// One office stay followed by one corridor stay, in true time.
struct truth_cycle {
  double office_enter = 0.0;
  double office_exit = 0.0;
  double corridor_enter = 0.0;
  double corridor_exit = 0.0;

  bool valid() const;
};

struct ground_truth {
  std::vector<truth_cycle> cycles; // complete cycles, time-ordered
  std::uint64_t num_phy = 0; // physically ordered GA_1 < GA_2 occurrences
};

/// A local predicate transition, true or observed.
struct transition {
  double time = 0.0;
  process_id pid = 0;
  bool up = false;
};

struct workload {
  ground_truth truth;
  std::vector<transition> transitions; // true transitions, time-ordered
};

/// Alternating office/corridor stays with exponentially distributed
/// durations. The first activity's members act as office sensors, the
/// second's as corridor sensors. A cycle truncated by the lifetime is
/// excluded from num_phy but still contributes its in-horizon transitions.
workload generate_workload(const scenario_params& params,
                           const constraint_spec& constraint);

/// Seam for tests: stay durations come from the sampler
/// (sampler(true) = office stay, sampler(false) = corridor stay).
workload generate_workload(const scenario_params& params,
                           const constraint_spec& constraint,
                           const std::function<double(bool)>& stay_sampler);

/// Each sensor disseminates on a periodic tick with an independent uniform
/// random phase; a true transition is observed at the next tick at or after
/// it. An up and a down falling into the same tick gap are observed as an
/// instantaneous interval at that tick, up first.
std::vector<transition> apply_update_interval(const std::vector<transition>& truth,
                                              double update_interval,
                                              std::uint64_t seed,
                                              std::size_t process_count);

struct experiment_result {
  std::uint64_t num_oga = 0;
  std::uint64_t num_phy = 0;
  double probability = 0.0;
  std::uint64_t messages_sent = 0;
  std::uint64_t events_dropped = 0;
  std::vector<std::uint64_t> detections_per_ga;
};

enum class record_kind {
  up,
  down,
  send_control,
  send_checking,
  recv_control,
  recv_checking,
};

/// One handler invocation in the execution log.
struct sim_record {
  double time = 0.0;
  record_kind kind = record_kind::up;
  process_id pid = 0; // acting process (receiver for recv_*, sender for send_*)
  std::uint64_t msg_id = 0; // nonzero for send_*/recv_* records
  process_id peer = 0; // recipient of a send, sender of a receive
  vector_clock clock; // acting process's clock after the step
};

struct detection_record {
  double time = 0.0;
  ga_occurrence occurrence;
};

struct satisfaction_record {
  double time = 0.0;
  satisfaction_event event;
};

/// Everything one simulation produced, in deterministic order.
struct run_artifacts {
  ground_truth truth;
  std::vector<transition> observed;
  std::vector<sim_record> records;
  std::vector<message> trace; // every message, in send order
  std::vector<detection_record> detections;
  std::vector<satisfaction_record> satisfactions;
  /// (owner, seq) -> indices into `records` of the interval's up/down events.
  std::map<std::pair<process_id, std::uint64_t>, std::pair<std::size_t, std::size_t>>
      interval_nodes;
  std::vector<std::pair<process_id, std::uint64_t>> eliminated;
  checker_stats stats;
  experiment_result result;
};

/// Core driver: schedules the observed transitions, routes messages through
/// the delay model, and feeds the checker. Identical inputs produce an
/// identical log.
run_artifacts simulate_transitions(const constraint_spec& constraint,
                                   const std::vector<transition>& observed,
                                   delay_model model, std::uint64_t seed,
                                   double lifetime);

/// Full pipeline: workload -> update-interval filter -> agents -> network ->
/// checker, then the Num_OGA / Num_phy metric.
run_artifacts run_experiment(const scenario_params& params,
                             const constraint_spec& constraint);

struct oracle_report {
  std::uint64_t num_phy = 0;
  std::uint64_t matched = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Ground-truth cross-check: counts physically ordered cycles and matches
/// every satisfaction event to a distinct cycle whose office->corridor
/// transition physically precedes the event's corridor evidence. Any
/// unmatched event or physically inverted chain is a violation.
oracle_report physical_oracle(const run_artifacts& run,
                              const constraint_spec& constraint);

} // namespace actseq
