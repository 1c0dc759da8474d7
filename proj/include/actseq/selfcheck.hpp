#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "actseq/harness.hpp"

namespace actseq {

/// First-principles happen-before over a simulation's execution log:
/// program-order edges between a process's events plus send->receive edges,
/// closed transitively. Independent of vector clocks.
class event_graph {
public:
  static event_graph build(const run_artifacts& run);

  /// Node id for a record index (up/down/recv_control records only).
  std::size_t node_of(std::size_t record_index) const;
  std::size_t node_count() const { return nodes_; }

  /// Strict happen-before between two nodes.
  bool hb(std::size_t a, std::size_t b) const {
    return a != b && (reach_[a * blocks_ + b / 64] >> (b % 64) & 1) != 0;
  }

private:
  std::size_t nodes_ = 0;
  std::size_t blocks_ = 0;
  std::vector<std::uint64_t> reach_; // row-major reachability bitsets
  std::vector<std::size_t> record_to_node_;
};

/// What the brute-force detector decided: interval identities per detection,
/// pruned endpoint identities, and the ordering outcome.
struct oracle_interval_ref {
  process_id owner = 0;
  std::uint64_t seq = 0;

  friend auto operator<=>(const oracle_interval_ref&,
                          const oracle_interval_ref&) = default;
};

struct oracle_occurrence {
  std::uint32_t ga_id = 0;
  std::vector<oracle_interval_ref> intervals; // member order
  std::vector<oracle_interval_ref> pruned_lo; // sorted
  std::vector<oracle_interval_ref> pruned_hi; // sorted
};

struct oracle_outcome {
  std::vector<oracle_occurrence> detections; // per delivery order
  std::uint64_t satisfied = 0;
  std::vector<std::vector<std::size_t>> chains; // detection indices per satisfaction
};

/// Brute-force detector and orderer over the transitive-closure relation:
/// enumerates all combinations of queued intervals, detects the pointwise
/// minimal pairwise-overlapping one, and replays the ordering pass with
/// graph reachability instead of clock comparison.
oracle_outcome run_tc_oracle(const run_artifacts& run,
                             const constraint_spec& constraint);

struct equivalence_report {
  bool ok = true;
  std::vector<std::string> mismatches;
};

/// Compares a run's checker output against the brute-force oracle:
/// detection sequences, pruned endpoint sets, eliminated intervals, ordering
/// results, and clock/happen-before agreement on transition events.
equivalence_report compare_with_oracle(const run_artifacts& run,
                                       const constraint_spec& constraint);

struct micro_trial_config {
  std::uint64_t seed = 1;
  std::size_t trials = 1000;
  std::size_t max_processes = 4;
  std::size_t max_intervals = 6;
};

struct micro_suite_result {
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::vector<std::string> details; // first few failure descriptions
};

/// Randomized micro-executions through the real agent/network/checker
/// pipeline, each cross-checked against the brute-force oracle.
micro_suite_result run_micro_suite(const micro_trial_config& config);

} // namespace actseq
