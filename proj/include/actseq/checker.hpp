#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <vector>

#include "actseq/activity.hpp"
#include "actseq/agent.hpp"
#include "actseq/vclock.hpp"

namespace actseq {

/// A detected occurrence of a global activity. In an asynchronous run the
/// latest beginning and earliest ending may be undecidable, so the interval
/// endpoints are kept as antichains of pairwise-concurrent clocks.
struct ga_occurrence {
  std::uint32_t ga_id = 0;
  std::vector<vector_clock> que_lo; // pruned beginnings
  std::vector<vector_clock> que_hi; // pruned endings
  std::vector<timed_interval> intervals; // contributing heads, member order
};

/// Prunes the heads' endpoints into the occurrence interval.
///
/// For a conjunction the activity holds on the intersection: beginnings that
/// happen before another beginning cannot be the latest and are dropped;
/// endings that happen after another ending cannot be the earliest and are
/// dropped. A disjunction is the dual: earliest beginnings, latest endings.
ga_occurrence compute_interval(std::uint32_t ga_id,
                               std::vector<timed_interval> heads, ga_kind kind);

/// One completed pass through the whole constraint sequence.
struct satisfaction_event {
  std::uint64_t count = 0; // 1-based satisfaction ordinal
  std::vector<ga_occurrence> chain; // the m occurrences that were ordered
};

struct checker_stats {
  std::uint64_t checking_messages = 0;
  std::uint64_t detection_comparisons = 0;
  std::uint64_t ordering_comparisons = 0;
  std::uint64_t eliminated_intervals = 0;
  std::uint64_t discarded_occurrences = 0;
};

/// The checker process: reconstructs per-process FIFO from sequence numbers,
/// detects each global activity from the per-member interval queues, and
/// orders detected occurrences against the constraint sequence.
class checker {
public:
  explicit checker(constraint_spec spec);

  struct ingest_result {
    std::vector<ga_occurrence> detections;
    std::vector<satisfaction_event> satisfactions;
  };

  /// Feeds one checking message. Out-of-order messages are buffered until
  /// the per-sender gap fills; duplicates and unknown senders throw.
  ingest_result ingest(process_id from, const checking_payload& msg);

  const constraint_spec& spec() const noexcept { return spec_; }
  std::uint64_t satisfied_count() const noexcept { return satisfied_count_; }
  const checker_stats& stats() const noexcept { return stats_; }

  /// Intervals dropped by head elimination, as (owner, seq) pairs.
  const std::vector<std::pair<process_id, std::uint64_t>>& eliminated() const {
    return eliminated_;
  }

  /// Checking messages still waiting for a sequence gap to fill.
  std::size_t pending_reorders() const;

private:
  struct ga_state {
    global_activity_spec spec;
    std::vector<std::deque<timed_interval>> queues; // one per member
    std::vector<bool> dirty; // head changed since last vetting sweep
    std::deque<ga_occurrence> unconsumed; // detected, not yet ordered
  };

  struct sender_state {
    std::uint64_t next_seq = 1;
    std::map<std::uint64_t, checking_payload> pending;
  };

  std::size_t member_index(const ga_state& ga, process_id pid) const;
  void deliver(process_id from, const checking_payload& msg, ingest_result& out);
  void sweep(ga_state& ga);
  void detect(ga_state& ga, ingest_result& out);
  void advance_ordering(ingest_result& out);

  constraint_spec spec_;
  std::vector<ga_state> gas_; // indexed by ga_id - 1
  std::vector<sender_state> senders_; // indexed by pid - 1
  std::uint32_t order_index_ = 1; // GA currently awaited by the ordering pass
  std::vector<vector_clock> pre_que_lo_;
  std::vector<vector_clock> pre_que_hi_;
  std::uint64_t satisfied_count_ = 0;
  std::vector<ga_occurrence> chain_; // accepted occurrences of the open pass
  checker_stats stats_;
  std::vector<std::pair<process_id, std::uint64_t>> eliminated_;
};

} // namespace actseq
