#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "actseq/vclock.hpp"

namespace actseq {

/// One true-period of a local predicate on a non-checker process.
///
/// `lo` and `hi` timestamp the false->true and true->false transitions.
/// `phys_lo` / `phys_hi` are simulation-time endpoints kept for the
/// ground-truth oracle; detection logic never reads them.
struct timed_interval {
  process_id owner = 0;
  vector_clock lo;
  vector_clock hi;
  std::uint64_t seq = 0;
  double phys_lo = 0.0;
  double phys_hi = 0.0;
};

/// True iff the intervals' true-periods overlap causally, i.e. each
/// beginning happens before the other ending.
bool intervals_overlap(const timed_interval& a, const timed_interval& b);

enum class ga_kind {
  all_of, // conjunction: activity holds while every member predicate holds
  any_of, // disjunction: activity spans from the first up to the last down
};

/// A global activity: a set of member processes combined with AND or OR.
struct global_activity_spec {
  std::uint32_t ga_id = 0; // position in the constraint, 1-based
  ga_kind kind = ga_kind::all_of;
  std::vector<process_id> members; // sorted, nonempty

  bool contains(process_id pid) const;
};

struct constraint_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An ordered sequence of global activities GA_1 < GA_2 < ... < GA_m whose
/// member sets partition processes 1..n.
class constraint_spec {
public:
  explicit constraint_spec(std::vector<global_activity_spec> activities);

  const std::vector<global_activity_spec>& activities() const noexcept {
    return activities_;
  }
  std::size_t size() const noexcept { return activities_.size(); }
  std::size_t process_count() const noexcept { return process_count_; }

  const global_activity_spec& activity(std::uint32_t ga_id) const;

  /// The activity a process belongs to; throws for unknown processes.
  const global_activity_spec& activity_of(process_id pid) const;

private:
  std::vector<global_activity_spec> activities_;
  std::size_t process_count_ = 0;
};

/// Parses "AND(1,2) < AND(3,4)" style text. Whitespace-insensitive.
/// Rejects empty activities, duplicated processes, and member sets that do
/// not cover 1..n.
constraint_spec parse_constraint(std::string_view text);

/// Canonical form: "AND(1,2) < OR(3,4)".
std::string render_constraint(const constraint_spec& spec);

} // namespace actseq
