#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace actseq {

/// Non-checker processes are numbered 1..n. Process id 0 is reserved for
/// the checker, which keeps no clock of its own.
using process_id = std::uint32_t;

inline constexpr process_id checker_process = 0;

/// Fixed-width vector clock: one counter per non-checker process.
///
/// Clocks are immutable values; operations return new clocks. All clocks
/// belonging to one system instance have the same width, and mixing widths
/// throws. Equality is exact entrywise equality.
class vector_clock {
public:
  /// All-zero clock for an n-process system. Throws for n == 0.
  static vector_clock zeros(std::size_t process_count);

  vector_clock() = default; // width-0 placeholder, not usable in comparisons
  vector_clock(std::initializer_list<std::uint64_t> entries);
  explicit vector_clock(std::vector<std::uint64_t> entries);

  std::size_t size() const noexcept { return entries_.size(); }

  /// Entry for process `pid` (1-based). Throws std::out_of_range.
  std::uint64_t at(process_id pid) const;

  /// Copy of this clock with entry `pid` bumped by one.
  vector_clock incremented(process_id pid) const;

  const std::vector<std::uint64_t>& entries() const noexcept { return entries_; }

  friend bool operator==(const vector_clock&, const vector_clock&) = default;

private:
  std::vector<std::uint64_t> entries_;
};

/// Componentwise maximum. Throws on width mismatch.
vector_clock merge(const vector_clock& a, const vector_clock& b);

/// Componentwise a <= b (non-strict).
bool leq(const vector_clock& a, const vector_clock& b);

/// Strict causal precedence: a <= b componentwise and a != b.
bool happened_before(const vector_clock& a, const vector_clock& b);

/// Neither clock precedes the other and they differ.
bool concurrent(const vector_clock& a, const vector_clock& b);

/// Renders as "[1,0,2]". An empty clock renders as "[]".
std::string to_string(const vector_clock& vc);

} // namespace actseq
