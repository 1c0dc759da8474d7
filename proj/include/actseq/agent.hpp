#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "actseq/activity.hpp"
#include "actseq/vclock.hpp"

namespace actseq {

/// Carries the sender's clock to other non-checker processes; its only
/// purpose is establishing happen-before edges.
struct control_payload {
  vector_clock clock;
};

/// Reports one completed local-activity interval to the checker.
struct checking_payload {
  std::uint32_t ga_id = 0;
  std::uint64_t seq = 0;
  vector_clock lo;
  vector_clock hi;
  double phys_lo = 0.0;
  double phys_hi = 0.0;
};

struct message {
  process_id from = 0;
  process_id to = 0; // checker_process for checking messages
  double send_time = 0.0;
  std::variant<control_payload, checking_payload> body;

  bool is_control() const { return std::holds_alternative<control_payload>(body); }
  const control_payload& control() const { return std::get<control_payload>(body); }
  const checking_payload& checking() const { return std::get<checking_payload>(body); }
};

struct protocol_error : std::logic_error {
  using std::logic_error::logic_error;
};

/// A non-checker process. Reacts to local predicate transitions, maintains
/// its vector clock, and emits control and checking messages.
///
/// On an up transition the agent bumps its own clock entry and sends a
/// control message to every other member of its global activity; while the
/// message-activity flag is armed it also records the new clock as the
/// current interval beginning. On a down transition it bumps the clock
/// again, sends a control message to every other non-checker process in the
/// system, and, if the flag is armed, reports [recorded beginning, new
/// clock] to the checker and clears the flag. Receiving a control message
/// merges clocks and re-arms the flag.
///
/// The recorded beginning persists across reports: an up that runs with a
/// cleared flag leaves it in place, so a report triggered after the flag is
/// re-armed carries the older beginning. Such a beginning is causally
/// interchangeable with the unrecorded one (no message activity separated
/// them), and interval pruning discards it whenever a newer concurrent
/// beginning is available.
///
/// Each agent is a single logical actor: only its own handlers mutate its
/// state, and the simulator invokes them sequentially.
class agent {
public:
  agent(process_id pid, global_activity_spec ga, std::size_t process_count);

  std::vector<message> on_up(double now);
  std::vector<message> on_down(double now);
  void on_control(const message& msg);

  process_id pid() const noexcept { return pid_; }
  const vector_clock& clock() const noexcept { return clock_; }
  bool msg_activity_flag() const noexcept { return flag_msg_act_; }
  bool inside_activity() const noexcept { return inside_; }
  /// True when the most recent up transition recorded a fresh beginning.
  bool recorded_at_up() const noexcept { return recorded_at_up_; }

private:
  process_id pid_;
  global_activity_spec ga_;
  std::size_t process_count_;
  vector_clock clock_;
  bool inside_ = false;
  bool flag_msg_act_ = true;
  bool recorded_at_up_ = false;
  std::optional<vector_clock> cur_lo_;
  double phys_lo_pending_ = 0.0;
  std::uint64_t next_seq_ = 1;
};

} // namespace actseq
