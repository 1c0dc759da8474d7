#include "actseq/agent.hpp"

namespace actseq {

agent::agent(process_id pid, global_activity_spec ga, std::size_t process_count)
    : pid_(pid),
      ga_(std::move(ga)),
      process_count_(process_count),
      clock_(vector_clock::zeros(process_count)) {
  if (pid_ == checker_process || pid_ > process_count_) {
    throw std::invalid_argument("agent: process id out of range");
  }
  if (!ga_.contains(pid_)) {
    throw std::invalid_argument("agent: process is not a member of its activity");
  }
}

std::vector<message> agent::on_up(double now) {
  if (inside_) {
    throw protocol_error("agent: up transition while already inside an activity");
  }
  inside_ = true;
  clock_ = clock_.incremented(pid_);

  std::vector<message> out;
  for (process_id member : ga_.members) {
    if (member == pid_) {
      continue;
    }
    out.push_back(message{pid_, member, now, control_payload{clock_}});
  }
  recorded_at_up_ = flag_msg_act_;
  if (flag_msg_act_) {
    cur_lo_ = clock_;
    phys_lo_pending_ = now;
  }
  // With the flag cleared the beginning is not re-recorded: cur_lo_ keeps
  // the last recorded value, and a report triggered later covers the span
  // since then. Without new causal information the older beginning relates
  // to every other event exactly as a fresh one would.
  return out;
}

std::vector<message> agent::on_down(double now) {
  if (!inside_) {
    throw protocol_error("agent: down transition without a preceding up");
  }
  inside_ = false;
  clock_ = clock_.incremented(pid_);

  std::vector<message> out;
  for (process_id other = 1; other <= process_count_; ++other) {
    if (other == pid_) {
      continue;
    }
    out.push_back(message{pid_, other, now, control_payload{clock_}});
  }
  // Reports go out only while the flag is armed; a down with no new causal
  // information since the last report is redundant and stays silent.
  if (flag_msg_act_ && cur_lo_) {
    checking_payload report;
    report.ga_id = ga_.ga_id;
    report.seq = next_seq_++;
    report.lo = *cur_lo_;
    report.hi = clock_;
    report.phys_lo = phys_lo_pending_;
    report.phys_hi = now;
    out.push_back(message{pid_, checker_process, now, std::move(report)});
    flag_msg_act_ = false;
  }
  return out;
}

void agent::on_control(const message& msg) {
  if (!msg.is_control()) {
    throw protocol_error("agent: checking message routed to a non-checker process");
  }
  clock_ = merge(clock_, msg.control().clock);
  flag_msg_act_ = true;
}

} // namespace actseq
