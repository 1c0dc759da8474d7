#include "actseq/checker.hpp"

#include <algorithm>
#include <stdexcept>

namespace actseq {

namespace {

// Keeps the elements no other element precedes (maximal=true) or follows
// (maximal=false). Inputs stem from distinct events, so ties cannot occur
// and the result is an antichain.
std::vector<vector_clock> prune(const std::vector<vector_clock>& clocks,
                                bool keep_maximal) {
  std::vector<vector_clock> out;
  for (std::size_t i = 0; i < clocks.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < clocks.size() && !dominated; ++j) {
      if (i == j) {
        continue;
      }
      dominated = keep_maximal ? happened_before(clocks[i], clocks[j])
                               : happened_before(clocks[j], clocks[i]);
    }
    if (!dominated) {
      out.push_back(clocks[i]);
    }
  }
  return out;
}

} // namespace

ga_occurrence compute_interval(std::uint32_t ga_id,
                               std::vector<timed_interval> heads, ga_kind kind) {
  if (heads.empty()) {
    throw std::invalid_argument("compute_interval: no contributing intervals");
  }
  std::vector<vector_clock> los;
  std::vector<vector_clock> his;
  los.reserve(heads.size());
  his.reserve(heads.size());
  for (const auto& iv : heads) {
    los.push_back(iv.lo);
    his.push_back(iv.hi);
  }
  ga_occurrence occ;
  occ.ga_id = ga_id;
  if (kind == ga_kind::all_of) {
    occ.que_lo = prune(los, /*keep_maximal=*/true);
    occ.que_hi = prune(his, /*keep_maximal=*/false);
  } else {
    occ.que_lo = prune(los, /*keep_maximal=*/false);
    occ.que_hi = prune(his, /*keep_maximal=*/true);
  }
  occ.intervals = std::move(heads);
  return occ;
}

checker::checker(constraint_spec spec) : spec_(std::move(spec)) {
  gas_.reserve(spec_.size());
  for (const auto& ga : spec_.activities()) {
    ga_state state;
    state.spec = ga;
    state.queues.resize(ga.members.size());
    state.dirty.assign(ga.members.size(), false);
    gas_.push_back(std::move(state));
  }
  senders_.resize(spec_.process_count());
}

std::size_t checker::member_index(const ga_state& ga, process_id pid) const {
  auto it = std::lower_bound(ga.spec.members.begin(), ga.spec.members.end(), pid);
  if (it == ga.spec.members.end() || *it != pid) {
    throw std::invalid_argument("checker: process " + std::to_string(pid) +
                                " is not a member of activity " +
                                std::to_string(ga.spec.ga_id));
  }
  return static_cast<std::size_t>(it - ga.spec.members.begin());
}

checker::ingest_result checker::ingest(process_id from, const checking_payload& msg) {
  if (from == checker_process || from > spec_.process_count()) {
    throw std::invalid_argument("checker: unknown sender " + std::to_string(from));
  }
  if (msg.ga_id == 0 || msg.ga_id > gas_.size()) {
    throw std::invalid_argument("checker: unknown activity id " +
                                std::to_string(msg.ga_id));
  }
  member_index(gas_[msg.ga_id - 1], from); // reject non-members up front
  ingest_result out;
  auto& sender = senders_[from - 1];
  if (msg.seq < sender.next_seq || sender.pending.count(msg.seq)) {
    throw std::invalid_argument("checker: duplicate sequence number " +
                                std::to_string(msg.seq) + " from process " +
                                std::to_string(from));
  }
  if (msg.seq != sender.next_seq) {
    sender.pending.emplace(msg.seq, msg);
    return out;
  }
  deliver(from, msg, out);
  ++sender.next_seq;
  while (!sender.pending.empty() &&
         sender.pending.begin()->first == sender.next_seq) {
    auto node = sender.pending.extract(sender.pending.begin());
    deliver(from, node.mapped(), out);
    ++sender.next_seq;
  }
  advance_ordering(out);
  return out;
}

void checker::deliver(process_id from, const checking_payload& msg,
                      ingest_result& out) {
  ++stats_.checking_messages;
  auto& ga = gas_[msg.ga_id - 1];
  std::size_t t = member_index(ga, from);

  timed_interval interval;
  interval.owner = from;
  interval.lo = msg.lo;
  interval.hi = msg.hi;
  interval.seq = msg.seq;
  interval.phys_lo = msg.phys_lo;
  interval.phys_hi = msg.phys_hi;

  ga.queues[t].push_back(std::move(interval));
  if (ga.queues[t].size() > 1) {
    return; // not at its queue head; earlier intervals already hold the front
  }
  ga.dirty[t] = true;
  while (true) {
    sweep(ga);
    bool full = std::all_of(ga.queues.begin(), ga.queues.end(),
                            [](const auto& q) { return !q.empty(); });
    if (!full) {
      return;
    }
    detect(ga, out);
  }
}

// Vets every dirty head against the other heads and deletes heads that can
// no longer overlap anything: if some head's beginning does not happen
// before mine's ending, every later interval on that process begins even
// later, so my head is dead. Runs to a fixed point; queues emptied here are
// re-vetted when their next interval arrives.
void checker::sweep(ga_state& ga) {
  const std::size_t s = ga.queues.size();
  while (true) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < s; ++i) {
      if (ga.dirty[i] && !ga.queues[i].empty()) {
        active.push_back(i);
      }
    }
    if (active.empty()) {
      return;
    }
    std::vector<bool> doomed(s, false);
    for (std::size_t i : active) {
      for (std::size_t j = 0; j < s; ++j) {
        if (j == i || ga.queues[j].empty()) {
          continue;
        }
        if (ga.dirty[j] && j < i) {
          continue; // pair already examined from j's side
        }
        const auto& head_i = ga.queues[i].front();
        const auto& head_j = ga.queues[j].front();
        stats_.detection_comparisons += 2;
        if (!happened_before(head_j.lo, head_i.hi)) {
          doomed[i] = true;
        }
        if (!happened_before(head_i.lo, head_j.hi)) {
          doomed[j] = true;
        }
      }
    }
    std::fill(ga.dirty.begin(), ga.dirty.end(), false);
    bool any = false;
    for (std::size_t i = 0; i < s; ++i) {
      if (!doomed[i]) {
        continue;
      }
      any = true;
      const auto& victim = ga.queues[i].front();
      eliminated_.emplace_back(victim.owner, victim.seq);
      ++stats_.eliminated_intervals;
      ga.queues[i].pop_front();
      if (!ga.queues[i].empty()) {
        ga.dirty[i] = true;
      }
    }
    if (!any) {
      return;
    }
  }
}

// All queues are nonempty and every head pair has been vetted, so the heads
// pairwise overlap: emit the occurrence and consume the heads. The new heads
// are unvetted and must go through the sweep before another detection.
void checker::detect(ga_state& ga, ingest_result& out) {
  std::vector<timed_interval> heads;
  heads.reserve(ga.queues.size());
  for (auto& q : ga.queues) {
    heads.push_back(q.front());
    q.pop_front();
  }
  for (std::size_t i = 0; i < ga.queues.size(); ++i) {
    ga.dirty[i] = !ga.queues[i].empty();
  }
  ga_occurrence occ = compute_interval(ga.spec.ga_id, std::move(heads), ga.spec.kind);
  ga.unconsumed.push_back(occ);
  out.detections.push_back(std::move(occ));
}

// Walks the constraint sequence: the oldest unconsumed occurrence of the
// awaited activity is accepted when every previously accepted ending is <=
// every current beginning, otherwise it is discarded and the next occurrence
// of the same activity is awaited. Completing the sequence emits one
// satisfaction event and restarts with a cleared predecessor.
void checker::advance_ordering(ingest_result& out) {
  while (true) {
    auto& ga = gas_[order_index_ - 1];
    if (ga.unconsumed.empty()) {
      return;
    }
    ga_occurrence cur = std::move(ga.unconsumed.front());
    ga.unconsumed.pop_front();

    bool ordered = true;
    for (const auto& pre : pre_que_hi_) {
      for (const auto& lo : cur.que_lo) {
        ++stats_.ordering_comparisons;
        if (!leq(pre, lo)) {
          ordered = false;
          break;
        }
      }
      if (!ordered) {
        break;
      }
    }
    if (!ordered) {
      ++stats_.discarded_occurrences;
      continue;
    }
    pre_que_lo_ = cur.que_lo;
    pre_que_hi_ = cur.que_hi;
    chain_.push_back(std::move(cur));
    if (order_index_ < spec_.size()) {
      ++order_index_;
      continue;
    }
    ++satisfied_count_;
    satisfaction_event event;
    event.count = satisfied_count_;
    event.chain = std::move(chain_);
    out.satisfactions.push_back(std::move(event));
    chain_.clear();
    order_index_ = 1;
    pre_que_lo_.clear();
    pre_que_hi_.clear();
  }
}

std::size_t checker::pending_reorders() const {
  std::size_t n = 0;
  for (const auto& s : senders_) {
    n += s.pending.size();
  }
  return n;
}

} // namespace actseq
