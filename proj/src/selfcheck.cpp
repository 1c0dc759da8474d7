#include "actseq/selfcheck.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace actseq {

namespace {

constexpr std::size_t no_node = std::numeric_limits<std::size_t>::max();
constexpr std::uint64_t trial_tag = 0x747269616cULL;

bool is_graph_node(const sim_record& r) {
  switch (r.kind) {
    case record_kind::up:
    case record_kind::down:
    case record_kind::recv_control:
      return true;
    default:
      return false;
  }
}

} // namespace

event_graph event_graph::build(const run_artifacts& run) {
  event_graph g;
  g.record_to_node_.assign(run.records.size(), no_node);

  std::size_t n = 0;
  for (std::size_t i = 0; i < run.records.size(); ++i) {
    if (is_graph_node(run.records[i])) {
      g.record_to_node_[i] = n++;
    }
  }
  g.nodes_ = n;
  g.blocks_ = (n + 63) / 64;
  g.reach_.assign(n * g.blocks_, 0);

  // Direct edges; records are time-ordered, so every edge points forward and
  // the record order is a topological order.
  std::vector<std::vector<std::size_t>> children(n);
  std::map<process_id, std::size_t> last_node_of;
  std::map<std::uint64_t, std::size_t> send_node_of;
  for (std::size_t i = 0; i < run.records.size(); ++i) {
    const auto& rec = run.records[i];
    switch (rec.kind) {
      case record_kind::up:
      case record_kind::down:
      case record_kind::recv_control: {
        std::size_t node = g.record_to_node_[i];
        auto it = last_node_of.find(rec.pid);
        if (it != last_node_of.end()) {
          children[it->second].push_back(node);
        }
        last_node_of[rec.pid] = node;
        if (rec.kind == record_kind::recv_control) {
          children[send_node_of.at(rec.msg_id)].push_back(node);
        }
        break;
      }
      case record_kind::send_control:
      case record_kind::send_checking:
        // The send belongs to the transition just handled on this process.
        send_node_of[rec.msg_id] = last_node_of.at(rec.pid);
        break;
      case record_kind::recv_checking:
        break; // the checker is not part of the happen-before graph
    }
  }

  // reach(v) = union over children of ({child} + reach(child)), computed in
  // reverse topological (= reverse node) order.
  for (std::size_t v = n; v-- > 0;) {
    for (std::size_t c : children[v]) {
      g.reach_[v * g.blocks_ + c / 64] |= std::uint64_t{1} << (c % 64);
      for (std::size_t b = 0; b < g.blocks_; ++b) {
        g.reach_[v * g.blocks_ + b] |= g.reach_[c * g.blocks_ + b];
      }
    }
  }
  return g;
}

std::size_t event_graph::node_of(std::size_t record_index) const {
  if (record_index >= record_to_node_.size() ||
      record_to_node_[record_index] == no_node) {
    throw std::out_of_range("event_graph: record is not a graph node");
  }
  return record_to_node_[record_index];
}

namespace {

struct oracle_interval {
  oracle_interval_ref ref;
  std::size_t lo_node = 0;
  std::size_t hi_node = 0;
};

struct oracle_state {
  const event_graph& graph;
  const constraint_spec& constraint;

  bool overlap(const oracle_interval& a, const oracle_interval& b) const {
    return graph.hb(a.lo_node, b.hi_node) && graph.hb(b.lo_node, a.hi_node);
  }
};

// All full combinations over the queues, one interval per member. The
// pointwise per-member minimum over viable combinations is itself viable
// for conjunctions of overlap constraints; it is verified here anyway, with
// a deterministic lexicographic fallback that would surface as a mismatch.
bool find_viable_minimum(const oracle_state& st,
                         const std::vector<std::vector<oracle_interval>>& queues,
                         std::vector<std::size_t>& minimum) {
  const std::size_t s = queues.size();
  for (const auto& q : queues) {
    if (q.empty()) {
      return false;
    }
  }
  auto viable_at = [&](const std::vector<std::size_t>& pick) {
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = i + 1; j < s; ++j) {
        if (!st.overlap(queues[i][pick[i]], queues[j][pick[j]])) {
          return false;
        }
      }
    }
    return true;
  };

  std::vector<std::size_t> pick(s, 0);
  std::vector<std::size_t> best(s, std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> first_viable;
  bool any = false;
  while (true) {
    if (viable_at(pick)) {
      if (!any) {
        first_viable = pick;
      }
      any = true;
      for (std::size_t i = 0; i < s; ++i) {
        best[i] = std::min(best[i], pick[i]);
      }
    }
    std::size_t i = 0;
    while (i < s && ++pick[i] == queues[i].size()) {
      pick[i] = 0;
      ++i;
    }
    if (i == s) {
      break;
    }
  }
  if (any) {
    minimum = viable_at(best) ? best : first_viable;
  }
  return any;
}

std::vector<oracle_interval_ref> prune_nodes(const event_graph& graph,
                                             const std::vector<oracle_interval>& heads,
                                             bool lo, bool keep_maximal,
                                             std::vector<std::size_t>* nodes_out) {
  std::vector<oracle_interval_ref> kept;
  for (std::size_t i = 0; i < heads.size(); ++i) {
    std::size_t me = lo ? heads[i].lo_node : heads[i].hi_node;
    bool dominated = false;
    for (std::size_t j = 0; j < heads.size() && !dominated; ++j) {
      if (i == j) {
        continue;
      }
      std::size_t other = lo ? heads[j].lo_node : heads[j].hi_node;
      dominated = keep_maximal ? graph.hb(me, other) : graph.hb(other, me);
    }
    if (!dominated) {
      kept.push_back(heads[i].ref);
      if (nodes_out) {
        nodes_out->push_back(me);
      }
    }
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

} // namespace

oracle_outcome run_tc_oracle(const run_artifacts& run,
                             const constraint_spec& constraint) {
  event_graph graph = event_graph::build(run);
  oracle_state st{graph, constraint};
  oracle_outcome out;

  // Pruned endpoint nodes per detection, for the ordering pass.
  std::vector<std::vector<std::size_t>> det_lo_nodes;
  std::vector<std::vector<std::size_t>> det_hi_nodes;

  const std::size_t m = constraint.size();
  std::vector<std::vector<std::vector<oracle_interval>>> queues(m);
  for (std::size_t k = 0; k < m; ++k) {
    queues[k].resize(constraint.activities()[k].members.size());
  }
  std::vector<std::deque<std::size_t>> unconsumed(m);

  // Per-sender FIFO reconstruction, mirroring the checker's release rule.
  std::map<process_id, std::uint64_t> expected;
  std::map<process_id, std::map<std::uint64_t, oracle_interval>> buffered;

  auto lookup_interval = [&](process_id owner, std::uint64_t seq) {
    oracle_interval iv;
    iv.ref = oracle_interval_ref{owner, seq};
    auto nodes = run.interval_nodes.at({owner, seq});
    iv.lo_node = graph.node_of(nodes.first);
    iv.hi_node = graph.node_of(nodes.second);
    return iv;
  };

  auto drain_ga = [&](std::size_t k) {
    while (true) {
      std::vector<std::size_t> minimum;
      if (!find_viable_minimum(st, queues[k], minimum)) {
        return;
      }
      std::vector<oracle_interval> heads;
      for (std::size_t t = 0; t < queues[k].size(); ++t) {
        heads.push_back(queues[k][t][minimum[t]]);
      }
      oracle_occurrence occ;
      occ.ga_id = static_cast<std::uint32_t>(k + 1);
      for (const auto& h : heads) {
        occ.intervals.push_back(h.ref);
      }
      bool conj = constraint.activities()[k].kind == ga_kind::all_of;
      std::vector<std::size_t> lo_nodes;
      std::vector<std::size_t> hi_nodes;
      occ.pruned_lo = prune_nodes(graph, heads, /*lo=*/true,
                                  /*keep_maximal=*/conj, &lo_nodes);
      occ.pruned_hi = prune_nodes(graph, heads, /*lo=*/false,
                                  /*keep_maximal=*/!conj, &hi_nodes);
      unconsumed[k].push_back(out.detections.size());
      out.detections.push_back(std::move(occ));
      det_lo_nodes.push_back(std::move(lo_nodes));
      det_hi_nodes.push_back(std::move(hi_nodes));
      for (std::size_t t = 0; t < queues[k].size(); ++t) {
        queues[k][t].erase(queues[k][t].begin() +
                           static_cast<std::ptrdiff_t>(minimum[t]));
      }
    }
  };

  std::size_t order_index = 0; // 0-based GA awaited by the ordering pass
  std::vector<std::size_t> pre_hi_nodes;
  std::vector<std::size_t> chain;
  auto advance_ordering = [&] {
    while (true) {
      if (unconsumed[order_index].empty()) {
        return;
      }
      std::size_t det = unconsumed[order_index].front();
      unconsumed[order_index].pop_front();
      bool ordered = true;
      for (std::size_t pre : pre_hi_nodes) {
        for (std::size_t cur : det_lo_nodes[det]) {
          if (pre != cur && !graph.hb(pre, cur)) {
            ordered = false;
            break;
          }
        }
        if (!ordered) {
          break;
        }
      }
      if (!ordered) {
        continue;
      }
      pre_hi_nodes = det_hi_nodes[det];
      chain.push_back(det);
      if (order_index + 1 < m) {
        ++order_index;
        continue;
      }
      ++out.satisfied;
      out.chains.push_back(chain);
      chain.clear();
      order_index = 0;
      pre_hi_nodes.clear();
    }
  };

  for (const auto& rec : run.records) {
    if (rec.kind != record_kind::recv_checking) {
      continue;
    }
    const auto& payload = run.trace.at(rec.msg_id - 1).checking();
    process_id owner = rec.peer;
    auto& next = expected.try_emplace(owner, 1).first->second;
    auto& buf = buffered[owner];
    buf.emplace(payload.seq, lookup_interval(owner, payload.seq));
    while (!buf.empty() && buf.begin()->first == next) {
      oracle_interval iv = buf.begin()->second;
      buf.erase(buf.begin());
      ++next;
      const auto& ga = constraint.activity_of(owner);
      std::size_t k = ga.ga_id - 1;
      const auto& members = ga.members;
      std::size_t t = static_cast<std::size_t>(
          std::lower_bound(members.begin(), members.end(), owner) - members.begin());
      queues[k][t].push_back(iv);
      drain_ga(k);
    }
    advance_ordering();
  }
  return out;
}

namespace {

oracle_interval_ref ref_of_clock(const ga_occurrence& occ, const vector_clock& clock,
                                 bool lo, bool& found) {
  for (const auto& iv : occ.intervals) {
    if ((lo ? iv.lo : iv.hi) == clock) {
      found = true;
      return oracle_interval_ref{iv.owner, iv.seq};
    }
  }
  found = false;
  return {};
}

oracle_occurrence to_oracle_form(const ga_occurrence& occ, bool& ok) {
  oracle_occurrence out;
  out.ga_id = occ.ga_id;
  ok = true;
  for (const auto& iv : occ.intervals) {
    out.intervals.push_back(oracle_interval_ref{iv.owner, iv.seq});
  }
  for (const auto& clock : occ.que_lo) {
    bool found = false;
    out.pruned_lo.push_back(ref_of_clock(occ, clock, true, found));
    ok = ok && found;
  }
  for (const auto& clock : occ.que_hi) {
    bool found = false;
    out.pruned_hi.push_back(ref_of_clock(occ, clock, false, found));
    ok = ok && found;
  }
  std::sort(out.pruned_lo.begin(), out.pruned_lo.end());
  std::sort(out.pruned_hi.begin(), out.pruned_hi.end());
  return out;
}

std::string describe(const oracle_occurrence& occ) {
  std::string s = "ga" + std::to_string(occ.ga_id) + "{";
  for (const auto& r : occ.intervals) {
    s += "P" + std::to_string(r.owner) + "#" + std::to_string(r.seq) + " ";
  }
  s += "}";
  return s;
}

bool same_occurrence(const oracle_occurrence& a, const oracle_occurrence& b) {
  return a.ga_id == b.ga_id && a.intervals == b.intervals &&
         a.pruned_lo == b.pruned_lo && a.pruned_hi == b.pruned_hi;
}

} // namespace

equivalence_report compare_with_oracle(const run_artifacts& run,
                                       const constraint_spec& constraint) {
  equivalence_report report;
  auto fail = [&](std::string what) {
    report.ok = false;
    report.mismatches.push_back(std::move(what));
  };

  oracle_outcome oracle = run_tc_oracle(run, constraint);

  // Detection sequences must match one for one.
  if (oracle.detections.size() != run.detections.size()) {
    fail("detection count: checker " + std::to_string(run.detections.size()) +
         ", oracle " + std::to_string(oracle.detections.size()));
  } else {
    for (std::size_t i = 0; i < oracle.detections.size(); ++i) {
      bool mapped = false;
      auto mine = to_oracle_form(run.detections[i].occurrence, mapped);
      if (!mapped) {
        fail("detection " + std::to_string(i) + ": pruned clock not among heads");
      } else if (!same_occurrence(mine, oracle.detections[i])) {
        fail("detection " + std::to_string(i) + ": checker " + describe(mine) +
             " vs oracle " + describe(oracle.detections[i]));
      }
    }
  }

  // No eliminated interval may participate in any oracle detection.
  std::set<oracle_interval_ref> used;
  for (const auto& det : oracle.detections) {
    used.insert(det.intervals.begin(), det.intervals.end());
  }
  for (const auto& [owner, seq] : run.eliminated) {
    if (used.count(oracle_interval_ref{owner, seq})) {
      fail("eliminated interval P" + std::to_string(owner) + "#" +
           std::to_string(seq) + " was accepted by the oracle");
    }
  }

  // Ordering results must match exactly.
  if (oracle.satisfied != run.satisfactions.size()) {
    fail("satisfaction count: checker " + std::to_string(run.satisfactions.size()) +
         ", oracle " + std::to_string(oracle.satisfied));
  } else {
    for (std::size_t i = 0; i < run.satisfactions.size(); ++i) {
      const auto& chain = run.satisfactions[i].event.chain;
      const auto& oracle_chain = oracle.chains[i];
      if (chain.size() != oracle_chain.size()) {
        fail("satisfaction " + std::to_string(i) + ": chain length differs");
        continue;
      }
      for (std::size_t k = 0; k < chain.size(); ++k) {
        bool mapped = false;
        auto mine = to_oracle_form(chain[k], mapped);
        if (!mapped ||
            !same_occurrence(mine, oracle.detections[oracle_chain[k]])) {
          fail("satisfaction " + std::to_string(i) + ": element " +
               std::to_string(k) + " differs");
        }
      }
    }
  }

  // Clock comparison must agree with graph reachability on transitions.
  event_graph graph = event_graph::build(run);
  std::vector<std::size_t> transitions;
  for (std::size_t i = 0; i < run.records.size(); ++i) {
    if (run.records[i].kind == record_kind::up ||
        run.records[i].kind == record_kind::down) {
      transitions.push_back(i);
    }
  }
  for (std::size_t a : transitions) {
    for (std::size_t b : transitions) {
      if (a == b) {
        continue;
      }
      bool by_clock =
          happened_before(run.records[a].clock, run.records[b].clock);
      bool by_graph = graph.hb(graph.node_of(a), graph.node_of(b));
      if (by_clock != by_graph) {
        fail("clock/reachability disagreement between records " +
             std::to_string(a) + " and " + std::to_string(b));
      }
    }
  }
  return report;
}

micro_suite_result run_micro_suite(const micro_trial_config& config) {
  micro_suite_result out;
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    auto rng = rng_stream::derive(config.seed, trial_tag, trial);
    std::size_t n =
        2 + static_cast<std::size_t>(rng.uniform01() *
                                     static_cast<double>(config.max_processes - 1));
    n = std::min(n, config.max_processes);
    bool split = n >= 2 && rng.uniform01() < 0.6;

    std::vector<global_activity_spec> activities;
    if (split) {
      auto cut = static_cast<process_id>(1 + rng.uniform01() * (n - 1));
      global_activity_spec ga1, ga2;
      ga1.kind = rng.uniform01() < 0.5 ? ga_kind::all_of : ga_kind::any_of;
      ga2.kind = rng.uniform01() < 0.5 ? ga_kind::all_of : ga_kind::any_of;
      for (process_id pid = 1; pid <= n; ++pid) {
        (pid <= cut ? ga1 : ga2).members.push_back(pid);
      }
      activities = {ga1, ga2};
    } else {
      global_activity_spec ga;
      ga.kind = rng.uniform01() < 0.5 ? ga_kind::all_of : ga_kind::any_of;
      for (process_id pid = 1; pid <= n; ++pid) {
        ga.members.push_back(pid);
      }
      activities = {ga};
    }
    constraint_spec constraint(std::move(activities));

    std::vector<transition> transitions;
    for (process_id pid = 1; pid <= n; ++pid) {
      std::size_t count = 1 + static_cast<std::size_t>(
                                  rng.uniform01() *
                                  static_cast<double>(config.max_intervals));
      count = std::min(count, config.max_intervals);
      std::vector<double> times;
      for (std::size_t i = 0; i < 2 * count; ++i) {
        times.push_back(rng.uniform01() * 100.0);
      }
      std::sort(times.begin(), times.end());
      for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        if (times[i + 1] <= times[i]) {
          times[i + 1] = times[i] + 1e-9;
        }
      }
      for (std::size_t i = 0; i < count; ++i) {
        transitions.push_back(transition{times[2 * i], pid, true});
        transitions.push_back(transition{times[2 * i + 1], pid, false});
      }
    }
    std::stable_sort(transitions.begin(), transitions.end(),
                     [](const transition& a, const transition& b) {
                       return a.time < b.time;
                     });

    double means[] = {0.05, 2.0, 20.0};
    delay_model model{delay_kind::exponential,
                      means[static_cast<std::size_t>(rng.uniform01() * 3) % 3]};
    std::uint64_t run_seed = mix_seed(config.seed, trial_tag, trial, 17);

    run_artifacts run =
        simulate_transitions(constraint, transitions, model, run_seed, 1e9);
    auto report = compare_with_oracle(run, constraint);
    ++out.trials;
    if (!report.ok) {
      ++out.failures;
      if (out.details.size() < 10) {
        for (const auto& m : report.mismatches) {
          out.details.push_back("trial " + std::to_string(trial) + ": " + m);
          if (out.details.size() >= 10) {
            break;
          }
        }
      }
    }
  }
  return out;
}

} // namespace actseq
