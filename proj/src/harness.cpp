#include "actseq/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace actseq {

namespace {

constexpr std::uint64_t workload_tag = 0x776f726b6c6f6164ULL;
constexpr std::uint64_t phase_tag = 0x7068617365ULL;

void require_two_stage(const constraint_spec& constraint, const char* who) {
  if (constraint.size() != 2) {
    throw std::invalid_argument(std::string(who) +
                                ": the scenario orders exactly two global "
                                "activities (office, then corridor)");
  }
}

} // namespace

void scenario_params::validate() const {
  if (lifetime < 0.0 || !(mean_stay_in > 0.0) || !(mean_stay_out > 0.0) ||
      !(update_interval > 0.0) || !(mean_delay > 0.0)) {
    throw std::invalid_argument(
        "scenario: lifetime must be >= 0 and all means/intervals positive");
  }
}

bool truth_cycle::valid() const {
  return office_enter < office_exit && office_exit <= corridor_enter &&
         corridor_enter < corridor_exit;
}

workload generate_workload(const scenario_params& params,
                           const constraint_spec& constraint) {
  auto rng = rng_stream::derive(params.seed, workload_tag);
  double mean_in = params.mean_stay_in;
  double mean_out = params.mean_stay_out;
  return generate_workload(params, constraint, [rng, mean_in, mean_out](bool in) mutable {
    return rng.exponential(in ? mean_in : mean_out);
  });
}

workload generate_workload(const scenario_params& params,
                           const constraint_spec& constraint,
                           const std::function<double(bool)>& stay_sampler) {
  params.validate();
  require_two_stage(constraint, "generate_workload");

  const auto& office = constraint.activities()[0].members;
  const auto& corridor = constraint.activities()[1].members;

  workload out;
  auto emit = [&](const std::vector<process_id>& pids, double time, bool up) {
    if (time < params.lifetime) {
      for (process_id pid : pids) {
        out.transitions.push_back(transition{time, pid, up});
      }
    }
  };

  double t = 0.0;
  while (true) {
    double enter = t;
    double exit = enter + stay_sampler(true);
    double corridor_exit = exit + stay_sampler(false);
    emit(office, enter, true);
    emit(office, exit, false);
    emit(corridor, exit, true);
    emit(corridor, corridor_exit, false);
    if (corridor_exit > params.lifetime) {
      break; // truncated cycle: transitions kept, occurrence not counted
    }
    out.truth.cycles.push_back(truth_cycle{enter, exit, exit, corridor_exit});
    t = corridor_exit;
  }
  out.truth.num_phy = out.truth.cycles.size();
  return out;
}

std::vector<transition> apply_update_interval(const std::vector<transition>& truth,
                                              double update_interval,
                                              std::uint64_t seed,
                                              std::size_t process_count) {
  if (!(update_interval > 0.0)) {
    throw std::invalid_argument("apply_update_interval: period must be positive");
  }
  std::vector<double> phase(process_count + 1, 0.0);
  for (process_id pid = 1; pid <= process_count; ++pid) {
    phase[pid] = rng_stream::derive(seed, phase_tag, pid).uniform01() * update_interval;
  }

  std::vector<transition> observed = truth;
  for (auto& tr : observed) {
    if (tr.pid == 0 || tr.pid > process_count) {
      throw std::invalid_argument("apply_update_interval: process out of range");
    }
    double steps = std::ceil((tr.time - phase[tr.pid]) / update_interval);
    if (steps < 0.0) {
      steps = 0.0;
    }
    double tick = phase[tr.pid] + steps * update_interval;
    if (tick < tr.time) {
      tick += update_interval; // guard against rounding just below the goal
    }
    tr.time = tick;
  }
  // Collapsed transitions share a tick; stability keeps their true order,
  // so an up always precedes its own down.
  std::stable_sort(observed.begin(), observed.end(),
                   [](const transition& a, const transition& b) { return a.time < b.time; });
  return observed;
}

run_artifacts simulate_transitions(const constraint_spec& constraint,
                                   const std::vector<transition>& observed,
                                   delay_model model, std::uint64_t seed,
                                   double lifetime) {
  model.validate();
  const std::size_t n = constraint.process_count();

  run_artifacts run;
  run.observed = observed;
  run.result.detections_per_ga.assign(constraint.size(), 0);

  event_queue queue(lifetime);
  channel_delays channels(seed, model);
  std::vector<agent> agents;
  agents.reserve(n);
  for (process_id pid = 1; pid <= n; ++pid) {
    agents.emplace_back(pid, constraint.activity_of(pid), n);
  }
  checker chk(constraint);

  for (const auto& tr : observed) {
    queue.schedule(tr.time, tr.pid, transition_payload{tr.pid, tr.up});
  }

  std::vector<std::size_t> pending_lo(n + 1, std::numeric_limits<std::size_t>::max());
  std::uint64_t next_msg_id = 1;

  auto dispatch = [&](std::vector<message>&& msgs, double now) {
    for (auto& m : msgs) {
      std::uint64_t id = next_msg_id++;
      ++run.result.messages_sent;
      run.records.push_back(sim_record{
          now, m.is_control() ? record_kind::send_control : record_kind::send_checking,
          m.from, id, m.to, agents[m.from - 1].clock()});
      run.trace.push_back(m);
      double at = channels.delivery_time(m.from, m.to, now);
      queue.schedule(at, m.to, delivery_payload{std::move(m), id});
    }
  };

  while (auto ev = queue.pop()) {
    const double now = ev->time;
    if (auto* tp = std::get_if<transition_payload>(&ev->payload)) {
      agent& actor = agents[tp->pid - 1];
      if (tp->up) {
        auto msgs = actor.on_up(now);
        run.records.push_back(
            sim_record{now, record_kind::up, tp->pid, 0, 0, actor.clock()});
        if (actor.recorded_at_up()) {
          pending_lo[tp->pid] = run.records.size() - 1;
        }
        dispatch(std::move(msgs), now);
      } else {
        auto msgs = actor.on_down(now);
        run.records.push_back(
            sim_record{now, record_kind::down, tp->pid, 0, 0, actor.clock()});
        std::size_t down_node = run.records.size() - 1;
        for (const auto& m : msgs) {
          if (!m.is_control()) {
            run.interval_nodes[{tp->pid, m.checking().seq}] = {pending_lo[tp->pid],
                                                               down_node};
          }
        }
        dispatch(std::move(msgs), now);
      }
    } else {
      auto& dp = std::get<delivery_payload>(ev->payload);
      if (dp.msg.to == checker_process) {
        run.records.push_back(sim_record{now, record_kind::recv_checking,
                                         checker_process, dp.msg_id, dp.msg.from,
                                         vector_clock{}});
        auto res = chk.ingest(dp.msg.from, dp.msg.checking());
        for (auto& d : res.detections) {
          ++run.result.detections_per_ga[d.ga_id - 1];
          run.detections.push_back(detection_record{now, std::move(d)});
        }
        for (auto& s : res.satisfactions) {
          run.satisfactions.push_back(satisfaction_record{now, std::move(s)});
        }
      } else {
        agent& actor = agents[dp.msg.to - 1];
        actor.on_control(dp.msg);
        run.records.push_back(sim_record{now, record_kind::recv_control, dp.msg.to,
                                         dp.msg_id, dp.msg.from, actor.clock()});
      }
    }
  }

  run.eliminated = chk.eliminated();
  run.stats = chk.stats();
  run.result.num_oga = chk.satisfied_count();
  run.result.events_dropped = queue.dropped();
  return run;
}

run_artifacts run_experiment(const scenario_params& params,
                             const constraint_spec& constraint) {
  params.validate();
  require_two_stage(constraint, "run_experiment");

  workload wl = generate_workload(params, constraint);
  auto observed = apply_update_interval(wl.transitions, params.update_interval,
                                        params.seed, constraint.process_count());
  delay_model model{params.delay, params.mean_delay};
  run_artifacts run = simulate_transitions(constraint, observed, model, params.seed,
                                           params.lifetime);
  run.truth = std::move(wl.truth);
  run.result.num_phy = run.truth.num_phy;
  run.result.probability =
      run.result.num_phy == 0
          ? 0.0
          : static_cast<double>(run.result.num_oga) /
                static_cast<double>(run.result.num_phy);
  return run;
}

namespace {

// Physical time of the interval event a pruned clock denotes.
double event_time_of(const ga_occurrence& occ, const vector_clock& clock, bool lo,
                     bool& found) {
  for (const auto& iv : occ.intervals) {
    if (lo ? iv.lo == clock : iv.hi == clock) {
      found = true;
      return lo ? iv.phys_lo : iv.phys_hi;
    }
  }
  found = false;
  return 0.0;
}

} // namespace

oracle_report physical_oracle(const run_artifacts& run,
                              const constraint_spec& constraint) {
  require_two_stage(constraint, "physical_oracle");
  oracle_report report;

  std::vector<const truth_cycle*> cycles;
  for (const auto& c : run.truth.cycles) {
    if (c.valid()) {
      cycles.push_back(&c);
    }
  }
  report.num_phy = cycles.size();
  std::vector<bool> consumed(cycles.size(), false);
  std::size_t first_free = 0;

  for (std::size_t s = 0; s < run.satisfactions.size(); ++s) {
    const auto& chain = run.satisfactions[s].event.chain;
    if (chain.size() != constraint.size()) {
      report.violations.push_back("satisfaction " + std::to_string(s + 1) +
                                  ": incomplete chain");
      continue;
    }

    bool chain_ok = true;
    double corridor_evidence = 0.0;
    for (std::size_t k = 0; k + 1 < chain.size() && chain_ok; ++k) {
      double latest_hi = -std::numeric_limits<double>::infinity();
      for (const auto& clock : chain[k].que_hi) {
        bool found = false;
        double t = event_time_of(chain[k], clock, /*lo=*/false, found);
        if (!found) {
          chain_ok = false;
          break;
        }
        latest_hi = std::max(latest_hi, t);
      }
      double earliest_lo = std::numeric_limits<double>::infinity();
      for (const auto& clock : chain[k + 1].que_lo) {
        bool found = false;
        double t = event_time_of(chain[k + 1], clock, /*lo=*/true, found);
        if (!found) {
          chain_ok = false;
          break;
        }
        earliest_lo = std::min(earliest_lo, t);
      }
      if (!chain_ok || !(latest_hi < earliest_lo)) {
        report.violations.push_back(
            "satisfaction " + std::to_string(s + 1) +
            ": endpoints are not physically ordered between activities " +
            std::to_string(k + 1) + " and " + std::to_string(k + 2));
        chain_ok = false;
      }
      corridor_evidence = earliest_lo;
    }
    if (!chain_ok) {
      continue;
    }

    // Greedy injective matching: the earliest unconsumed cycle whose
    // office->corridor transition precedes the detected corridor beginning.
    bool matched = false;
    for (std::size_t c = first_free; c < cycles.size(); ++c) {
      if (consumed[c]) {
        continue;
      }
      if (cycles[c]->corridor_enter <= corridor_evidence) {
        consumed[c] = true;
        matched = true;
        ++report.matched;
        while (first_free < cycles.size() && consumed[first_free]) {
          ++first_free;
        }
        break;
      }
      break; // cycles are time-ordered: later ones start even later
    }
    if (!matched) {
      report.violations.push_back("satisfaction " + std::to_string(s + 1) +
                                  ": no physically preceding cycle available");
    }
  }

  if (run.result.num_oga > report.num_phy) {
    report.violations.push_back("num_oga exceeds num_phy");
  }
  return report;
}

} // namespace actseq
