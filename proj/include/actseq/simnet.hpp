#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <variant>
#include <vector>

#include "actseq/agent.hpp"

namespace actseq {

/// splitmix64 over the concatenated words; used to derive independent
/// sub-streams from one master seed so that adding a parameter never
/// perturbs unrelated draws.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t a = 0,
                       std::uint64_t b = 0);

/// Deterministic random stream. Uniform and exponential draws are computed
/// from raw engine words so values are stable across standard libraries.
class rng_stream {
public:
  explicit rng_stream(std::uint64_t seed) : engine_(seed) {}

  static rng_stream derive(std::uint64_t seed, std::uint64_t tag,
                           std::uint64_t a = 0, std::uint64_t b = 0) {
    return rng_stream(mix_seed(seed, tag, a, b));
  }

  /// Uniform draw from [0, 1).
  double uniform01();

  /// Exponential draw with the given mean; always strictly positive.
  double exponential(double mean);

private:
  std::mt19937_64 engine_;
};

enum class delay_kind { constant, exponential };

struct delay_model {
  delay_kind kind = delay_kind::exponential;
  double mean = 0.06;

  /// Throws unless mean > 0.
  void validate() const;
  double sample(rng_stream& rng) const;
};

struct transition_payload {
  process_id pid = 0;
  bool up = false;
};

struct delivery_payload {
  message msg;
  std::uint64_t msg_id = 0;
};

using event_payload = std::variant<transition_payload, delivery_payload>;

struct sim_event {
  double time = 0.0;
  std::uint64_t tiebreak_seq = 0; // assigned at scheduling time
  process_id tiebreak_pid = 0;
  event_payload payload;
};

/// Discrete-event queue over virtual seconds. Events execute in
/// (time, tiebreak) order, which is a deterministic total order for a fixed
/// schedule. Events beyond the lifetime horizon are dropped and counted.
class event_queue {
public:
  explicit event_queue(double lifetime) : lifetime_(lifetime) {}

  /// Returns false when the event falls beyond the lifetime and is dropped.
  bool schedule(double time, process_id pid, event_payload payload);

  std::optional<sim_event> pop();

  bool empty() const { return heap_.empty(); }
  double lifetime() const { return lifetime_; }
  std::uint64_t dropped() const { return dropped_; }
  double now() const { return now_; }

private:
  struct later {
    bool operator()(const sim_event& a, const sim_event& b) const {
      if (a.time != b.time) {
        return a.time > b.time;
      }
      return a.tiebreak_seq > b.tiebreak_seq;
    }
  };

  double lifetime_;
  double now_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t dropped_ = 0;
  std::priority_queue<sim_event, std::vector<sim_event>, later> heap_;
};

/// Message transport with per-channel delay sub-streams. Channels are not
/// FIFO: every message draws its own delay, so two messages on one channel
/// may cross.
class channel_delays {
public:
  channel_delays(std::uint64_t master_seed, delay_model model);

  /// Delivery time for a message sent now from `from` to `to`;
  /// strictly greater than `now`.
  double delivery_time(process_id from, process_id to, double now);

  const delay_model& model() const { return model_; }

private:
  std::uint64_t master_seed_;
  delay_model model_;
  std::map<std::pair<process_id, process_id>, rng_stream> streams_;
};

} // namespace actseq
