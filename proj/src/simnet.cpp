#include "actseq/simnet.hpp"

#include <cmath>
#include <stdexcept>

namespace actseq {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t a,
                       std::uint64_t b) {
  auto split = [](std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t state = seed;
  std::uint64_t out = split(state);
  state ^= tag * 0xff51afd7ed558ccdULL;
  out ^= split(state);
  state ^= a * 0xc4ceb9fe1a85ec53ULL;
  out ^= split(state);
  state ^= b + 0x9e3779b97f4a7c15ULL;
  out ^= split(state);
  return out;
}

double rng_stream::uniform01() {
  // 53 high bits -> double in [0, 1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double rng_stream::exponential(double mean) {
  double d = 0.0;
  do {
    d = -mean * std::log1p(-uniform01());
  } while (!(d > 0.0));
  return d;
}

void delay_model::validate() const {
  if (!(mean > 0.0)) {
    throw std::invalid_argument("delay model: mean must be positive");
  }
}

double delay_model::sample(rng_stream& rng) const {
  validate();
  return kind == delay_kind::constant ? mean : rng.exponential(mean);
}

bool event_queue::schedule(double time, process_id pid, event_payload payload) {
  if (time > lifetime_) {
    ++dropped_;
    return false;
  }
  heap_.push(sim_event{time, next_seq_++, pid, std::move(payload)});
  return true;
}

std::optional<sim_event> event_queue::pop() {
  if (heap_.empty()) {
    return std::nullopt;
  }
  sim_event ev = heap_.top();
  heap_.pop();
  now_ = ev.time;
  return ev;
}

channel_delays::channel_delays(std::uint64_t master_seed, delay_model model)
    : master_seed_(master_seed), model_(model) {
  model_.validate();
}

double channel_delays::delivery_time(process_id from, process_id to, double now) {
  auto key = std::make_pair(from, to);
  auto it = streams_.find(key);
  if (it == streams_.end()) {
    constexpr std::uint64_t channel_tag = 0x6368616e6e656cULL; // "channel"
    it = streams_
             .emplace(key, rng_stream::derive(master_seed_, channel_tag, from, to))
             .first;
  }
  return now + model_.sample(it->second);
}

} // namespace actseq
