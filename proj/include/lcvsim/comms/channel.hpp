#pragma once

#include <cstdint>
#include <map>
#include <queue>
#include <utility>
#include <vector>

#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/kv_file.hpp"
#include "lcvsim/util/rng.hpp"

namespace lcvsim::comms {

struct ChannelParams {
  double latency = 0.0;  // fixed propagation + processing delay [s]
  double jitter = 0.0;   // additional uniform delay bound [s]
  double loss = 0.0;     // independent drop probability per message

  void validate() const {
    if (latency < 0.0 || jitter < 0.0) {
      throw ConfigError("channel: latency and jitter must be non-negative");
    }
    if (!(loss >= 0.0 && loss < 1.0)) {
      throw ConfigError("channel: loss probability must lie in [0, 1)");
    }
  }

  static ChannelParams from_section(const KvSection& kv) {
    ChannelParams p;
    p.latency = kv.get_double("latency", p.latency);
    p.jitter = kv.get_double("jitter", p.jitter);
    p.loss = kv.get_double("loss", p.loss);
    p.validate();
    return p;
  }
};

/// Deterministic impaired link: every submitted message is independently
/// dropped with the loss probability; survivors arrive after the fixed
/// latency plus a uniform jitter draw. Deliveries to the same sender's
/// stream never reorder (later submissions are clamped to arrive no earlier
/// than their predecessors). Identical seeds and submissions reproduce the
/// exact delivery schedule.
template <typename Payload>
class Channel {
 public:
  struct Delivery {
    Payload payload;
    double delivery_time = 0.0;
    std::uint32_t sender = 0;
  };

  Channel(const ChannelParams& params, std::uint64_t seed)
      : params_(params), rng_(seed) {
    params_.validate();
  }

  void submit(Payload payload, double send_time, std::uint32_t sender = 0) {
    const bool dropped = params_.loss > 0.0 && rng_.bernoulli(params_.loss);
    double delivery = send_time + params_.latency;
    if (params_.jitter > 0.0) delivery += rng_.uniform(0.0, params_.jitter);
    if (dropped) return;

    auto& floor = sender_floor_[sender];
    if (floor.valid && delivery < floor.time) delivery = floor.time;
    floor = {delivery, true};
    pending_.push(Pending{delivery, next_sequence_++, sender, std::move(payload)});
  }

  /// Releases every message whose arrival time has passed, in arrival order
  /// (ties resolve in submission order).
  std::vector<Delivery> poll(double now) {
    if (has_polled_ && now < last_poll_) {
      throw InputDomainError("channel: poll times must be non-decreasing");
    }
    last_poll_ = now;
    has_polled_ = true;

    std::vector<Delivery> out;
    while (!pending_.empty() && pending_.top().time <= now) {
      const Pending& top = pending_.top();
      out.push_back(Delivery{top.payload, top.time, top.sender});
      pending_.pop();
    }
    return out;
  }

  std::size_t in_flight() const { return pending_.size(); }

 private:
  struct Pending {
    double time;
    std::uint64_t sequence;
    std::uint32_t sender;
    Payload payload;

    bool operator>(const Pending& other) const {
      if (time != other.time) return time > other.time;
      return sequence > other.sequence;
    }
  };

  struct Floor {
    double time = 0.0;
    bool valid = false;
  };

  ChannelParams params_;
  Rng rng_;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> pending_;
  std::map<std::uint32_t, Floor> sender_floor_;
  std::uint64_t next_sequence_ = 0;
  double last_poll_ = 0.0;
  bool has_polled_ = false;
};

}  // namespace lcvsim::comms
