#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "humanoid/gait/body.hpp"

namespace humanoid::hal {

struct PulseCommand {
  int channel = 0;
  double pulse = 0.0;      // µs as commanded
  double effective = 0.0;  // µs as seen by the servo
  double issued_at = 0.0;  // simulated seconds
};

struct JitterMode {
  enum class Kind { HardwareTimed, SoftwareTimed };
  Kind kind = Kind::HardwareTimed;
  double sigma_us = 0.0;

  static JitterMode hardware() { return {}; }
  static JitterMode software(double sigma_us = 15.0) { return {Kind::SoftwareTimed, sigma_us}; }
};

struct ServoState {
  int channel = 0;
  std::string joint;
  double commanded_angle = 0.0;
  double actual_angle = 0.0;
  double last_pulse = 0.0;  // last commanded pulse, µs
};

struct BusSnapshot {
  double time = 0.0;
  std::vector<ServoState> servos;  // ordered by channel
};

struct TraceRow {
  double time = 0.0;
  int channel = 0;
  double pulse_commanded = 0.0;
  double pulse_effective = 0.0;
  double actual_angle = 0.0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

/// What the gait executor drives. Implementations serialize their own state.
class ServoBus {
 public:
  virtual ~ServoBus() = default;

  /// Throws UnknownChannel or PulseOutOfRange.
  virtual PulseCommand set_pulse(int channel, double pulse_us) = 0;
  /// Advances simulated time by dt seconds (dt > 0).
  virtual void tick(double dt) = 0;
  virtual double now() const = 0;
  virtual BusSnapshot snapshot() const = 0;
};

/// Slew-limited first-order servo plant with a pulse trace.
class SimulatedServoBus final : public ServoBus {
 public:
  explicit SimulatedServoBus(gait::RobotBodyConfig body, JitterMode jitter = JitterMode::hardware(),
                             std::uint64_t seed = 0);

  PulseCommand set_pulse(int channel, double pulse_us) override;
  void tick(double dt) override;
  double now() const override;
  BusSnapshot snapshot() const override;

  std::vector<TraceRow> trace() const;
  /// Trace rows sorted by (time, channel), CSV with a header. Returns the row count.
  std::size_t export_trace(const std::filesystem::path& path) const;

  const gait::RobotBodyConfig& body() const noexcept { return body_; }
  const JitterMode& jitter() const noexcept { return jitter_; }

 private:
  struct Channel {
    const gait::ServoSpec* spec;
    ServoState state;
  };
  Channel& channel_locked(int channel);

  gait::RobotBodyConfig body_;
  JitterMode jitter_;
  mutable std::mutex mutex_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_;
  std::vector<Channel> channels_;
  std::vector<TraceRow> trace_;
  double now_ = 0.0;
};

/// CSV helpers shared with the tests and tools.
inline constexpr std::string_view kTraceHeader =
    "time,channel,pulse_commanded,pulse_effective,actual_angle";
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

class BusArbiter;

/// Exclusive right to drive the bus. Released on destruction.
class BusLease {
 public:
  BusLease(BusLease&& other) noexcept : arbiter_(std::exchange(other.arbiter_, nullptr)) {}
  BusLease& operator=(BusLease&& other) noexcept;
  BusLease(const BusLease&) = delete;
  BusLease& operator=(const BusLease&) = delete;
  ~BusLease();

 private:
  friend class BusArbiter;
  explicit BusLease(BusArbiter* arbiter) : arbiter_(arbiter) {}
  BusArbiter* arbiter_;
};

/// Hands out at most one BusLease at a time.
class BusArbiter {
 public:
  std::optional<BusLease> try_acquire(std::string owner);
  std::optional<std::string> owner() const;
  /// Highest number of simultaneous holders ever observed (should stay ≤ 1).
  int peak_holders() const noexcept { return peak_.load(); }

 private:
  friend class BusLease;
  void release();

  mutable std::mutex mutex_;
  std::optional<std::string> owner_;
  std::atomic<int> holders_{0};
  std::atomic<int> peak_{0};
};

}  // namespace humanoid::hal
