#include "humanoid/hal/servo_bus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "humanoid/error.hpp"
#include "humanoid/gait/pwm.hpp"

namespace humanoid::hal {
namespace {

void append_number(std::string& out, double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

double parse_double(std::string_view field, const std::filesystem::path& path) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(Errc::CorruptFile, path.string() + ": bad number '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

SimulatedServoBus::SimulatedServoBus(gait::RobotBodyConfig body, JitterMode jitter,
                                     std::uint64_t seed)
    : body_(std::move(body)), jitter_(jitter), rng_(seed), noise_(0.0, 1.0) {
  gait::validate(body_);
  if (jitter_.sigma_us < 0.0) throw Error(Errc::PreconditionViolation, "jitter sigma must be >= 0");
  for (const auto& spec : body_.servos) {
    const double mid = spec.angle_range / 2.0;
    channels_.push_back({&spec, {spec.channel, spec.id, mid, mid, gait::angle_to_pulse(mid, spec)}});
  }
  std::sort(channels_.begin(), channels_.end(),
            [](const Channel& a, const Channel& b) { return a.state.channel < b.state.channel; });
}

SimulatedServoBus::Channel& SimulatedServoBus::channel_locked(int channel) {
  for (auto& c : channels_) {
    if (c.state.channel == channel) return c;
  }
  throw Error(Errc::UnknownChannel, "no servo on channel " + std::to_string(channel));
}

PulseCommand SimulatedServoBus::set_pulse(int channel, double pulse_us) {
  std::lock_guard lock(mutex_);
  auto& c = channel_locked(channel);
  const auto& spec = *c.spec;
  if (!(pulse_us >= spec.min_pulse && pulse_us <= spec.max_pulse)) {
    throw Error(Errc::PulseOutOfRange, spec.id + ": " + std::to_string(pulse_us) + " µs");
  }
  double effective = pulse_us;
  if (jitter_.kind == JitterMode::Kind::SoftwareTimed && jitter_.sigma_us > 0.0) {
    effective = std::clamp(pulse_us + jitter_.sigma_us * noise_(rng_), spec.min_pulse, spec.max_pulse);
  }
  // The servo positions itself from the pulse it actually receives.
  c.state.commanded_angle = gait::pulse_to_angle(effective, spec);
  c.state.last_pulse = pulse_us;
  trace_.push_back({now_, channel, pulse_us, effective, c.state.actual_angle});
  return {channel, pulse_us, effective, now_};
}

void SimulatedServoBus::tick(double dt) {
  if (!(dt > 0.0)) throw Error(Errc::PreconditionViolation, "tick needs dt > 0");
  std::lock_guard lock(mutex_);
  for (auto& c : channels_) {
    const double step = c.spec->max_slew * dt;
    const double error = c.state.commanded_angle - c.state.actual_angle;
    c.state.actual_angle = std::abs(error) <= step ? c.state.commanded_angle
                                                   : c.state.actual_angle + std::copysign(step, error);
  }
  now_ += dt;
}

double SimulatedServoBus::now() const {
  std::lock_guard lock(mutex_);
  return now_;
}

BusSnapshot SimulatedServoBus::snapshot() const {
  std::lock_guard lock(mutex_);
  BusSnapshot snap{now_, {}};
  for (const auto& c : channels_) snap.servos.push_back(c.state);
  return snap;
}

std::vector<TraceRow> SimulatedServoBus::trace() const {
  std::lock_guard lock(mutex_);
  return trace_;
}

std::size_t SimulatedServoBus::export_trace(const std::filesystem::path& path) const {
  auto rows = trace();
  std::stable_sort(rows.begin(), rows.end(), [](const TraceRow& a, const TraceRow& b) {
    return a.time < b.time || (a.time == b.time && a.channel < b.channel);
  });
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& r : rows) {
    append_number(out, r.time);
    out += ',';
    out += std::to_string(r.channel);
    out += ',';
    append_number(out, r.pulse_commanded);
    out += ',';
    append_number(out, r.pulse_effective);
    out += ',';
    append_number(out, r.actual_angle);
    out += '\n';
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::IoFailure, "cannot write trace " + path.string());
  file << out;
  if (!file) throw Error(Errc::IoFailure, "write failed for " + path.string());
  return rows.size();
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open trace " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw Error(Errc::CorruptFile, path.string() + ": missing trace header");
  }
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1)) {
      fields.push_back(rest.substr(0, pos));
    }
    fields.push_back(rest);
    if (fields.size() != 5) throw Error(Errc::CorruptFile, path.string() + ": bad row '" + line + "'");
    rows.push_back({parse_double(fields[0], path), static_cast<int>(parse_double(fields[1], path)),
                    parse_double(fields[2], path), parse_double(fields[3], path),
                    parse_double(fields[4], path)});
  }
  return rows;
}

BusLease& BusLease::operator=(BusLease&& other) noexcept {
  if (this != &other) {
    if (arbiter_) arbiter_->release();
    arbiter_ = std::exchange(other.arbiter_, nullptr);
  }
  return *this;
}

BusLease::~BusLease() {
  if (arbiter_) arbiter_->release();
}

std::optional<BusLease> BusArbiter::try_acquire(std::string owner) {
  std::lock_guard lock(mutex_);
  if (owner_) return std::nullopt;
  owner_ = std::move(owner);
  const int now_holding = ++holders_;
  int peak = peak_.load();
  while (now_holding > peak && !peak_.compare_exchange_weak(peak, now_holding)) {
  }
  return BusLease(this);
}

std::optional<std::string> BusArbiter::owner() const {
  std::lock_guard lock(mutex_);
  return owner_;
}

void BusArbiter::release() {
  std::lock_guard lock(mutex_);
  owner_.reset();
  --holders_;
}

}  // namespace humanoid::hal
