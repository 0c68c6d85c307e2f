#include "humanoid/overseer/supervisor.hpp"

#include <algorithm>

#include "humanoid/error.hpp"

namespace humanoid::overseer {

std::string_view to_string(SegmentStatus status) {
  switch (status) {
    case SegmentStatus::Running: return "running";
    case SegmentStatus::Restarting: return "restarting";
    case SegmentStatus::Failed: return "failed";
  }
  return "unknown";
}

Supervisor::Supervisor(RestartPolicy policy) : policy_(std::move(policy)) {
  if (policy_.backoff.empty() || policy_.max_restarts < 0 || !(policy_.window > 0.0)) {
    throw Error(Errc::InvalidConfig, "restart policy needs a backoff schedule, max_restarts >= 0 and a window");
  }
}

void Supervisor::add(std::string name, std::function<void()> on_restart) {
  if (std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.state.name == name; })) {
    throw Error(Errc::PreconditionViolation, "segment registered twice: " + name);
  }
  SegmentState state;
  state.name = std::move(name);
  entries_.push_back({std::move(state), std::move(on_restart)});
}

Supervisor::Entry& Supervisor::entry(std::string_view name) {
  return const_cast<Entry&>(std::as_const(*this).entry(name));
}

const Supervisor::Entry& Supervisor::entry(std::string_view name) const {
  for (const auto& e : entries_) {
    if (e.state.name == name) return e;
  }
  throw Error(Errc::PreconditionViolation, "unknown segment " + std::string(name));
}

std::vector<RuntimeEvent> Supervisor::fail(std::string_view name, std::string reason, double now) {
  auto& s = entry(name).state;
  if (s.status != SegmentStatus::Running) return {};

  while (!s.failures.empty() && now - s.failures.front() > policy_.window) s.failures.pop_front();
  s.failures.push_back(now);
  s.last_reason = reason;

  const auto in_window = static_cast<int>(s.failures.size());
  if (in_window > policy_.max_restarts) {
    s.status = SegmentStatus::Failed;
  } else {
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(in_window - 1), policy_.backoff.size() - 1);
    s.status = SegmentStatus::Restarting;
    s.restart_at = now + policy_.backoff[idx];
  }
  return {event::SegmentFailed{s.name, reason}, event::ErrorReport{s.name, std::move(reason), now}};
}

std::vector<RuntimeEvent> Supervisor::poll(double now) {
  std::vector<RuntimeEvent> out;
  for (auto& e : entries_) {
    auto& s = e.state;
    if (s.status == SegmentStatus::Restarting && now >= s.restart_at) {
      s.status = SegmentStatus::Running;
      ++s.restart_count;
      if (e.on_restart) e.on_restart();
      out.push_back(event::SegmentRestarted{s.name});
    }
  }
  return out;
}

bool Supervisor::available(std::string_view name) const {
  return entry(name).state.status == SegmentStatus::Running;
}

const SegmentState& Supervisor::state(std::string_view name) const { return entry(name).state; }

std::vector<SegmentState> Supervisor::states() const {
  std::vector<SegmentState> out;
  for (const auto& e : entries_) out.push_back(e.state);
  return out;
}

std::optional<double> Supervisor::next_restart() const {
  std::optional<double> best;
  for (const auto& e : entries_) {
    if (e.state.status == SegmentStatus::Restarting && (!best || e.state.restart_at < *best)) {
      best = e.state.restart_at;
    }
  }
  return best;
}

}  // namespace humanoid::overseer
