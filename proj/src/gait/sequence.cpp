#include "humanoid/gait/sequence.hpp"

#include <algorithm>
#include <cmath>

#include "humanoid/error.hpp"

namespace humanoid::gait {
namespace {

bool same_joints(const JointTargets& a, const JointTargets& b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(),
                    [](const auto& x, const auto& y) { return x.first == y.first; });
}

}  // namespace

void validate(const GaitSequence& seq, const RobotBodyConfig& body) {
  if (seq.keyframes.empty()) throw Error(Errc::InvalidGaitParams, seq.name + ": no keyframes");
  const auto& first = seq.keyframes.front();
  for (std::size_t i = 0; i < seq.keyframes.size(); ++i) {
    const auto& kf = seq.keyframes[i];
    if (kf.t < 0.0 || (i > 0 && !(kf.t > seq.keyframes[i - 1].t))) {
      throw Error(Errc::InvalidGaitParams, seq.name + ": keyframe times must be >= 0 and strictly increasing");
    }
    if (!same_joints(kf.targets, first.targets)) {
      throw Error(Errc::JointSetMismatch, seq.name + ": keyframe " + std::to_string(i) + " has a different joint set");
    }
    for (const auto& [joint, angle] : kf.targets) {
      const auto& spec = body.servo(joint);
      if (!(angle >= 0.0 && angle <= spec.angle_range)) {
        throw Error(Errc::LimitViolation, seq.name + ": " + joint + " = " + std::to_string(angle) +
                                              "° at t=" + std::to_string(kf.t));
      }
    }
  }
  if (seq.cyclic) {
    if (!(seq.period > 0.0) || std::abs(seq.period - seq.duration()) > 1e-12) {
      throw Error(Errc::InvalidGaitParams, seq.name + ": cyclic period must equal the last keyframe time");
    }
    for (const auto& [joint, angle] : first.targets) {
      if (std::abs(seq.keyframes.back().targets.find(joint)->second - angle) > kCyclicClosureTolerance) {
        throw Error(Errc::InvalidGaitParams, seq.name + ": cycle does not close for " + joint);
      }
    }
  }
}

JointTargets interpolate(const Keyframe& a, const Keyframe& b, double t) {
  if (!same_joints(a.targets, b.targets)) {
    throw Error(Errc::JointSetMismatch, "keyframes at t=" + std::to_string(a.t) + " and t=" +
                                            std::to_string(b.t) + " name different joints");
  }
  if (!(a.t <= t && t <= b.t)) {
    throw Error(Errc::PreconditionViolation, "interpolation time outside the keyframe span");
  }
  const double span = b.t - a.t;
  const double s = span > 0.0 ? (t - a.t) / span : 0.0;
  JointTargets out;
  auto ib = b.targets.begin();
  for (const auto& [joint, va] : a.targets) {
    // (1-s)a + sb hits both endpoints exactly.
    out.emplace_hint(out.end(), joint, (1.0 - s) * va + s * (ib++)->second);
  }
  return out;
}

JointTargets sample(const GaitSequence& seq, double t) {
  const auto& kfs = seq.keyframes;
  if (kfs.empty()) throw Error(Errc::InvalidGaitParams, seq.name + ": no keyframes");
  if (seq.cyclic) {
    t = std::fmod(t, seq.period);
    if (t < 0.0) t += seq.period;
  }
  t = std::clamp(t, kfs.front().t, kfs.back().t);
  auto it = std::upper_bound(kfs.begin(), kfs.end(), t,
                             [](double v, const Keyframe& k) { return v < k.t; });
  if (it == kfs.end()) return kfs.back().targets;
  if (it == kfs.begin()) return kfs.front().targets;
  return interpolate(*(it - 1), *it, t);
}

}  // namespace humanoid::gait
