#include <doctest.h>

#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <numbers>
#include <random>

#include "humanoid/gait/body.hpp"
#include "humanoid/gait/executor.hpp"
#include "humanoid/gait/generators.hpp"
#include "humanoid/gait/pwm.hpp"
#include "humanoid/gait/task.hpp"
#include "humanoid/hal/servo_bus.hpp"
#include "test_util.hpp"

using namespace humanoid;
using namespace humanoid::gait;

namespace {

const RobotBodyConfig& body() {
  static const RobotBodyConfig b = default_body();
  return b;
}

std::string mirror_name(const std::string& joint) {
  if (joint.starts_with("left_")) return "right_" + joint.substr(5);
  if (joint.starts_with("right_")) return "left_" + joint.substr(6);
  return joint;
}

void check_in_travel(const GaitSequence& seq, double tick = 0.005) {
  for (double t = 0.0; t <= seq.duration() + 1e-12; t += tick) {
    for (const auto& [joint, angle] : sample(seq, t)) {
      CHECK(angle >= 0.0);
      CHECK(angle <= body().servo(joint).angle_range);
    }
  }
}

/// Fails every pulse on one channel.
class FaultyBus final : public hal::ServoBus {
 public:
  explicit FaultyBus(int bad) : bad_(bad) {}
  hal::PulseCommand set_pulse(int channel, double pulse) override {
    if (channel == bad_) throw Error(Errc::UnknownChannel, "channel " + std::to_string(channel) + " offline");
    return {channel, pulse, pulse, now_};
  }
  void tick(double dt) override { now_ += dt; }
  double now() const override { return now_; }
  hal::BusSnapshot snapshot() const override { return {now_, {}}; }

 private:
  int bad_;
  double now_ = 0.0;
};

/// Commanded pulses of the last frame per channel.
std::map<int, double> last_frame(const hal::SimulatedServoBus& bus) {
  std::map<int, double> out;
  for (const auto& row : bus.trace()) out[row.channel] = row.pulse_commanded;
  return out;
}

}  // namespace

TEST_CASE("default body layout") {
  const auto& b = body();
  CHECK(b.servos.size() == 12);
  int mg = 0;
  for (const auto& s : b.servos) mg += s.model == ServoModel::MG995;
  CHECK(mg == 8);
  CHECK(b.servo("gripper").max_slew == 545.0);
  CHECK(b.servo("left_knee").max_slew == 375.0);
  CHECK(body_from_json(body_to_json(b)) == b);

  auto dup = b;
  dup.servos[1].channel = dup.servos[0].channel;
  test_util::check_errc([&] { validate(dup); }, Errc::InvalidBody);
  auto short_body = b;
  short_body.servos.pop_back();
  test_util::check_errc([&] { validate(short_body); }, Errc::InvalidBody);
}

TEST_CASE("interpolate") {
  const Keyframe a{0.0, {{"left_hip", 30.0}}};
  const Keyframe b{1.0, {{"left_hip", 60.0}}};
  CHECK(interpolate(a, b, 0.5).at("left_hip") == 45.0);
  CHECK(interpolate(a, b, 0.0) == a.targets);
  CHECK(interpolate(a, b, 1.0) == b.targets);
  const Keyframe c{1.0, {{"right_hip", 60.0}}};
  test_util::check_errc([&] { interpolate(a, c, 0.5); }, Errc::JointSetMismatch);
}

TEST_CASE("sequence validation") {
  auto seq = generate_walk_cycle({}, body());
  CHECK_NOTHROW(validate(seq, body()));
  auto bad = seq;
  bad.keyframes[3].targets["left_hip"] = 181.0;
  test_util::check_errc([&] { validate(bad, body()); }, Errc::LimitViolation);
  bad = seq;
  bad.keyframes[3].targets.erase("gripper");
  test_util::check_errc([&] { validate(bad, body()); }, Errc::JointSetMismatch);
  bad = seq;
  std::swap(bad.keyframes[2].t, bad.keyframes[3].t);
  test_util::check_errc([&] { validate(bad, body()); }, Errc::InvalidGaitParams);
}

TEST_CASE("walk cycle shape") {
  const GaitParams p;
  const auto seq = generate_walk_cycle(p, body());
  CHECK(seq.cyclic);
  CHECK(seq.period == 1.2);
  REQUIRE(seq.keyframes.size() == 21);
  CHECK(seq.keyframes.front().targets == seq.keyframes.back().targets);

  SUBCASE("legs in antiphase") {
    double worst = 0.0;
    for (double t = 0.0; t < 10 * seq.period; t += 0.0037) {
      const double l = sample(seq, t).at("left_hip");
      const double r = sample(seq, t + seq.period / 2).at("right_hip");
      worst = std::max(worst, std::abs(l - r));
    }
    CHECK(worst < 1e-6);
  }

  SUBCASE("keyframes follow the reference sinusoids") {
    const int n = p.frames_per_cycle;
    for (int k = 0; k < n; ++k) {
      const double phase = 2.0 * std::numbers::pi * k / n;
      const auto& kf = seq.keyframes[k].targets;
      CHECK(kf.at("left_hip") == doctest::Approx(90.0 + 20.0 * std::sin(phase)));
      CHECK(kf.at("left_knee") == doctest::Approx(90.0 + 25.0 * std::cos(phase)));
      CHECK(kf.at("left_ankle") == doctest::Approx(90.0 - 10.0 * std::sin(phase)));
      CHECK(kf.at("left_shoulder") == doctest::Approx(90.0 - 5.0 * std::sin(phase)));
      CHECK(kf.at("right_hip") == doctest::Approx(90.0 - 20.0 * std::sin(phase)));
      CHECK(kf.at("gripper") == 90.0);
    }
  }

  SUBCASE("knee leads hip by a quarter period") {
    for (double t = 0.0; t < seq.period; t += seq.period / 20) {
      const double knee = (sample(seq, t).at("left_knee") - 90.0) / 25.0;
      const double hip = (sample(seq, t + seq.period / 4).at("left_hip") - 90.0) / 20.0;
      CHECK(knee == doctest::Approx(hip));
    }
  }
}

TEST_CASE("zero amplitudes give a neutral sequence") {
  GaitParams p;
  p.hip_amplitude = p.knee_amplitude = p.ankle_amplitude = 0.0;
  const auto neutral = neutral_stance(p, body());
  for (const auto& seq : {generate_walk_cycle(p, body()), generate_run_cycle(p, body()),
                          generate_turn(p, body(), TurnDirection::Left)}) {
    for (const auto& kf : seq.keyframes) CHECK(kf.targets == neutral);
  }
  CHECK(generate_run_cycle(p, body()).period == doctest::Approx(0.72));
}

TEST_CASE("limit violations") {
  GaitParams p;
  p.hip_amplitude = 95.0;
  test_util::check_errc([&] { generate_walk_cycle(p, body()); }, Errc::LimitViolation);
  p.hip_amplitude = 80.0;  // walk fits, ×1.25 does not
  CHECK_NOTHROW(generate_walk_cycle(p, body()));
  test_util::check_errc([&] { generate_run_cycle(p, body()); }, Errc::LimitViolation);
  p = {};
  p.neutral["left_knee"] = 170.0;
  test_util::check_errc([&] { generate_walk_cycle(p, body()); }, Errc::LimitViolation);
  p = {};
  p.frames_per_cycle = 7;
  test_util::check_errc([&] { generate_walk_cycle(p, body()); }, Errc::InvalidGaitParams);
  p = {};
  p.knee_amplitude = -1.0;
  test_util::check_errc([&] { validate(p); }, Errc::InvalidGaitParams);
}

TEST_CASE("run cycle scales walk") {
  const GaitParams p;
  const auto walk = generate_walk_cycle(p, body());
  const auto run = generate_run_cycle(p, body());
  CHECK(run.period == doctest::Approx(0.72).epsilon(1e-15));
  for (std::size_t k = 0; k < walk.keyframes.size(); ++k) {
    for (const auto& [joint, angle] : walk.keyframes[k].targets) {
      CHECK(run.keyframes[k].targets.at(joint) - 90.0 == doctest::Approx((angle - 90.0) * 1.25));
    }
  }
  double worst = 0.0;
  for (double t = 0.0; t < 3.0; t += 0.0041) {
    worst = std::max(worst, std::abs(sample(run, t).at("left_hip") -
                                     sample(run, t + run.period / 2).at("right_hip")));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("turns") {
  const GaitParams p;
  const auto left = generate_turn(p, body(), TurnDirection::Left);
  const auto right = generate_turn(p, body(), TurnDirection::Right);

  auto amplitude = [](const GaitSequence& s, const std::string& joint) {
    double hi = -1e9, lo = 1e9;
    for (const auto& kf : s.keyframes) {
      hi = std::max(hi, kf.targets.at(joint));
      lo = std::min(lo, kf.targets.at(joint));
    }
    return (hi - lo) / 2.0;
  };
  CHECK(amplitude(left, "left_hip") == doctest::Approx(amplitude(left, "right_hip") / 2.0));
  CHECK(amplitude(right, "right_hip") == doctest::Approx(amplitude(right, "left_hip") / 2.0));

  REQUIRE(left.keyframes.size() == right.keyframes.size());
  for (std::size_t k = 0; k < left.keyframes.size(); ++k) {
    JointTargets renamed;
    for (const auto& [joint, angle] : right.keyframes[k].targets) renamed[mirror_name(joint)] = angle;
    CHECK(renamed == left.keyframes[k].targets);
  }
}

TEST_CASE("generated angles stay in travel for random valid params") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> amp(0.0, 40.0), neutral(60.0, 120.0), period(0.3, 3.0);
  std::uniform_int_distribution<int> half_frames(2, 30);
  for (int trial = 0; trial < 40; ++trial) {
    GaitParams p;
    p.step_period = period(rng);
    p.hip_amplitude = amp(rng);
    p.knee_amplitude = amp(rng);
    p.ankle_amplitude = amp(rng);
    p.frames_per_cycle = 2 * half_frames(rng);
    for (const auto& name : body().joint_names()) p.neutral[name] = neutral(rng);
    check_in_travel(generate_walk_cycle(p, body()));
    check_in_travel(generate_run_cycle(p, body()));
    check_in_travel(generate_turn(p, body(), TurnDirection::Left));
    check_in_travel(generate_turn(p, body(), TurnDirection::Right));
    check_in_travel(generate_pickup("cup", body(), p));
  }
}

TEST_CASE("pickup script") {
  const GaitParams p;
  const auto seq = generate_pickup("the bottle", body(), p);
  CHECK_FALSE(seq.cyclic);
  REQUIRE(seq.keyframes.size() == 6);
  CHECK(seq.duration() == 4.0);
  CHECK(seq.keyframes.front().targets != seq.keyframes.back().targets);
  const auto& last = seq.keyframes.back().targets;
  for (const auto* j : {"left_hip", "left_knee", "left_ankle", "right_hip", "right_knee", "right_ankle"}) {
    CHECK(last.at(j) == p.neutral_of(j));
  }
  CHECK(last.at("gripper") == p.gripper_closed);
  const auto& crouch = seq.keyframes[1].targets;
  CHECK(crouch.at("left_knee") > 90.0);
  CHECK(crouch.at("left_hip") < 90.0);
  test_util::check_errc([] { generate_pickup("", body()); }, Errc::PreconditionViolation);
  check_in_travel(seq);
}

TEST_CASE("params json round trip") {
  GaitParams p;
  p.hip_amplitude = 12.5;
  p.neutral["neck_pan"] = 80.0;
  CHECK(params_from_json(params_to_json(p)) == p);
  test_util::check_errc([] { params_from_json({{"frames_per_cycle", 3}}); }, Errc::InvalidGaitParams);
  test_util::check_errc([] { params_from_json({{"hip_amplitude", "big"}}); }, Errc::InvalidGaitParams);
}

TEST_CASE("task commands") {
  CHECK(describe(cmd::Turn{TurnDirection::Right}) == "turn right");
  CHECK(describe(cmd::PickUp{"the cup"}) == "pick up the cup");
  CHECK(is_motion(cmd::Walk{}));
  CHECK_FALSE(is_motion(cmd::Stop{}));
  CHECK_FALSE(is_motion(cmd::AssistantMode{true}));
}

TEST_CASE("execute repeats a cycle and issues every joint each tick") {
  hal::SimulatedServoBus bus(body());
  const auto seq = generate_walk_cycle({}, body());
  ExecuteOptions opts;
  opts.repeat = Repeat::times(2);
  const auto outcome = execute(seq, body(), bus, std::stop_token{}, opts);
  CHECK(outcome.status == TaskOutcome::Status::Completed);
  // 2 periods of 1.2 s at 20 ms per frame, plus the closing frame.
  const double ratio = 2 * seq.period / opts.tick;
  CHECK(std::abs(static_cast<double>(outcome.frames_emitted) - ratio) <= 1.0);
  CHECK(outcome.elapsed == doctest::Approx(outcome.frames_emitted * 0.02));

  const auto trace = bus.trace();
  CHECK(trace.size() == outcome.frames_emitted * 12);
  for (std::size_t f = 0; f < outcome.frames_emitted; ++f) {
    std::set<int> channels;
    for (std::size_t i = 0; i < 12; ++i) {
      CHECK(trace[f * 12 + i].time == trace[f * 12].time);
      channels.insert(trace[f * 12 + i].channel);
    }
    CHECK(channels.size() == 12);
  }
}

TEST_CASE("cyclic playback repeats the pattern with a continuous seam") {
  hal::SimulatedServoBus bus(body());
  const auto seq = generate_walk_cycle({}, body());
  ExecuteOptions opts;
  opts.repeat = Repeat::times(10);
  execute(seq, body(), bus, std::stop_token{}, opts);

  std::map<int, std::vector<double>> angles;
  for (const auto& row : bus.trace()) {
    angles[row.channel].push_back(pulse_to_angle(row.pulse_commanded, *body().find_channel(row.channel)));
  }
  const std::size_t per_cycle = 60;
  for (const auto& [ch, series] : angles) {
    REQUIRE(series.size() == 10 * per_cycle + 1);
    const double bound = body().find_channel(ch)->max_slew * opts.tick;
    for (std::size_t i = 1; i < series.size(); ++i) CHECK(std::abs(series[i] - series[i - 1]) <= bound);
    for (std::size_t i = per_cycle; i < series.size(); ++i) {
      CHECK(series[i] == doctest::Approx(series[i - per_cycle]).epsilon(1e-9));
    }
  }
}

TEST_CASE("interrupt ends on the neutral stance within one frame") {
  const auto seq = generate_walk_cycle({}, body());
  for (std::size_t raise_at : {0u, 1u, 17u, 33u}) {
    hal::SimulatedServoBus bus(body());
    ExecuteOptions opts;
    opts.repeat = Repeat::until_interrupted();
    GaitRun run(seq, body(), bus, opts);
    for (std::size_t i = 0; i < raise_at; ++i) run.step(false);
    const auto before = run.outcome().frames_emitted;
    run.step(true);
    REQUIRE(run.done());
    CHECK(run.outcome().status == TaskOutcome::Status::Interrupted);
    CHECK(run.outcome().frames_emitted - before <= 1);
    for (const auto& [ch, pulse] : last_frame(bus)) CHECK(pulse == 1500.0);
    run.step(false);
    CHECK(run.outcome().frames_emitted == before + 1);
  }
}

TEST_CASE("execute polls the stop token every frame") {
  hal::SimulatedServoBus bus(body());
  std::stop_source source;
  ExecuteOptions opts;
  opts.repeat = Repeat::until_interrupted();
  const auto outcome = execute(generate_run_cycle({}, body()), body(), bus, source.get_token(), opts,
                               [&](std::size_t frame) {
                                 if (frame == 24) source.request_stop();
                               });
  CHECK(outcome.status == TaskOutcome::Status::Interrupted);
  CHECK(outcome.frames_emitted == 26);
}

TEST_CASE("pickup plays once to its final pose") {
  hal::SimulatedServoBus bus(body());
  const auto seq = generate_pickup("cup", body());
  const auto outcome = execute(seq, body(), bus, std::stop_token{});
  CHECK(outcome.status == TaskOutcome::Status::Completed);
  CHECK(outcome.frames_emitted == 201);
  const auto final_pose = last_frame(bus);
  const auto& gripper = body().servo("gripper");
  CHECK(final_pose.at(gripper.channel) == angle_to_pulse(GaitParams{}.gripper_closed, gripper));
}

TEST_CASE("bus errors fault the run") {
  FaultyBus bus(5);
  const auto outcome = execute(generate_walk_cycle({}, body()), body(), bus, std::stop_token{});
  CHECK(outcome.status == TaskOutcome::Status::Faulted);
  CHECK(outcome.reason.find("offline") != std::string::npos);
  CHECK(outcome.frames_emitted == 0);
}

TEST_CASE("realtime pacer keeps frame spacing") {
  hal::SimulatedServoBus bus(body());
  ExecuteOptions opts;
  opts.tick = 0.01;
  const auto start = std::chrono::steady_clock::now();
  const auto outcome =
      execute(generate_pickup("x", body()), body(), bus, std::stop_token{}, opts, realtime_pacer(0.01));
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
  CHECK(outcome.frames_emitted == 401);
  CHECK(wall.count() >= 3.9);
  CHECK(wall.count() < 6.0);
}
