#include <doctest.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "humanoid/gait/pwm.hpp"
#include "humanoid/overseer/runtime.hpp"
#include "session_rig.hpp"

using namespace humanoid;
using namespace humanoid::overseer;
using test_util::all_of;
using test_util::kinds;
using test_util::SessionRig;
using Status = gait::TaskOutcome::Status;

namespace {

std::vector<ScriptLine> script(std::string_view text, double gap = 1.0) {
  std::istringstream in{std::string(text)};
  return parse_script(in, gap);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("script parsing") {
  const auto lines = script("# warm up\nwalk\n\n@2.5 stop\nhello there\n");
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].time == 0.0);
  CHECK(lines[0].text == "walk");
  CHECK(lines[1].time == 2.5);
  CHECK(lines[1].text == "stop");
  CHECK(lines[2].time == 3.5);
  test_util::check_errc([] { script("@3 walk\n@2 stop\n"); }, Errc::InvalidConfig);
  test_util::check_errc([] { script("@x walk\n"); }, Errc::InvalidConfig);
  test_util::check_errc([] { script("@4\n"); }, Errc::InvalidConfig);
  CHECK(script("").empty());
}

TEST_CASE("walk then stop") {
  SessionRig rig;
  run_script(rig.session, script("walk\nstop\n"), 1.0);
  const auto events = rig.session.events();
  CHECK(kinds(events) == std::vector<std::string>{"transcript", "command_detected", "task_started", "transcript",
                                                  "command_detected", "task_finished"});
  const auto finished = all_of<event::TaskFinished>(events);
  REQUIRE(finished.size() == 1);
  CHECK(finished[0].second.outcome.status == Status::Interrupted);
  // 50 walk frames in the first second, then the neutral frame.
  CHECK(finished[0].second.outcome.frames_emitted == 51);
  CHECK(rig.session.metrics().count(Feature::Walk) == 1);
  CHECK(rig.session.peak_bus_holders() == 1);
  CHECK(rig.display.current() == hal::glyph::smile());
  for (const auto& s : rig.bus.snapshot().servos) CHECK(s.last_pulse == 1500.0);
}

TEST_CASE("a second motion command while busy is rejected") {
  SessionRig rig;
  run_script(rig.session, script("walk\nrun\nstop\n"), 1.0);
  const auto events = rig.session.events();
  const auto notices = all_of<event::Notice>(events);
  REQUIRE(notices.size() == 1);
  CHECK(notices[0].second.text.find("busy with walk") != std::string::npos);
  CHECK(all_of<event::TaskStarted>(events).size() == 1);
  const auto finished = all_of<event::TaskFinished>(events);
  REQUIRE(finished.size() == 1);
  CHECK(finished[0].second.outcome.frames_emitted == 101);  // the walk kept going
  CHECK(rig.session.metrics().count(Feature::Run) == 1);
  CHECK(all_of<event::ErrorReport>(events).empty());
}

TEST_CASE("chat turns and idle stop") {
  SessionRig rig;
  run_script(rig.session, script("hello\nstop\nwhat is your name\nthanks\n"), 1.0);
  const auto events = rig.session.events();
  const auto chats = all_of<event::ChatTurn>(events);
  REQUIRE(chats.size() == 3);
  CHECK(chats[0].second.tag == "greeting");
  CHECK(chats[1].second.tag == "bot_name");
  CHECK(rig.session.metrics().count(Feature::ChatbotTurns) == 3);
  const auto notices = all_of<event::Notice>(events);
  REQUIRE(notices.size() == 1);
  CHECK(notices[0].second.text == "nothing to stop");
  CHECK(all_of<event::ErrorReport>(events).empty());
}

TEST_CASE("five scripted commands produce five transcripts in order") {
  SessionRig rig;
  const auto lines = script("hello\nturn left\nhow are you\npick up the cup\ntell me a joke\n", 5.0);
  CHECK(run_script(rig.session, lines, 5.0) == 5);
  const auto transcripts = all_of<event::Transcript>(rig.session.events());
  REQUIRE(transcripts.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(transcripts[i].second.text == lines[i].text);
    CHECK(transcripts[i].first == doctest::Approx(lines[i].time));
  }
  const auto finished = all_of<event::TaskFinished>(rig.session.events());
  REQUIRE(finished.size() == 2);
  CHECK(finished[0].second.name == "turn left");
  CHECK(finished[0].second.outcome.status == Status::Completed);
  CHECK(finished[0].second.outcome.frames_emitted == 121);
  CHECK(finished[1].second.name == "pick up the cup");
  CHECK(finished[1].second.outcome.frames_emitted == 201);
}

TEST_CASE("a finite task left running at the end of the script plays out") {
  SessionRig rig;
  run_script(rig.session, script("pick up a ball\n"), 1.0);
  const auto finished = all_of<event::TaskFinished>(rig.session.events());
  REQUIRE(finished.size() == 1);
  CHECK(finished[0].second.outcome.status == Status::Completed);
}

TEST_CASE("empty source exits cleanly with zero metrics") {
  SessionRig rig;
  test_util::TempDir dir;
  CHECK(run_script(rig.session, {}, 1.0) == 0);
  CHECK(export_metrics(rig.session.metrics(), dir / "m.csv") == 7);
  CHECK(read_metrics(dir / "m.csv") == SessionMetrics{});
}

TEST_CASE("assistant mode is sticky until exit or a motor command") {
  SessionRig rig;
  run_script(rig.session,
             script("home assistant\nwhat is the date\ntell me about rivers\nhow are you\nexit assistant\n"
                    "how are you\nhome assistant\nwalk\nstop\n"),
             1.0);
  const auto events = rig.session.events();
  const auto answers = all_of<event::AssistantAnswered>(events);
  REQUIRE(answers.size() == 3);
  CHECK(answers[0].second.answer.find("Friday, March 1, 2024") != std::string::npos);
  CHECK(answers[1].second.answer == *test_util::shared_knowledge().fixture.topic("rivers"));
  CHECK(answers[2].second.provider == assistant::kFallbackProvider);
  CHECK(all_of<event::ChatTurn>(events).size() == 1);
  const auto modes = all_of<event::ModeChanged>(events);
  REQUIRE(modes.size() == 4);
  CHECK(modes[3].second.mode == Mode::Normal);  // walk left assistant mode
  CHECK(rig.session.metrics().count(Feature::AssistantQueries) == 3);
  CHECK(all_of<event::TaskStarted>(events).size() == 1);
}

TEST_CASE("shutdown ends the session") {
  SessionRig rig;
  CHECK(run_script(rig.session, script("walk\nshut down\nhello\n"), 1.0) == 2);
  CHECK(rig.session.shut_down());
  CHECK_FALSE(rig.session.handle_transcript("hello"));
  const auto finished = all_of<event::TaskFinished>(rig.session.events());
  REQUIRE(finished.size() == 1);
  CHECK(finished[0].second.outcome.status == Status::Interrupted);
}

TEST_CASE("chatbot failure does not stop movement") {
  SessionOptions opts;
  opts.faults = {{"chatbot", 0.0, true}};
  SessionRig rig(opts);
  run_script(rig.session, script("hello\nwalk\nhow are you\nstop\n"), 1.0);
  const auto events = rig.session.events();

  const auto finished = all_of<event::TaskFinished>(events);
  REQUIRE(finished.size() == 1);
  CHECK(finished[0].second.outcome.status == Status::Interrupted);
  CHECK(all_of<event::ChatTurn>(events).empty());

  // Every SegmentFailed is followed by exactly one ErrorReport at the same time.
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (std::holds_alternative<event::SegmentFailed>(events[i].event)) {
      REQUIRE(i + 1 < events.size());
      const auto* report = std::get_if<event::ErrorReport>(&events[i + 1].event);
      REQUIRE(report);
      CHECK(report->time - events[i].time < 1.0);
    }
  }
  // Crashes at 0, 0.5, 1.5 and 3.5 s; the fourth parks it.
  const auto reports = all_of<event::ErrorReport>(events);
  REQUIRE(reports.size() == 4);
  CHECK(reports[3].first == doctest::Approx(3.5));
  const auto status = rig.session.status();
  for (const auto& s : status.segments) {
    CHECK(s.status == (s.name == "chatbot" ? SegmentStatus::Failed : SegmentStatus::Running));
  }
  CHECK(rig.session.metrics().count(Feature::Errors) == 4);
}

TEST_CASE("killing any one segment never halts the session") {
  for (auto name : segment::kAll) {
    CAPTURE(name);
    SessionOptions opts;
    opts.faults = {{std::string(name), 0.5, false}};
    SessionRig rig(opts);
    run_script(rig.session, script("walk\nhello\nstop\npick up a cup\n"), 1.0);
    const auto events = rig.session.events();
    CHECK(all_of<event::ErrorReport>(events).size() == 1);
    CHECK(all_of<event::SegmentRestarted>(events).size() == 1);
    CHECK(all_of<event::TaskFinished>(events).size() >= 1);
    CHECK_FALSE(rig.session.shut_down());
  }
}

TEST_CASE("task parser outage rejects motion but still honors stop") {
  SessionOptions opts;
  opts.faults = {{"task_parser", 0.5, true}};
  SessionRig rig(opts);
  run_script(rig.session, script("walk\nrun\nstop\n"), 1.0);
  const auto events = rig.session.events();
  const auto finished = all_of<event::TaskFinished>(events);
  REQUIRE(finished.size() == 1);
  CHECK(finished[0].second.name == "walk");
  CHECK(finished[0].second.outcome.status == Status::Interrupted);
  const auto notices = all_of<event::Notice>(events);
  REQUIRE(notices.size() == 1);
  CHECK(notices[0].second.text.find("unavailable") != std::string::npos);
}

TEST_CASE("speech outage drops utterances") {
  SessionOptions opts;
  opts.faults = {{"speech", 0.0, false}};
  SessionRig rig(opts);
  run_script(rig.session, script("walk\n@0.6 walk\n@1.0 stop\n"), 1.0);
  const auto events = rig.session.events();
  CHECK(all_of<event::Transcript>(events).size() == 2);
  CHECK(all_of<event::TaskStarted>(events).size() == 1);
}

TEST_CASE("faulted gait is reported against the task parser") {
  SessionOptions opts;
  opts.gait.neutral["left_hip"] = 175.0;  // the walk cycle would pass 180°
  SessionRig rig(opts);
  run_script(rig.session, script("walk\nhello\n"), 1.0);
  const auto events = rig.session.events();
  const auto reports = all_of<event::ErrorReport>(events);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].second.segment == "task_parser");
  CHECK(all_of<event::ChatTurn>(events).size() == 1);
  CHECK(rig.display.current() == hal::glyph::cross());
}

TEST_CASE("identical runs are byte-identical") {
  test_util::TempDir dir;
  auto run_once = [&](const std::string& tag) {
    SessionRig rig({}, Timing::Simulated, hal::JitterMode::software(15.0));
    run_script(rig.session, script("hello\nwalk\n@2.3 stop\nturn right\n@6 pick up the cup\n@11 run\n@12 stop\n"), 1.0);
    export_metrics(rig.session.metrics(), dir / (tag + "-metrics.csv"));
    rig.bus.export_trace(dir / (tag + "-trace.csv"));
  };
  run_once("a");
  run_once("b");
  CHECK(slurp(dir / "a-metrics.csv") == slurp(dir / "b-metrics.csv"));
  CHECK(slurp(dir / "a-trace.csv") == slurp(dir / "b-trace.csv"));
  CHECK(slurp(dir / "a-trace.csv").size() > 10000);
}

TEST_CASE("realtime session stops a walk within a tick") {
  SessionRig rig({}, Timing::Realtime);
  CHECK(rig.session.handle_transcript("walk", "stdin"));
  std::this_thread::sleep_for(std::chrono::milliseconds(250));
  rig.session.poll();
  CHECK(rig.session.status().active_task == "walk");
  const auto before = rig.bus.trace().size() / 12;
  CHECK(rig.session.handle_transcript("stop", "stdin"));
  const auto finished = all_of<event::TaskFinished>(rig.session.events());
  REQUIRE(finished.size() == 1);
  const auto& outcome = finished[0].second.outcome;
  CHECK(outcome.status == Status::Interrupted);
  CHECK(outcome.frames_emitted >= before);
  CHECK(outcome.frames_emitted <= before + 2);  // a frame in flight, then neutral
  for (const auto& s : rig.bus.snapshot().servos) CHECK(s.last_pulse == 1500.0);
  CHECK_FALSE(rig.session.status().active_task);
}

TEST_CASE("realtime loop drains a queue and collects finished tasks") {
  SessionOptions opts;
  opts.turn_cycles = 1;
  opts.gait.step_period = 0.2;
  SessionRig rig(opts, Timing::Realtime);
  TranscriptQueue queue;
  queue.push({"turn right", "console"});
  queue.push({"hello", "console"});
  std::jthread closer([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(400));
    queue.close();
  });
  run_realtime(rig.session, queue, std::stop_token{}, 0.02);
  const auto events = rig.session.events();
  const auto finished = all_of<event::TaskFinished>(events);
  REQUIRE(finished.size() == 1);
  CHECK(finished[0].second.outcome.status == Status::Completed);
  CHECK(all_of<event::ChatTurn>(events).size() == 1);
}

TEST_CASE("runtime config") {
  test_util::TempDir dir;
  const auto j = nlohmann::json::parse(R"({
    "bus": {"type": "sim", "jitter": "software", "jitter_sigma_us": 12, "seed": 3},
    "model": "model.json", "intents": "intents.json",
    "gait": {"params": {"hip_amplitude": 15}},
    "source": "script:demo.txt", "seed": 11,
    "outputs": {"metrics": "out/metrics.csv"},
    "session": {"utterance_gap_s": 0.5, "clock_date": "2024-03-01"},
    "faults": [{"segment": "chatbot", "at": 2, "persistent": true}]
  })");
  const auto c = config_from_json(j, dir.path());
  CHECK(c.jitter.kind == hal::JitterMode::Kind::SoftwareTimed);
  CHECK(c.jitter.sigma_us == 12.0);
  CHECK(c.bus_seed == 3);
  CHECK(c.model == dir / "model.json");
  CHECK(c.gait.hip_amplitude == 15.0);
  CHECK(c.source.kind == TranscriptSourceSpec::Kind::Script);
  CHECK(c.source.script == dir / "demo.txt");
  CHECK(c.outputs.metrics == dir / "out/metrics.csv");
  CHECK_FALSE(c.outputs.trace);
  CHECK(c.utterance_gap == 0.5);
  CHECK(c.clock_date == std::chrono::year_month_day{std::chrono::year{2024}, std::chrono::March, std::chrono::day{1}});
  REQUIRE(c.faults.size() == 1);
  CHECK(c.faults[0].persistent);

  test_util::check_errc([] { config_from_json({{"source", "carrier pigeon"}}); }, Errc::InvalidConfig);
  test_util::check_errc([] { config_from_json({{"bus", {{"type", "i2c"}}}}); }, Errc::InvalidConfig);
  test_util::check_errc([] { config_from_json({{"faults", {{{"segment", "brain"}}}}}); }, Errc::InvalidConfig);
  test_util::check_errc([] { config_from_json({{"session", {{"clock_date", "2024-02-30"}}}}); },
                        Errc::InvalidConfig);
  test_util::check_errc([] { config_from_json({{"gait", {{"params", {{"frames_per_cycle", 5}}}}}}); },
                        Errc::InvalidConfig);
  CHECK(parse_source("gateway").kind == TranscriptSourceSpec::Kind::Gateway);
}

TEST_CASE("runtime trains a missing model and writes outputs") {
  test_util::TempDir dir;
  RuntimeConfig c;
  c.intents = test_util::data_file("intents.json");
  c.fixture = test_util::data_file("assistant_fixture.json");
  c.model = dir / "model.json";
  c.outputs = {dir / "metrics.csv", dir / "trace.csv", dir / "errors.jsonl", dir / "growth.jsonl"};
  c.faults = {{"assistant", 0.0, false}};
  std::size_t growth_entries = 0;
  {
    Runtime rt(c, Timing::Simulated);
    CHECK(rt.training_note());
    run_script(rt.session(), script("walk\nstop\nblorp zxq\n"), 1.0);
    rt.write_outputs();
    growth_entries = rt.session().growth().size();
  }
  CHECK(std::filesystem::exists(dir / "model.json"));
  CHECK(read_metrics(dir / "metrics.csv").count(Feature::Walk) == 1);
  CHECK(hal::read_trace_csv(dir / "trace.csv").size() > 12 * 50);
  CHECK(slurp(dir / "errors.jsonl").find("\"assistant\"") != std::string::npos);
  CHECK(intent::GrowthLog::read_jsonl(dir / "growth.jsonl").size() == growth_entries);

  Runtime again(c, Timing::Simulated);
  CHECK_FALSE(again.training_note());
}
