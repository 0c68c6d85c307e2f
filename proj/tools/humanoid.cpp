#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <stop_token>
#include <thread>

#include "humanoid/error.hpp"
#include "humanoid/gait/executor.hpp"
#include "humanoid/gait/generators.hpp"
#include "humanoid/gateway/server.hpp"
#include "humanoid/intent/network.hpp"
#include "humanoid/intent/trainer.hpp"
#include "humanoid/overseer/runtime.hpp"

using namespace humanoid;
namespace fs = std::filesystem;

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted = true; }

int cmd_train(const fs::path& intents, const fs::path& out, intent::TrainingConfig tc) {
  const auto corpus = intent::load_corpus(intents);
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = intent::train(corpus, tc);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  intent::save_model(result.model, out);
  const auto& last = result.history.back();
  std::cout << "vocabulary " << result.model.vocab.size() << ", tags " << result.model.tags.size()
            << ", parameters "
            << intent::count_parameters(result.model.vocab.size(), result.model.tags.size()) << '\n'
            << "epochs " << last.epoch << ", loss " << last.loss << ", accuracy " << last.accuracy << " in "
            << std::fixed << std::setprecision(2) << secs << " s\n"
            << "saved " << out.string() << '\n';
  return 0;
}

int cmd_chat(const fs::path& model_path, const fs::path& intents, std::uint64_t seed,
             const std::optional<fs::path>& growth_path) {
  const auto corpus = intent::load_corpus(intents);
  const auto model = intent::load_model(model_path);
  std::mt19937_64 rng(seed);
  intent::GrowthLog growth;
  std::string line;
  double t = 0.0;
  std::cout << "> " << std::flush;
  while (std::getline(std::cin, line)) {
    if (line == "quit" || line == "exit") break;
    if (!line.empty()) {
      const auto reply = intent::respond(model, corpus, line, rng, growth, t);
      std::cout << reply.text << "  [" << reply.tag.value_or("fallback") << " " << std::setprecision(3)
                << reply.confidence << "]\n";
      t += 1.0;
    }
    std::cout << "> " << std::flush;
  }
  if (growth_path) growth.write_jsonl(*growth_path);
  std::cout << '\n' << growth.size() << " utterances went unmatched\n";
  return 0;
}

struct SimulateArgs {
  std::string gait = "walk";
  int cycles = 1;
  std::optional<fs::path> trace;
  std::optional<fs::path> params;
  std::string jitter = "hardware";
  double sigma = 15.0;
  std::uint64_t seed = 0;
  double tick = gait::kDefaultTick;
};

int cmd_simulate(const SimulateArgs& a) {
  gait::GaitParams params;
  if (a.params) {
    std::ifstream in(*a.params);
    if (!in) throw Error(Errc::IoFailure, "cannot read " + a.params->string());
    params = gait::params_from_json(nlohmann::json::parse(in));
  }
  const auto body = gait::default_body();
  gait::GaitSequence seq;
  if (a.gait == "walk") seq = gait::generate_walk_cycle(params, body);
  else if (a.gait == "run") seq = gait::generate_run_cycle(params, body);
  else if (a.gait == "turn-left") seq = gait::generate_turn(params, body, gait::TurnDirection::Left);
  else if (a.gait == "turn-right") seq = gait::generate_turn(params, body, gait::TurnDirection::Right);
  else seq = gait::generate_pickup("object", body, params);

  hal::SimulatedServoBus bus(body, a.jitter == "software" ? hal::JitterMode::software(a.sigma)
                                                          : hal::JitterMode::hardware(),
                             a.seed);
  gait::ExecuteOptions opts;
  opts.tick = a.tick;
  opts.repeat = gait::Repeat::times(a.cycles);
  opts.neutral = gait::neutral_stance(params, body);
  const auto outcome = gait::execute(seq, body, bus, std::stop_token{}, opts);
  std::cout << seq.name << ": " << gait::to_string(outcome.status) << ", " << outcome.frames_emitted
            << " frames, " << outcome.elapsed << " s simulated";
  if (!outcome.reason.empty()) std::cout << " (" << outcome.reason << ")";
  std::cout << '\n';
  if (a.trace) {
    bus.export_trace(*a.trace);
    std::cout << "trace " << a.trace->string() << " (" << bus.trace().size() << " rows)\n";
  }
  return outcome.status == gait::TaskOutcome::Status::Completed ? 0 : 1;
}

void print_events(overseer::Session& session) {
  auto mutex = std::make_shared<std::mutex>();
  session.subscribe([mutex](const overseer::TimedEvent& e) {
    std::lock_guard lock(*mutex);
    std::cout << overseer::to_line(e) << '\n' << std::flush;
  });
}

int finish(overseer::Runtime& rt) {
  rt.write_outputs();
  const auto counts = rt.session().metrics().to_json();
  std::cout << "metrics:";
  for (const auto& [name, count] : counts.items()) std::cout << ' ' << name << '=' << count;
  std::cout << '\n';
  return 0;
}

int run_simulated(overseer::RuntimeConfig config, const fs::path& script) {
  const auto lines = overseer::load_script(script, config.utterance_gap);
  overseer::Runtime rt(std::move(config), overseer::Timing::Simulated);
  if (rt.training_note()) std::cout << *rt.training_note() << '\n';
  print_events(rt.session());
  overseer::run_script(rt.session(), lines, rt.config().utterance_gap);
  return finish(rt);
}

int run_realtime(overseer::RuntimeConfig config, std::optional<std::string> serve) {
  using Kind = overseer::TranscriptSourceSpec::Kind;
  const auto source = config.source;
  if (source.kind == Kind::Gateway && !serve) serve = config.gateway_address;

  overseer::Runtime rt(std::move(config), overseer::Timing::Realtime);
  if (rt.training_note()) std::cout << *rt.training_note() << '\n';
  print_events(rt.session());

  // Shared with the detached stdin reader, which may outlive this frame.
  auto queue_ptr = std::make_shared<overseer::TranscriptQueue>();
  auto& queue = *queue_ptr;
  std::optional<gateway::Server> server;
  if (serve) {
    gateway::ServerOptions opts;
    opts.address = *serve;
    opts.config_summary = gateway::config_summary(rt.config());
    server.emplace(
        rt.session(), rt.bus(), rt.display(), [&queue](overseer::Utterance u) { queue.push(std::move(u)); }, opts);
    std::cout << "console gateway on ws://" << gateway::parse_endpoint(*serve).host << ':' << server->port() << '\n';
  }

  std::stop_source stop;
  std::jthread watcher([&stop](std::stop_token st) {
    while (!st.stop_requested() && !g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    if (g_interrupted) stop.request_stop();
  });

  std::jthread feeder;
  if (source.kind == Kind::Script) {
    auto lines = overseer::load_script(source.script, rt.config().utterance_gap);
    const double gap = rt.config().utterance_gap;
    feeder = std::jthread([&queue, lines = std::move(lines), gap](std::stop_token st) {
      const auto start = std::chrono::steady_clock::now();
      auto at = [&](double t) {
        return start + std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::duration<double>(t));
      };
      double last = 0.0;
      for (const auto& l : lines) {
        while (!st.stop_requested() && std::chrono::steady_clock::now() < at(l.time)) {
          std::this_thread::sleep_for(std::chrono::milliseconds(5));
        }
        if (st.stop_requested()) break;
        queue.push({l.text, "script"});
        last = l.time;
      }
      while (!st.stop_requested() && std::chrono::steady_clock::now() < at(last + gap)) {
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
      }
      queue.close();
    });
  } else if (source.kind == Kind::Interactive) {
    // Left detached: a blocked getline cannot be cancelled.
    std::thread([queue_ptr] {
      std::string line;
      while (std::getline(std::cin, line)) {
        if (!line.empty()) queue_ptr->push({line, "stdin"});
      }
      queue_ptr->close();
    }).detach();
  }

  overseer::run_realtime(rt.session(), queue, stop.get_token(), rt.config().tick);
  if (server) server->stop();
  return finish(rt);
}

int cmd_run(const fs::path& config_path, std::optional<std::string> serve, std::optional<fs::path> script,
            bool realtime, bool interactive) {
  auto config = overseer::load_config(config_path);
  if (interactive) config.source = {overseer::TranscriptSourceSpec::Kind::Interactive, {}};
  if (script) config.source = {overseer::TranscriptSourceSpec::Kind::Script, *script};
  if (config.source.kind == overseer::TranscriptSourceSpec::Kind::Script && !serve && !realtime) {
    const auto path = config.source.script;
    return run_simulated(std::move(config), path);
  }
  return run_realtime(std::move(config), std::move(serve));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale humanoid assistant runtime"};
  app.require_subcommand(1);

  fs::path intents = "data/intents.json";
  fs::path model = "model.json";
  intent::TrainingConfig tc;
  tc.seed = 7;
  auto* train = app.add_subcommand("train", "Train the intent classifier");
  train->add_option("--intents", intents, "Intent corpus (JSON)")->check(CLI::ExistingFile);
  train->add_option("--out", model, "Where to write the model");
  train->add_option("--seed", tc.seed, "Training seed");
  train->add_option("--epochs", tc.epochs, "Epochs");
  train->add_option("--batch", tc.batch_size, "Mini-batch size");

  std::uint64_t chat_seed = 7;
  std::optional<fs::path> growth;
  auto* chat = app.add_subcommand("chat", "Chat with a trained model on stdin");
  chat->add_option("--model", model, "Trained model")->check(CLI::ExistingFile);
  chat->add_option("--intents", intents, "Intent corpus (JSON)")->check(CLI::ExistingFile);
  chat->add_option("--seed", chat_seed, "Response choice seed");
  chat->add_option("--growth", growth, "Write unmatched utterances here (JSONL)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Play a gait on the simulated servo bus");
  simulate->add_option("--gait", sim.gait, "Gait")
      ->check(CLI::IsMember({"walk", "run", "turn-left", "turn-right", "pickup"}));
  simulate->add_option("--cycles", sim.cycles, "Cycles to play")->check(CLI::PositiveNumber);
  simulate->add_option("--trace", sim.trace, "Servo trace CSV");
  simulate->add_option("--params", sim.params, "Gait parameters (JSON)")->check(CLI::ExistingFile);
  simulate->add_option("--jitter", sim.jitter, "Pulse timing")->check(CLI::IsMember({"hardware", "software"}));
  simulate->add_option("--sigma", sim.sigma, "Software jitter sigma, microseconds");
  simulate->add_option("--seed", sim.seed, "Jitter seed");
  simulate->add_option("--tick", sim.tick, "Frame period, seconds")->check(CLI::PositiveNumber);

  fs::path config_path;
  std::optional<std::string> serve;
  std::optional<fs::path> script;
  bool realtime = false;
  auto* run = app.add_subcommand("run", "Run a session from a config file");
  run->add_option("--config", config_path, "Runtime config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--serve", serve, "Serve the operator console on host:port");
  run->add_option("--script", script, "Transcript script; overrides the config source")->check(CLI::ExistingFile);
  run->add_flag("--realtime", realtime, "Play a script in wall-clock time instead of simulated time");

  auto* repl = app.add_subcommand("repl", "Interactive session reading utterances from stdin");
  repl->add_option("--config", config_path, "Runtime config (JSON)")->required()->check(CLI::ExistingFile);
  repl->add_option("--serve", serve, "Also serve the operator console on host:port");

  CLI11_PARSE(app, argc, argv);
  std::signal(SIGINT, on_sigint);

  try {
    if (*train) return cmd_train(intents, model, tc);
    if (*chat) return cmd_chat(model, intents, chat_seed, growth);
    if (*simulate) return cmd_simulate(sim);
    if (*run) return cmd_run(config_path, serve, script, realtime, false);
    if (*repl) return cmd_run(config_path, serve, std::nullopt, true, true);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
