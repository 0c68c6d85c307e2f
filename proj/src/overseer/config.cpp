#include "humanoid/overseer/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "humanoid/error.hpp"

namespace humanoid::overseer {
namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::InvalidConfig, what); }

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

std::chrono::year_month_day parse_date(const std::string& s) {
  int y = 0;
  unsigned m = 0, d = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3) invalid("clock_date must be YYYY-MM-DD: " + s);
  const std::chrono::year_month_day date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) invalid("clock_date is not a calendar date: " + s);
  return date;
}

bool known_segment(std::string_view name) {
  return std::find(std::begin(segment::kAll), std::end(segment::kAll), name) != std::end(segment::kAll);
}

}  // namespace

TranscriptSourceSpec parse_source(std::string_view text) {
  if (text == "interactive") return {};
  if (text == "gateway") return {TranscriptSourceSpec::Kind::Gateway, {}};
  constexpr std::string_view prefix = "script:";
  if (text.starts_with(prefix) && text.size() > prefix.size()) {
    return {TranscriptSourceSpec::Kind::Script, std::filesystem::path(text.substr(prefix.size()))};
  }
  invalid("source must be interactive, gateway or script:<path>, got '" + std::string(text) + "'");
}

RuntimeConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) invalid("config must be a JSON object");
  RuntimeConfig c;
  try {
    if (auto it = j.find("bus"); it != j.end()) {
      const auto& bus = *it;
      c.bus_type = bus.value("type", c.bus_type);
      if (c.bus_type != "sim") invalid("bus.type must be \"sim\"");
      const auto mode = bus.value("jitter", std::string("hardware"));
      const double sigma = bus.value("jitter_sigma_us", 15.0);
      if (mode == "hardware") {
        c.jitter = hal::JitterMode::hardware();
      } else if (mode == "software") {
        if (sigma < 0.0) invalid("bus.jitter_sigma_us must be >= 0");
        c.jitter = hal::JitterMode::software(sigma);
      } else {
        invalid("bus.jitter must be hardware or software");
      }
      c.bus_seed = bus.value("seed", c.bus_seed);
    }
    c.model = resolve(base_dir, j.value("model", std::string("model.json")));
    c.intents = resolve(base_dir, j.value("intents", std::string("intents.json")));
    c.fixture = resolve(base_dir, j.value("fixture", std::string("assistant_fixture.json")));
    if (auto it = j.find("gait"); it != j.end()) {
      if (it->contains("params")) c.gait = gait::params_from_json((*it)["params"]);
      if (it->contains("body")) c.body = gait::body_from_json((*it)["body"]);
    }
    c.gateway_address = j.value("gateway", c.gateway_address);
    c.source = parse_source(j.value("source", std::string("interactive")));
    if (c.source.kind == TranscriptSourceSpec::Kind::Script) c.source.script = resolve(base_dir, c.source.script.string());
    c.seed = j.value("seed", c.seed);

    if (auto it = j.find("outputs"); it != j.end()) {
      auto path_of = [&](const char* key) -> std::optional<std::filesystem::path> {
        if (!it->contains(key) || (*it)[key].is_null()) return std::nullopt;
        return resolve(base_dir, (*it)[key].get<std::string>());
      };
      c.outputs = {path_of("metrics"), path_of("trace"), path_of("error_log"), path_of("growth_log")};
    }
    if (auto it = j.find("session"); it != j.end()) {
      c.utterance_gap = it->value("utterance_gap_s", c.utterance_gap);
      c.tick = it->value("tick_s", c.tick);
      c.turn_cycles = it->value("turn_cycles", c.turn_cycles);
      if (it->contains("clock_date") && !(*it)["clock_date"].is_null()) {
        c.clock_date = parse_date((*it)["clock_date"].get<std::string>());
      }
    }
    if (auto it = j.find("restart"); it != j.end()) {
      c.restart.backoff = it->value("backoff_s", c.restart.backoff);
      c.restart.max_restarts = it->value("max_restarts", c.restart.max_restarts);
      c.restart.window = it->value("window_s", c.restart.window);
    }
    if (auto it = j.find("faults"); it != j.end()) {
      for (const auto& f : *it) {
        FaultSpec spec{f.at("segment").get<std::string>(), f.value("at", 0.0), f.value("persistent", false)};
        if (!known_segment(spec.segment)) invalid("faults: unknown segment '" + spec.segment + "'");
        if (spec.at < 0.0) invalid("faults: 'at' must be >= 0");
        c.faults.push_back(std::move(spec));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    invalid(e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidConfig) throw;
    invalid(e.what());
  }
  if (!(c.tick > 0.0)) invalid("session.tick_s must be positive");
  if (!(c.utterance_gap >= 0.0)) invalid("session.utterance_gap_s must be >= 0");
  if (c.turn_cycles < 1) invalid("session.turn_cycles must be >= 1");
  if (c.restart.backoff.empty() || c.restart.max_restarts < 0 || !(c.restart.window > 0.0)) {
    invalid("restart policy is invalid");
  }
  return c;
}

RuntimeConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    invalid(path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

}  // namespace humanoid::overseer
