#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "humanoid/gateway/protocol.hpp"
#include "humanoid/overseer/runtime.hpp"

namespace humanoid::gateway {

struct ServerOptions {
  std::string address = "127.0.0.1:8765";  // port 0 picks a free one
  double active_hz = 25.0;                 // servo_state rate while a task runs
  double idle_hz = 2.0;
  std::size_t max_pending = 256;  // frames queued per client before it is dropped
  int socket_send_buffer = 0;     // SO_SNDBUF for accepted sockets; 0 keeps the default
  nlohmann::json config_summary = nlohmann::json::object();
};

/// Receives console commands and chat; usually pushes onto the same
/// TranscriptQueue as stdin or a script.
using TranscriptSink = std::function<void(overseer::Utterance)>;

/// WebSocket server for the operator console. Runs its own I/O thread; the
/// constructor returns once the port is bound and listening.
class Server {
 public:
  /// Throws BindFailure when the address cannot be bound, InvalidConfig when
  /// it cannot be parsed.
  Server(overseer::Session& session, const hal::ServoBus& bus, const hal::SimulatedDisplay& display,
         TranscriptSink sink, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::uint16_t port() const noexcept;
  std::size_t connections() const;
  /// Clients disconnected because their send queue overflowed.
  std::size_t dropped() const;
  void stop();

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
};

/// Summary sent in "hello".
nlohmann::json config_summary(const overseer::RuntimeConfig& config);

}  // namespace humanoid::gateway
