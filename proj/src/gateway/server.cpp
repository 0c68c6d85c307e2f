#include "humanoid/gateway/server.hpp"

#include <atomic>
#include <cmath>
#include <deque>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "humanoid/error.hpp"

namespace humanoid::gateway {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

class Connection;

}  // namespace

struct Server::Impl : std::enable_shared_from_this<Server::Impl> {
  Impl(overseer::Session& s, const hal::ServoBus& b, const hal::SimulatedDisplay& d, TranscriptSink k,
       ServerOptions o)
      : session(s), bus(b), display(d), sink(std::move(k)), options(std::move(o)) {}

  void listen();
  void accept();
  void schedule_tick();
  void on_tick();
  void broadcast(const Envelope& e);
  void remove(const Connection* c);
  nlohmann::json hello() const;
  void handle_inbound(Connection& c, std::string_view text);
  void shutdown();

  overseer::Session& session;
  const hal::ServoBus& bus;
  const hal::SimulatedDisplay& display;
  TranscriptSink sink;
  ServerOptions options;

  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  net::steady_timer timer{ioc};
  std::thread thread;
  std::uint16_t port = 0;

  // I/O thread only.
  std::vector<std::shared_ptr<Connection>> conns;
  std::uint64_t ticks = 0;
  nlohmann::json last_supervisor;
  nlohmann::json last_metrics;
  std::optional<hal::DotMatrixFrame> last_display;

  std::atomic<std::size_t> n_connections{0};
  std::atomic<std::size_t> n_dropped{0};
  std::atomic<bool> stopped{false};
};

namespace {

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, Server::Impl& hub) : ws_(std::move(socket)), hub_(hub) {}

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.text(true);
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->hub_.stopped) return;
      self->hub_.conns.push_back(self);
      ++self->hub_.n_connections;
      self->send(std::string(msg::kHello), self->hub_.hello());
      self->read();
    });
  }

  /// Queues a frame; a client whose queue is full is disconnected.
  void send(std::string type, nlohmann::json payload) {
    if (closed_) return;
    if (queue_.size() >= hub_.options.max_pending) {
      ++hub_.n_dropped;
      close();
      return;
    }
    queue_.push_back(encode({std::move(type), next_seq_++, std::move(payload)}));
    if (queue_.size() == 1) write();
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    hub_.remove(this);
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ec);
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->close();
      const auto text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->hub_.handle_inbound(*self, text);
      if (!self->closed_) self->read();
    });
  }

  void write() {
    ws_.async_write(net::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->close();
      self->queue_.pop_front();
      if (!self->queue_.empty() && !self->closed_) self->write();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  Server::Impl& hub_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  std::int64_t next_seq_ = 1;
  bool closed_ = false;
};

}  // namespace

void Server::Impl::listen() {
  const auto ep = parse_endpoint(options.address);
  beast::error_code ec;
  tcp::resolver resolver(ioc);
  auto results = resolver.resolve(ep.host, std::to_string(ep.port), tcp::resolver::numeric_service, ec);
  if (ec || results.empty()) {
    throw Error(Errc::BindFailure, "cannot resolve " + options.address + ": " + ec.message());
  }
  const tcp::endpoint endpoint = *results.begin();
  acceptor.open(endpoint.protocol(), ec);
  if (!ec) acceptor.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) acceptor.bind(endpoint, ec);
  if (!ec) acceptor.listen(net::socket_base::max_listen_connections, ec);
  if (ec) throw Error(Errc::BindFailure, "cannot listen on " + options.address + ": " + ec.message());
  port = acceptor.local_endpoint().port();
}

void Server::Impl::accept() {
  acceptor.async_accept([self = shared_from_this()](beast::error_code ec, tcp::socket socket) {
    if (ec || self->stopped) return;
    if (self->options.socket_send_buffer > 0) {
      socket.set_option(net::socket_base::send_buffer_size(self->options.socket_send_buffer), ec);
    }
    std::make_shared<Connection>(std::move(socket), *self)->start();
    self->accept();
  });
}

void Server::Impl::schedule_tick() {
  timer.expires_after(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / options.active_hz)));
  timer.async_wait([self = shared_from_this()](beast::error_code ec) {
    if (ec || self->stopped) return;
    self->on_tick();
    self->schedule_tick();
  });
}

void Server::Impl::on_tick() {
  const auto status = session.status();
  const auto idle_every =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::lround(options.active_hz / options.idle_hz)));
  if (status.active_task || ticks % idle_every == 0) {
    broadcast({std::string(msg::kServoState), 0, servo_state_payload(bus.snapshot())});
  }
  ++ticks;

  auto sup = supervisor_payload(status);
  if (sup != last_supervisor) {
    last_supervisor = sup;
    broadcast({std::string(msg::kSupervisor), 0, std::move(sup)});
  }
  auto met = metrics_payload(status.metrics);
  if (met != last_metrics) {
    last_metrics = met;
    broadcast({std::string(msg::kMetrics), 0, std::move(met)});
  }
  const auto frame = display.current();
  if (frame != last_display) {
    last_display = frame;
    broadcast({std::string(msg::kDisplay), 0, display_payload(frame)});
  }
}

void Server::Impl::broadcast(const Envelope& e) {
  // send() may drop a connection, which edits `conns`.
  const auto targets = conns;
  for (const auto& c : targets) c->send(e.type, e.payload);
}

void Server::Impl::remove(const Connection* c) {
  std::erase_if(conns, [c](const auto& p) { return p.get() == c; });
  --n_connections;
}

nlohmann::json Server::Impl::hello() const {
  const auto status = session.status();
  return {{"protocol", kProtocolVersion},
          {"config", options.config_summary},
          {"snapshot",
           {{"servo_state", servo_state_payload(bus.snapshot())},
            {"supervisor", supervisor_payload(status)},
            {"metrics", metrics_payload(status.metrics)},
            {"display", display_payload(display.current())}}}};
}

void Server::Impl::handle_inbound(Connection& c, std::string_view text) {
  std::optional<std::int64_t> seq;
  auto reject = [&](const std::string& why) {
    c.send(std::string(msg::kError),
           {{"ref_seq", seq ? nlohmann::json(*seq) : nlohmann::json(nullptr)}, {"message", why}});
  };
  Envelope in;
  try {
    in = decode(text, &seq);
  } catch (const Error& e) {
    return reject(e.what());
  }
  const nlohmann::json ack{{"ref_seq", in.seq}, {"ref_type", in.type}};
  if (in.type == msg::kAckRequest) return c.send(std::string(msg::kAck), ack);
  if (in.type != msg::kCommand && in.type != msg::kChat) return reject("unknown type \"" + in.type + "\"");

  auto t = in.payload.find("text");
  if (t == in.payload.end() || !t->is_string()) return reject("payload.text must be a string");
  if (!session.available(overseer::segment::kGateway)) return reject("gateway segment is restarting");
  sink({t->get<std::string>(), "console"});
  c.send(std::string(msg::kAck), ack);
}

void Server::Impl::shutdown() {
  stopped = true;
  beast::error_code ec;
  acceptor.close(ec);
  timer.cancel();
  const auto open = conns;
  for (const auto& c : open) c->close();
}

Server::Server(overseer::Session& session, const hal::ServoBus& bus, const hal::SimulatedDisplay& display,
               TranscriptSink sink, ServerOptions options) {
  if (!(options.active_hz > 0.0) || !(options.idle_hz > 0.0) || options.max_pending == 0) {
    throw Error(Errc::InvalidConfig, "gateway rates and queue bound must be positive");
  }
  impl_ = std::make_shared<Impl>(session, bus, display, std::move(sink), std::move(options));
  impl_->listen();
  std::weak_ptr<Impl> weak = impl_;
  session.subscribe([weak](const overseer::TimedEvent& e) {
    auto hub = weak.lock();
    if (!hub || hub->stopped) return;
    net::post(hub->ioc, [hub, env = broadcast_for(e)] {
      if (!hub->stopped) hub->broadcast(env);
    });
  });
  impl_->accept();
  impl_->schedule_tick();
  impl_->thread = std::thread([hub = impl_] { hub->ioc.run(); });
}

Server::~Server() { stop(); }

void Server::stop() {
  if (!impl_ || !impl_->thread.joinable()) return;
  net::post(impl_->ioc, [hub = impl_] { hub->shutdown(); });
  impl_->thread.join();
}

std::uint16_t Server::port() const noexcept { return impl_->port; }
std::size_t Server::connections() const { return impl_->n_connections; }
std::size_t Server::dropped() const { return impl_->n_dropped; }

nlohmann::json config_summary(const overseer::RuntimeConfig& config) {
  using Kind = overseer::TranscriptSourceSpec::Kind;
  std::string source = config.source.kind == Kind::Interactive ? "interactive"
                       : config.source.kind == Kind::Gateway   ? "gateway"
                                                               : "script:" + config.source.script.string();
  auto joints = nlohmann::json::array();
  for (const auto& s : config.body.servos) joints.push_back({{"name", s.id}, {"channel", s.channel}});
  return {{"bus", config.bus_type},
          {"jitter", config.jitter.kind == hal::JitterMode::Kind::HardwareTimed ? "hardware" : "software"},
          {"tick_s", config.tick},
          {"seed", config.seed},
          {"source", source},
          {"gait", gait::params_to_json(config.gait)},
          {"joints", std::move(joints)}};
}

}  // namespace humanoid::gateway
