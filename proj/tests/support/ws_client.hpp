#pragma once

#include <chrono>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <nlohmann/json.hpp>

namespace test_util {

/// Blocking WebSocket client that collects every frame on a reader thread.
class WsClient {
 public:
  using tcp = boost::asio::ip::tcp;

  /// `receive_buffer` > 0 shrinks SO_RCVBUF; `read` = false never reads,
  /// which is how a stalled console looks to the server.
  explicit WsClient(std::uint16_t port, bool read = true, int receive_buffer = 0) : ws_(ioc_) {
    auto& sock = ws_.next_layer();
    sock.open(tcp::v4());
    if (receive_buffer > 0) sock.set_option(boost::asio::socket_base::receive_buffer_size(receive_buffer));
    sock.connect({boost::asio::ip::make_address("127.0.0.1"), port});
    ws_.handshake("127.0.0.1", "/");
    ws_.text(true);
    if (read) reader_ = std::thread([this] { read_loop(); });
  }

  ~WsClient() { close(); }

  void send(const nlohmann::json& j) {
    std::lock_guard lock(write_mutex_);
    ws_.write(boost::asio::buffer(j.dump()));
  }
  void send_text(const std::string& text) {
    std::lock_guard lock(write_mutex_);
    ws_.write(boost::asio::buffer(text));
  }

  std::vector<nlohmann::json> frames() const {
    std::lock_guard lock(mutex_);
    return frames_;
  }

  bool open() const {
    std::lock_guard lock(mutex_);
    return open_;
  }

  /// Waits until `pred(frames)` holds; false on timeout.
  bool wait_for(const std::function<bool(const std::vector<nlohmann::json>&)>& pred,
                std::chrono::milliseconds timeout = std::chrono::seconds(5)) {
    std::unique_lock lock(mutex_);
    return cv_.wait_for(lock, timeout, [&] { return pred(frames_); });
  }

  /// First frame of the given type at or after index `from`.
  std::optional<nlohmann::json> find(const std::string& type, std::size_t from = 0) const {
    std::lock_guard lock(mutex_);
    for (std::size_t i = from; i < frames_.size(); ++i) {
      if (frames_[i]["type"] == type) return std::optional<nlohmann::json>(std::in_place, frames_[i]);
    }
    return std::nullopt;
  }

  std::size_t count(const std::string& type) const {
    std::lock_guard lock(mutex_);
    return static_cast<std::size_t>(
        std::count_if(frames_.begin(), frames_.end(), [&](const auto& f) { return f["type"] == type; }));
  }

  void close() {
    boost::system::error_code ec;
    ws_.next_layer().shutdown(tcp::socket::shutdown_both, ec);
    if (reader_.joinable()) reader_.join();
    ws_.next_layer().close(ec);
  }

 private:
  void read_loop() {
    for (;;) {
      boost::beast::flat_buffer buffer;
      boost::system::error_code ec;
      ws_.read(buffer, ec);
      std::lock_guard lock(mutex_);
      if (ec) {
        open_ = false;
        cv_.notify_all();
        return;
      }
      frames_.push_back(nlohmann::json::parse(boost::beast::buffers_to_string(buffer.data())));
      cv_.notify_all();
    }
  }

  boost::asio::io_context ioc_;
  boost::beast::websocket::stream<tcp::socket> ws_;
  std::thread reader_;
  std::mutex write_mutex_;
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::vector<nlohmann::json> frames_;
  bool open_ = true;
};

}  // namespace test_util
