// Copyright (c) 2026 The emics authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EMICS__GATEWAY__SERVER_HPP_
#define EMICS__GATEWAY__SERVER_HPP_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <utility>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "emics/gateway/live_session.hpp"

namespace emics::gateway
{

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

struct ServerConfig
{
  unsigned short port{0};          // 0 picks a free port
  double realtime_factor{1.0};     // 2.0 runs ticks twice as fast; 0 as fast as possible
  std::size_t max_queued_frames{32};
};

/// WebSocket endpoint for one LiveSession. Network I/O runs on one thread,
/// the simulation on another; they meet only in the session's command queue
/// and in posted outbound messages.
class GatewayServer
{
public:
  GatewayServer(LiveSession & session, ServerConfig cfg = {})
  : session_(session), cfg_(cfg), acceptor_(ioc_, {net::ip::make_address("127.0.0.1"), cfg.port})
  {
  }

  GatewayServer(const GatewayServer &) = delete;
  GatewayServer & operator=(const GatewayServer &) = delete;

  ~GatewayServer() { stop(); }

  unsigned short port() const { return acceptor_.local_endpoint().port(); }

  /// Accepts on a background thread; the simulation starts with the first
  /// connection.
  void start()
  {
    do_accept();
    io_thread_ = std::thread([this] { ioc_.run(); });
    sim_thread_ = std::thread([this] { simulate(); });
  }

  /// Blocks until the run has ended and the last client was closed.
  void wait()
  {
    if (sim_thread_.joinable()) sim_thread_.join();
    if (io_thread_.joinable()) io_thread_.join();
  }

  void stop()
  {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      stopping_ = true;
    }
    cv_.notify_all();
    ioc_.stop();
    wait();
  }

  /// Called on the simulation thread after every tick.
  void on_tick(std::function<void(const TickOutput &)> cb) { tick_cb_ = std::move(cb); }

private:
  struct Outgoing
  {
    std::string text;
    bool droppable;
  };

  class Connection : public std::enable_shared_from_this<Connection>
  {
  public:
    Connection(GatewayServer & server, tcp::socket socket)
    : server_(server), ws_(std::move(socket))
    {
    }

    void start(bool refuse)
    {
      ws_.text(true);
      ws_.async_accept([self = shared_from_this(), refuse](beast::error_code ec) {
        if (ec) return;
        if (refuse) {
          self->refuse();
        } else {
          self->server_.attach(self);
          self->read();
        }
      });
    }

    void send(std::string text, bool droppable)
    {
      if (closing_) return;
      if (droppable) {
        std::size_t frames = 0;
        for (const auto & o : outbox_) frames += o.droppable ? 1 : 0;
        if (frames >= server_.cfg_.max_queued_frames) {
          for (auto it = outbox_.begin() + (writing_ ? 1 : 0); it != outbox_.end(); ++it) {
            if (it->droppable) {
              outbox_.erase(it);
              break;
            }
          }
        }
      }
      outbox_.push_back({std::move(text), droppable});
      if (!writing_) write();
    }

    void close_when_flushed(websocket::close_reason why)
    {
      close_reason_ = std::move(why);
      close_pending_ = true;
      if (!writing_) close();
    }

  private:
    void refuse()
    {
      send(error_message("another operator is already connected").dump(), false);
      close_when_flushed({websocket::close_code::try_again_later, "another operator is already connected"});
    }

    void read()
    {
      ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
        if (ec) {
          self->server_.detach(self);
          return;
        }
        const std::string text = beast::buffers_to_string(self->buffer_.data());
        self->buffer_.consume(self->buffer_.size());
        if (auto reply = self->server_.session_.submit(text)) {
          self->send(std::move(*reply), false);
        }
        self->read();
      });
    }

    void write()
    {
      writing_ = true;
      ws_.async_write(
        net::buffer(outbox_.front().text), [self = shared_from_this()](beast::error_code ec, std::size_t) {
          self->outbox_.pop_front();
          self->writing_ = false;
          if (ec) {
            self->server_.detach(self);
            return;
          }
          if (!self->outbox_.empty()) {
            self->write();
          } else if (self->close_pending_) {
            self->close();
          }
        });
    }

    void close()
    {
      if (closing_) return;
      closing_ = true;
      ws_.async_close(close_reason_, [self = shared_from_this()](beast::error_code) {
        self->server_.closed(self);
      });
    }

    GatewayServer & server_;
    websocket::stream<beast::tcp_stream> ws_;
    beast::flat_buffer buffer_;
    std::deque<Outgoing> outbox_;
    bool writing_{false};
    bool close_pending_{false};
    bool closing_{false};
    websocket::close_reason close_reason_{websocket::close_code::normal};
  };

  void do_accept()
  {
    acceptor_.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      const bool refuse = active_ != nullptr || finished_;
      std::make_shared<Connection>(*this, std::move(socket))->start(refuse);
      do_accept();
    });
  }

  // The handlers below run on the I/O thread.

  void attach(const std::shared_ptr<Connection> & c)
  {
    if (active_ || finished_) {
      c->close_when_flushed({websocket::close_code::try_again_later, "another operator is already connected"});
      return;
    }
    active_ = c;
    session_.reconnect();
    c->send(session_.map_text(), false);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      connected_ = true;
    }
    cv_.notify_all();
  }

  void detach(const std::shared_ptr<Connection> & c)
  {
    if (active_ == c) {
      active_.reset();
      session_.disconnect();
    }
  }

  void closed(const std::shared_ptr<Connection> & c)
  {
    if (active_ == c) {
      active_.reset();
    }
    if (finished_) {
      acceptor_.close();
      ioc_.stop();
    }
  }

  void publish(TickOutput out)
  {
    net::post(ioc_, [this, out = std::move(out)]() mutable {
      if (active_) {
        for (auto & m : out.messages) {
          const bool is_frame = &m == &out.messages.front();
          active_->send(std::move(m), is_frame);
        }
      }
      if (out.finished) {
        finished_ = true;
        if (active_) {
          active_->close_when_flushed({websocket::close_code::normal, "run finished"});
        } else {
          acceptor_.close();
          ioc_.stop();
        }
      }
    });
  }

  void simulate()
  {
    {
      std::unique_lock<std::mutex> lock(mutex_);
      cv_.wait(lock, [this] { return connected_ || stopping_; });
      if (stopping_) return;
    }
    using clock = std::chrono::steady_clock;
    const auto period = cfg_.realtime_factor > 0.0
                          ? std::chrono::duration_cast<clock::duration>(
                              std::chrono::duration<double>(session_.world().dt() / cfg_.realtime_factor))
                          : clock::duration::zero();
    auto next = clock::now();
    while (true) {
      {
        std::lock_guard<std::mutex> lock(mutex_);
        if (stopping_) return;
      }
      TickOutput out = session_.tick();
      if (tick_cb_) tick_cb_(out);
      const bool done = out.finished;
      publish(std::move(out));
      if (done) return;
      next += period;
      std::this_thread::sleep_until(next);
    }
  }

  LiveSession & session_;
  ServerConfig cfg_;
  net::io_context ioc_;
  tcp::acceptor acceptor_;
  std::shared_ptr<Connection> active_;  // I/O thread only
  bool finished_{false};                // I/O thread only
  std::function<void(const TickOutput &)> tick_cb_;

  std::mutex mutex_;
  std::condition_variable cv_;
  bool connected_{false};
  bool stopping_{false};

  std::thread io_thread_;
  std::thread sim_thread_;
};

}  // namespace emics::gateway

#endif  // EMICS__GATEWAY__SERVER_HPP_
