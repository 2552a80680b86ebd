#include "twinops/edged/server.hpp"

#include <atomic>
#include <charconv>
#include <condition_variable>
#include <functional>
#include <list>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "twinops/error.hpp"

namespace twinops::edged {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

ListenAddress parse_listen_address(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) throw Error(Errc::InvalidArgument, "listen address must be host:port");
  ListenAddress out;
  const auto host = text.substr(0, colon);
  if (!host.empty()) out.host = std::string(host);
  const auto port = text.substr(colon + 1);
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (ec != std::errc{} || ptr != port.data() + port.size() || value > 65535) {
    throw Error(Errc::InvalidArgument, "bad port in '" + std::string(text) + "'");
  }
  out.port = static_cast<std::uint16_t>(value);
  return out;
}

namespace {

tcp::endpoint resolve_endpoint(const ListenAddress& addr) {
  boost::system::error_code ec;
  auto ip = asio::ip::make_address(addr.host == "localhost" ? "127.0.0.1" : addr.host, ec);
  if (ec) throw Error(Errc::BindFailure, "cannot parse listen host '" + addr.host + "'");
  return {ip, addr.port};
}

void open_acceptor(tcp::acceptor& acceptor, const ListenAddress& addr) {
  const auto ep = resolve_endpoint(addr);
  boost::system::error_code ec;
  acceptor.open(ep.protocol(), ec);
  if (!ec) acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  if (!ec) acceptor.bind(ep, ec);
  if (!ec) acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) {
    throw Error(Errc::BindFailure, addr.host + ":" + std::to_string(addr.port) + ": " + ec.message());
  }
}

// One length-prefixed stream connection served by a dedicated reader thread.
struct StreamConnection {
  explicit StreamConnection(tcp::socket s) : socket(std::move(s)) {}

  tcp::socket socket;
  std::mutex write_mu;
  std::thread reader;
  std::atomic<bool> done{false};

  void write_body(const std::string& body) {
    const std::string frame = encode_frame(body);
    std::lock_guard lock(write_mu);
    boost::system::error_code ec;
    asio::write(socket, asio::buffer(frame), ec);
  }

  void shutdown() {
    boost::system::error_code ec;
    socket.shutdown(tcp::socket::shutdown_both, ec);
  }
};

// WebSocket connection driven asynchronously on the server's io thread.
class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket socket, EdgeService& service) : ws_(std::move(socket)), service_(service) {}

  void start() {
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
  }

  void close() {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).shutdown(tcp::socket::shutdown_both, ec);
  }

 private:
  websocket::stream<tcp::socket> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outq_;
  EdgeService& service_;
  SessionId session_;
  bool open_ = false;

  void on_accept(beast::error_code ec) {
    if (ec) return;
    open_ = true;
    auto executor = ws_.get_executor();
    std::weak_ptr<WsConnection> weak = weak_from_this();
    session_ = service_.open_session([weak, executor](std::string body) {
      asio::post(executor, [weak, body = std::move(body)]() mutable {
        if (auto self = weak.lock()) self->enqueue(std::move(body));
      });
    });
    do_read();
  }

  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      open_ = false;
      service_.close_session(session_);
      return;
    }
    std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    try {
      service_.handle_frame(session_, text);
    } catch (const std::exception&) {
      open_ = false;
      service_.close_session(session_);
      close();
      return;
    }
    do_read();
  }

  void enqueue(std::string body) {
    if (!open_) return;
    outq_.push_back(std::move(body));
    if (outq_.size() == 1) do_write();
  }

  void do_write() {
    ws_.text(true);
    ws_.async_write(asio::buffer(outq_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->outq_.pop_front();
      if (!ec && !self->outq_.empty()) self->do_write();
    });
  }
};

}  // namespace

struct EdgeServer::Impl {
  ServerConfig config;
  asio::io_context io;
  tcp::acceptor stream_acceptor{io};
  std::optional<tcp::acceptor> ws_acceptor;
  std::function<void()> accept_stream;
  std::function<void()> accept_ws;
  std::thread io_thread;

  std::mutex conn_mu;
  std::list<std::shared_ptr<StreamConnection>> stream_conns;
  std::list<std::weak_ptr<WsConnection>> ws_conns;

  std::mutex stop_mu;
  std::condition_variable stop_cv;
  bool stopped = false;

  void reap_finished() {
    std::lock_guard lock(conn_mu);
    for (auto it = stream_conns.begin(); it != stream_conns.end();) {
      if ((*it)->done) {
        if ((*it)->reader.joinable()) (*it)->reader.join();
        it = stream_conns.erase(it);
      } else {
        ++it;
      }
    }
  }
};

EdgeServer::EdgeServer(std::shared_ptr<EdgeService> service, ServerConfig config)
    : service_(std::move(service)), impl_(std::make_unique<Impl>()) {
  if (!service_) throw Error(Errc::InvalidArgument, "server needs a service");
  impl_->config = std::move(config);
  open_acceptor(impl_->stream_acceptor, impl_->config.stream);
  if (impl_->config.websocket) {
    impl_->ws_acceptor.emplace(impl_->io);
    open_acceptor(*impl_->ws_acceptor, *impl_->config.websocket);
  }

  Impl* impl = impl_.get();
  EdgeService* svc = service_.get();

  impl->accept_stream = [impl, svc] {
    impl->stream_acceptor.async_accept([impl, svc](boost::system::error_code ec, tcp::socket socket) {
      if (ec) return;
      impl->reap_finished();
      socket.set_option(tcp::no_delay(true));
      auto conn = std::make_shared<StreamConnection>(std::move(socket));
      const std::uint32_t max_frame = impl->config.max_frame_bytes;
      conn->reader = std::thread([conn, svc, max_frame] {
        const SessionId sid = svc->open_session([conn](std::string body) { conn->write_body(body); });
        FrameDecoder decoder(max_frame);
        std::array<char, 64 * 1024> buf{};
        for (;;) {
          boost::system::error_code rec;
          const std::size_t n = conn->socket.read_some(asio::buffer(buf), rec);
          if (rec) break;
          decoder.feed(std::string_view(buf.data(), n));
          try {
            while (auto frame = decoder.next()) {
              if (frame->oversized) {
                svc->reject_frame(sid, "frame of " + std::to_string(frame->declared_length) + " bytes exceeds the limit");
              } else {
                svc->handle_frame(sid, frame->body);
              }
            }
          } catch (const std::exception&) {
            break;  // drop the connection rather than the process
          }
        }
        svc->close_session(sid);
        conn->shutdown();
        conn->done = true;
      });
      {
        std::lock_guard lock(impl->conn_mu);
        impl->stream_conns.push_back(conn);
      }
      impl->accept_stream();
    });
  };
  impl->accept_stream();

  if (impl_->ws_acceptor) {
    impl->accept_ws = [impl, svc] {
      impl->ws_acceptor->async_accept([impl, svc](boost::system::error_code ec, tcp::socket socket) {
        if (ec) return;
        auto conn = std::make_shared<WsConnection>(std::move(socket), *svc);
        {
          std::lock_guard lock(impl->conn_mu);
          impl->ws_conns.push_back(conn);
        }
        conn->start();
        impl->accept_ws();
      });
    };
    impl->accept_ws();
  }

  impl_->io_thread = std::thread([impl] { impl->io.run(); });
}

EdgeServer::~EdgeServer() { stop(); }

std::uint16_t EdgeServer::port() const { return impl_->stream_acceptor.local_endpoint().port(); }

std::optional<std::uint16_t> EdgeServer::websocket_port() const {
  if (!impl_->ws_acceptor) return std::nullopt;
  return impl_->ws_acceptor->local_endpoint().port();
}

void EdgeServer::stop() {
  {
    std::lock_guard lock(impl_->stop_mu);
    if (impl_->stopped) return;
    impl_->stopped = true;
  }
  asio::post(impl_->io, [impl = impl_.get()] {
    boost::system::error_code ec;
    impl->stream_acceptor.close(ec);
    if (impl->ws_acceptor) impl->ws_acceptor->close(ec);
    std::lock_guard lock(impl->conn_mu);
    for (auto& weak : impl->ws_conns) {
      if (auto c = weak.lock()) c->close();
    }
  });
  std::list<std::shared_ptr<StreamConnection>> conns;
  {
    std::lock_guard lock(impl_->conn_mu);
    conns = impl_->stream_conns;
  }
  for (auto& c : conns) c->shutdown();
  for (auto& c : conns) {
    if (c->reader.joinable()) c->reader.join();
  }
  // Give WebSocket handlers a moment to observe their closed sockets.
  auto guard = asio::make_work_guard(impl_->io);
  guard.reset();
  impl_->io.stop();
  if (impl_->io_thread.joinable()) impl_->io_thread.join();
  impl_->stop_cv.notify_all();
}

void EdgeServer::wait() {
  std::unique_lock lock(impl_->stop_mu);
  impl_->stop_cv.wait(lock, [&] { return impl_->stopped; });
}

struct EdgeClient::Impl {
  asio::io_context io;
  tcp::socket socket{io};
  FrameDecoder decoder;
};

EdgeClient::EdgeClient(const std::string& host, std::uint16_t port) : impl_(std::make_unique<Impl>()) {
  boost::system::error_code ec;
  tcp::resolver resolver(impl_->io);
  auto endpoints = resolver.resolve(host, std::to_string(port), ec);
  if (!ec) asio::connect(impl_->socket, endpoints, ec);
  if (ec) throw Error(Errc::IoError, "cannot connect to " + host + ":" + std::to_string(port) + ": " + ec.message());
  impl_->socket.set_option(tcp::no_delay(true));
}

EdgeClient::~EdgeClient() {
  boost::system::error_code ec;
  impl_->socket.shutdown(tcp::socket::shutdown_both, ec);
  impl_->socket.close(ec);
}

void EdgeClient::send_raw(std::string_view bytes) {
  boost::system::error_code ec;
  asio::write(impl_->socket, asio::buffer(bytes.data(), bytes.size()), ec);
  if (ec) throw Error(Errc::IoError, "send failed: " + ec.message());
}

Json EdgeClient::read_frame() {
  for (;;) {
    if (auto frame = impl_->decoder.next()) {
      if (frame->oversized) throw Error(Errc::MalformedFrame, "server sent an oversized frame");
      return Json::parse(frame->body);
    }
    std::array<char, 64 * 1024> buf{};
    boost::system::error_code ec;
    const std::size_t n = impl_->socket.read_some(asio::buffer(buf), ec);
    if (ec) throw Error(Errc::IoError, "connection closed: " + ec.message());
    impl_->decoder.feed(std::string_view(buf.data(), n));
  }
}

Json EdgeClient::request(const std::string& kind, const Json& payload) {
  const std::int64_t id = next_msg_id_++;
  const double send_ts = clock_();
  const Json envelope{{"msg_id", id}, {"kind", kind}, {"payload", payload}, {"client_send_ts_ms", send_ts}};
  send_raw(encode_frame(envelope.dump()));
  for (;;) {
    Json frame = read_frame();
    if (frame.value("kind", std::string{}) == "event") {
      events_.push_back(std::move(frame));
      continue;
    }
    if (frame.contains("msg_id") && frame.at("msg_id").is_null() && frame.value("kind", std::string{}) == "error") {
      // The server could not read our envelope, so no reply will carry our id.
      const auto& err = frame.at("error");
      throw Error(Errc::MalformedFrame, "request rejected: " + err.value("message", std::string{}));
    }
    if (!frame.contains("msg_id") || !frame.at("msg_id").is_number_integer() || frame.at("msg_id").get<std::int64_t>() != id) {
      continue;
    }
    const double recv_ts = clock_();
    last_latency_ = account_latency(id, {send_ts, recv_ts, frame.at("server_recv_ts_ms").get<double>(),
                                         frame.at("server_send_ts_ms").get<double>()});
    return frame;
  }
}

}  // namespace twinops::edged
