#include "infomarket/proxy.h"

#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <iostream>
#include <stdexcept>

#include "infomarket/http_message.h"
#include "infomarket/net.h"
#include "infomarket/records.h"

namespace infomarket::proxy {

namespace {

using http::HeaderList;

int64_t NowMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string SimpleResponse(int status, std::string_view reason,
                           std::string_view extra_headers = {}) {
  std::string body = std::to_string(status) + " " + std::string(reason) + "\n";
  return "HTTP/1.1 " + std::to_string(status) + " " + std::string(reason) +
         "\r\n" + std::string(extra_headers) +
         "Content-Type: text/plain\r\nContent-Length: " +
         std::to_string(body.size()) + "\r\nConnection: close\r\n\r\n" + body;
}

bool HasToken(const HeaderList& headers, std::string_view name,
              std::string_view token) {
  for (const std::string& t : http::HeaderTokens(headers, name)) {
    if (t == token)
      return true;
  }
  return false;
}

// Body framing of one message.
struct Framing {
  enum Kind { kNone, kFixed, kChunked, kUntilClose } kind = kNone;
  uint64_t length = 0;
};

std::optional<Framing> RequestFraming(const HeaderList& headers) {
  Framing f;
  if (http::HasHeader(headers, "Transfer-Encoding")) {
    if (!HasToken(headers, "Transfer-Encoding", "chunked"))
      return std::nullopt;
    f.kind = Framing::kChunked;
    return f;
  }
  if (const http::HeaderField* cl = http::FindHeader(headers, "Content-Length")) {
    try {
      size_t used = 0;
      f.length = std::stoull(cl->value, &used);
      if (used != cl->value.size())
        return std::nullopt;
    } catch (const std::exception&) {
      return std::nullopt;
    }
    f.kind = f.length > 0 ? Framing::kFixed : Framing::kNone;
  }
  return f;
}

std::optional<Framing> ResponseFraming(const std::string& method, int status,
                                       const HeaderList& headers) {
  if (method == "HEAD" || (status >= 100 && status < 200) || status == 204 ||
      status == 304) {
    return Framing{};
  }
  if (http::HasHeader(headers, "Transfer-Encoding")) {
    Framing f;
    f.kind = HasToken(headers, "Transfer-Encoding", "chunked")
                 ? Framing::kChunked
                 : Framing::kUntilClose;
    return f;
  }
  if (http::HasHeader(headers, "Content-Length"))
    return RequestFraming(headers);
  Framing f;
  f.kind = Framing::kUntilClose;
  return f;
}

bool RelayFixed(net::Reader& from, int to, uint64_t length) {
  std::string chunk;
  while (length > 0) {
    chunk.clear();
    if (!from.ReadUpTo(static_cast<size_t>(std::min<uint64_t>(length, 64 * 1024)),
                       &chunk)) {
      return false;
    }
    length -= chunk.size();
    if (!net::SendAll(to, chunk))
      return false;
  }
  return true;
}

// Copies a chunked body verbatim, chunk extensions and trailers included.
bool RelayChunked(net::Reader& from, int to) {
  for (;;) {
    std::string line;
    if (!from.ReadLine(&line))
      return false;
    const std::string size_text = line.substr(0, line.find(';'));
    uint64_t size = 0;
    try {
      size_t used = 0;
      size = std::stoull(size_text, &used, 16);
    } catch (const std::exception&) {
      return false;
    }
    if (!net::SendAll(to, line + "\r\n"))
      return false;
    if (size == 0) {
      for (;;) {
        std::string trailer;
        if (!from.ReadLine(&trailer) || !net::SendAll(to, trailer + "\r\n"))
          return false;
        if (trailer.empty())
          return true;
      }
    }
    if (!RelayFixed(from, to, size + 2))
      return false;
  }
}

bool RelayUntilClose(net::Reader& from, int to) {
  std::string chunk;
  while (from.ReadSome(&chunk)) {
    if (!net::SendAll(to, chunk))
      return false;
    chunk.clear();
  }
  return true;
}

bool RelayBody(net::Reader& from, int to, const Framing& f) {
  switch (f.kind) {
    case Framing::kNone:
      return true;
    case Framing::kFixed:
      return RelayFixed(from, to, f.length);
    case Framing::kChunked:
      return RelayChunked(from, to);
    case Framing::kUntilClose:
      return RelayUntilClose(from, to);
  }
  return false;
}

// Names of `names` present in `headers`, in the order given.
std::vector<std::string> PresentHeaders(const HeaderList& headers,
                                        const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const std::string& name : names) {
    if (http::HasHeader(headers, name))
      out.push_back(name);
  }
  return out;
}

// Splits "host:port" or "[v6]:port". Missing port gives `default_port`.
std::optional<Endpoint> ParseAuthority(std::string_view authority,
                                            int default_port) {
  Endpoint e;
  e.port = default_port;
  std::string_view rest;
  if (authority.starts_with("[")) {
    const size_t close = authority.find(']');
    if (close == std::string_view::npos)
      return std::nullopt;
    e.host = std::string(authority.substr(1, close - 1));
    rest = authority.substr(close + 1);
  } else {
    const size_t colon = authority.rfind(':');
    e.host = std::string(authority.substr(0, colon));
    if (colon != std::string_view::npos)
      rest = authority.substr(colon);
  }
  if (rest.starts_with(":")) {
    try {
      size_t used = 0;
      const std::string port(rest.substr(1));
      e.port = std::stoi(port, &used);
      if (used != port.size() || e.port <= 0 || e.port > 65535)
        return std::nullopt;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (e.host.empty())
    return std::nullopt;
  return e;
}

}  // namespace

ProxyServer::ProxyServer(ProxyConfig config, policy::PolicyState initial_state)
    : config_(std::move(config)) {
  auto snap = std::make_shared<PolicySnapshot>();
  snap->period = config_.initial_period;
  snap->state = std::move(initial_state);
  snapshot_ = std::move(snap);
}

ProxyServer::~ProxyServer() { Stop(); }

void ProxyServer::Start() {
  if (running_)
    return;
  net::Fd listen = net::ListenTcp(config_.listen_address, config_.listen_port,
                                  &port_);
  net::Fd control;
  if (config_.enable_control)
    control = net::ListenTcp("127.0.0.1", config_.control_port, &control_port_);
  listen_fd_ = listen.Release();
  control_fd_ = control.Release();
  running_ = true;
  accept_thread_ = std::thread([this] { AcceptLoop(); });
  if (control_fd_ >= 0)
    control_thread_ = std::thread([this] { ControlLoop(); });
}

void ProxyServer::Stop() {
  if (!running_.exchange(false))
    return;
  for (int* fd : {&listen_fd_, &control_fd_}) {
    if (*fd >= 0)
      ::shutdown(*fd, SHUT_RDWR);
  }
  if (accept_thread_.joinable())
    accept_thread_.join();
  if (control_thread_.joinable())
    control_thread_.join();
  for (int* fd : {&listen_fd_, &control_fd_}) {
    if (*fd >= 0)
      ::close(*fd);
    *fd = -1;
  }
  ReapWorkers(true);
}

void ProxyServer::ReapWorkers(bool all) {
  std::list<Worker> finished;
  {
    std::lock_guard<std::mutex> lock(workers_mu_);
    for (auto it = workers_.begin(); it != workers_.end();) {
      if (all || it->done->load()) {
        if (all)
          ::shutdown(it->fd, SHUT_RDWR);
        finished.splice(finished.end(), workers_, it++);
      } else {
        ++it;
      }
    }
  }
  for (Worker& w : finished) {
    w.thread.join();
    ::close(w.fd);
  }
}

void ProxyServer::AcceptLoop() {
  while (running_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR)
        continue;
      break;
    }
    ReapWorkers(false);
    if (!running_) {
      ::close(fd);
      break;
    }
    net::SetTimeouts(fd, config_.io_timeout_ms);
    auto done = std::make_shared<std::atomic<bool>>(false);
    std::lock_guard<std::mutex> lock(workers_mu_);
    workers_.push_back(Worker{std::thread([this, fd, done] {
                                HandleClient(fd);
                                done->store(true);
                              }),
                              fd, done});
  }
}

void ProxyServer::ControlLoop() {
  while (running_) {
    const int fd = ::accept(control_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR)
        continue;
      break;
    }
    net::SetTimeouts(fd, config_.io_timeout_ms);
    HandleControl(fd);
    ::close(fd);
  }
}

void ProxyServer::HandleControl(int fd) {
  net::Reader reader(fd);
  std::optional<GrantUpdate> pending;
  std::string line;
  while (reader.ReadLine(&line)) {
    std::string reply;
    if (line.empty())
      continue;
    if (line == "STATUS") {
      auto snap = snapshot();
      reply = "PERIOD " + std::to_string(snap->period) + " GRANTS " +
              std::to_string(snap->state.grants().size());
    } else if (line.starts_with("PERIOD ")) {
      try {
        size_t used = 0;
        const std::string n = line.substr(7);
        GrantUpdate u;
        u.period = std::stoll(n, &used);
        if (used != n.size())
          throw std::invalid_argument("trailing characters");
        pending = std::move(u);
        continue;
      } catch (const std::exception&) {
        reply = "ERR bad period line";
      }
    } else if (line == "COMMIT") {
      if (!pending) {
        reply = "ERR COMMIT without PERIOD";
      } else {
        std::string error;
        reply = ApplyGrants(*pending, &error)
                    ? "OK " + std::to_string(pending->period)
                    : "ERR " + error;
        pending.reset();
      }
    } else if (pending) {
      try {
        pending->grants.push_back(
            records::GrantFromJson(records::json::parse(line)));
        continue;
      } catch (const std::exception& e) {
        reply = std::string("ERR bad grant: ") + e.what();
        pending.reset();
      }
    } else {
      reply = "ERR unknown command";
    }
    if (!net::SendAll(fd, reply + "\n"))
      return;
  }
}

bool ProxyServer::ApplyGrants(const GrantUpdate& update, std::string* error) {
  auto next = std::make_shared<PolicySnapshot>();
  std::lock_guard<std::mutex> lock(snapshot_mu_);
  if (update.period <= snapshot_->period) {
    if (error)
      *error = "stale period " + std::to_string(update.period) +
               " (current " + std::to_string(snapshot_->period) + ")";
    return false;
  }
  try {
    next->state = snapshot_->state.WithGrants(update.grants);
  } catch (const std::exception& e) {
    if (error)
      *error = e.what();
    return false;
  }
  next->period = update.period;
  snapshot_ = std::move(next);
  return true;
}

std::shared_ptr<const PolicySnapshot> ProxyServer::snapshot() const {
  std::lock_guard<std::mutex> lock(snapshot_mu_);
  return snapshot_;
}

void ProxyServer::Log(const std::string& line) {
  std::lock_guard<std::mutex> lock(log_mu_);
  if (config_.log_sink)
    config_.log_sink(line);
  else
    std::cerr << line << '\n';
}

void ProxyServer::HandleClient(int client_fd) {
  net::Reader client(client_fd);

  struct Upstream {
    net::Fd fd;
    std::unique_ptr<net::Reader> reader;
  };
  std::map<std::string, Upstream> upstreams;  // "host:port"

  auto log_error = [this](const std::string& user, const std::string& detail) {
    records::json j;
    j["ts"] = NowMillis();
    j["user"] = user;
    j["event"] = "error";
    j["detail"] = detail;
    Log(j.dump());
  };

  while (running_) {
    std::string head_text;
    if (!client.ReadHead(&head_text))
      return;
    // Tolerate stray CRLFs between pipelined requests.
    while (head_text.starts_with("\r\n"))
      head_text.erase(0, 2);
    auto req = http::ParseRequestHead(head_text);
    if (!req) {
      log_error("", "malformed request head");
      net::SendAll(client_fd, SimpleResponse(400, "Bad Request"));
      return;
    }

    const http::HeaderField* auth =
        http::FindHeader(req->headers, "Proxy-Authorization");
    const std::optional<std::string> user =
        auth ? http::BasicAuthUser(auth->value) : std::nullopt;
    if (!user) {
      net::SendAll(client_fd,
                   SimpleResponse(407, "Proxy Authentication Required",
                                  "Proxy-Authenticate: Basic realm=\"infomarket\"\r\n"));
      return;
    }

    if (req->method == "CONNECT") {
      auto target = ParseAuthority(req->target, 443);
      net::Fd up;
      if (target) {
        Endpoint ep = *target;
        if (auto it = config_.resolve_overrides.find(
                policy::NormalizeHost(target->host));
            it != config_.resolve_overrides.end()) {
          ep = it->second;
        }
        up = net::ConnectTcp(ep.host, ep.port, config_.io_timeout_ms);
      }
      records::json j;
      j["ts"] = NowMillis();
      j["user"] = *user;
      j["host"] = target ? policy::NormalizeHost(target->host) : req->target;
      j["party"] = "tunnel";
      j["pass_tracking"] = false;
      j["stripped"] = records::json::array();
      if (!up.valid()) {
        j["status"] = 502;
        Log(j.dump());
        net::SendAll(client_fd, SimpleResponse(502, "Bad Gateway"));
        return;
      }
      j["status"] = 200;
      Log(j.dump());
      if (!net::SendAll(client_fd,
                        "HTTP/1.1 200 Connection Established\r\n\r\n"))
        return;
      if (client.has_buffered() && !net::SendAll(up.get(), client.TakeBuffered()))
        return;
      pollfd fds[2] = {{client_fd, POLLIN, 0}, {up.get(), POLLIN, 0}};
      char buf[16 * 1024];
      while (running_) {
        const int rc = ::poll(fds, 2, config_.io_timeout_ms);
        if (rc <= 0)
          return;
        for (int i = 0; i < 2; ++i) {
          if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR)))
            continue;
          const ssize_t n = ::recv(fds[i].fd, buf, sizeof(buf), 0);
          if (n <= 0 ||
              !net::SendAll(fds[1 - i].fd,
                            std::string_view(buf, static_cast<size_t>(n)))) {
            return;
          }
        }
      }
      return;
    }

    // Work out the origin and the origin-form target.
    std::string authority;
    std::string path = req->target;
    int default_port = 80;
    if (auto uri = http::ParseAbsoluteUri(req->target)) {
      if (uri->scheme != "http") {
        net::SendAll(client_fd, SimpleResponse(400, "Bad Request"));
        return;
      }
      authority = uri->authority;
      if (const size_t at = authority.rfind('@'); at != std::string::npos)
        authority.erase(0, at + 1);
      path = uri->path;
    } else if (const http::HeaderField* host =
                   http::FindHeader(req->headers, "Host")) {
      authority = host->value;
    }
    auto target = ParseAuthority(authority, default_port);
    auto framing = RequestFraming(req->headers);
    if (!target || !framing || !path.starts_with("/")) {
      log_error(*user, "unroutable request " + req->target);
      net::SendAll(client_fd, SimpleResponse(400, "Bad Request"));
      return;
    }
    const std::string host_name = policy::NormalizeHost(target->host);

    bool client_close =
        HasToken(req->headers, "Connection", "close") ||
        (req->version == "HTTP/1.0" &&
         !HasToken(req->headers, "Connection", "keep-alive") &&
         !HasToken(req->headers, "Proxy-Connection", "keep-alive"));

    // The whole transaction runs under one policy snapshot.
    const std::shared_ptr<const PolicySnapshot> snap = snapshot();
    const policy::RequestMeta meta =
        policy::RequestMeta::FromHeaders(*user, req->headers, authority);
    const policy::Decision decision = policy::Decide(
        meta, snap->state, snap->period, config_.cdn_allowlist);

    HeaderList out_headers = req->headers;
    http::StripHopByHop(out_headers);
    std::vector<std::string> stripped =
        PresentHeaders(out_headers, decision.strip_request);
    out_headers = policy::TransformRequest(out_headers, decision);
    if (!http::HasHeader(out_headers, "Host"))
      out_headers.insert(out_headers.begin(),
                         http::HeaderField::Make("Host", authority));
    const std::string upstream_head = req->method + " " + path + " HTTP/1.1\r\n" +
                                      http::SerializeHeaders(out_headers) +
                                      "\r\n";

    Endpoint ep = *target;
    if (auto it = config_.resolve_overrides.find(host_name);
        it != config_.resolve_overrides.end()) {
      ep = it->second;
    }
    const std::string key = ep.host + ":" + std::to_string(ep.port);

    records::json log;
    log["ts"] = NowMillis();
    log["user"] = *user;
    log["host"] = host_name;
    log["party"] = std::string(policy::PartyName(decision.party));
    log["pass_tracking"] = decision.pass_tracking;

    // Sends the head, reconnecting once if a kept-alive connection turned
    // out to be closed.
    Upstream* up = nullptr;
    for (int attempt = 0; attempt < 2 && !up; ++attempt) {
      auto it = upstreams.find(key);
      const bool reused = it != upstreams.end();
      if (!reused) {
        net::Fd fd = net::ConnectTcp(ep.host, ep.port, config_.io_timeout_ms);
        if (!fd.valid())
          break;
        auto reader = std::make_unique<net::Reader>(fd.get());
        it = upstreams.emplace(key, Upstream{std::move(fd), std::move(reader)})
                 .first;
      }
      if (net::SendAll(it->second.fd.get(), upstream_head)) {
        up = &it->second;
      } else {
        upstreams.erase(it);
        if (!reused)
          break;
      }
    }
    if (!up) {
      log["stripped"] = stripped;
      log["status"] = 502;
      Log(log.dump());
      net::SendAll(client_fd, SimpleResponse(502, "Bad Gateway"));
      if (framing->kind != Framing::kNone)
        return;
      continue;
    }
    if (!RelayBody(client, up->fd.get(), *framing)) {
      log_error(*user, "request body relay failed");
      return;
    }

    // Interim 1xx responses are passed through until the final one.
    std::optional<http::ResponseHead> resp;
    for (;;) {
      std::string resp_text;
      if (!up->reader->ReadHead(&resp_text))
        break;
      resp = http::ParseResponseHead(resp_text);
      if (!resp || resp->status >= 200 || resp->status == 101)
        break;
      net::SendAll(client_fd, resp_text + "\r\n\r\n");
      resp.reset();
    }
    if (!resp) {
      upstreams.erase(key);
      log["stripped"] = stripped;
      log["status"] = 502;
      Log(log.dump());
      net::SendAll(client_fd, SimpleResponse(502, "Bad Gateway"));
      return;
    }
    bool upstream_close =
        HasToken(resp->headers, "Connection", "close") ||
        (resp->version == "HTTP/1.0" &&
         !HasToken(resp->headers, "Connection", "keep-alive"));
    auto resp_framing = ResponseFraming(req->method, resp->status, resp->headers);
    if (!resp_framing) {
      upstreams.erase(key);
      log_error(*user, "bad response framing from " + host_name);
      net::SendAll(client_fd, SimpleResponse(502, "Bad Gateway"));
      return;
    }
    if (resp_framing->kind == Framing::kUntilClose) {
      upstream_close = true;
      client_close = true;
    }

    http::StripHopByHop(resp->headers);
    for (std::string& name : PresentHeaders(resp->headers, decision.strip_response))
      stripped.push_back(std::move(name));
    resp->headers = policy::TransformResponse(resp->headers, decision);
    if (client_close)
      resp->headers.push_back(http::HeaderField::Make("Connection", "close"));
    log["stripped"] = stripped;
    log["status"] = resp->status;

    const bool sent = net::SendAll(client_fd, http::SerializeResponseHead(*resp)) &&
                      RelayBody(*up->reader, client_fd, *resp_framing);
    Log(log.dump());
    if (upstream_close)
      upstreams.erase(key);
    if (!sent || client_close)
      return;
  }
}

std::string SendGrantUpdate(const std::string& host, int port,
                            const GrantUpdate& update, int timeout_ms) {
  net::Fd fd = net::ConnectTcp(host, port, timeout_ms);
  if (!fd.valid())
    return "ERR cannot connect to control endpoint";
  std::string msg = "PERIOD " + std::to_string(update.period) + "\n";
  for (const policy::Grant& g : update.grants)
    msg += records::ToJson(g).dump() + "\n";
  msg += "COMMIT\n";
  if (!net::SendAll(fd.get(), msg))
    return "ERR send failed";
  net::Reader reader(fd.get());
  std::string reply;
  if (!reader.ReadLine(&reply))
    return "ERR no reply";
  return reply;
}

}  // namespace infomarket::proxy
