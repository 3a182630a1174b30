#ifndef INFOMARKET_PROXY_H_
#define INFOMARKET_PROXY_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "infomarket/policy.h"

// HTTP/1.1 forward proxy applying the tracking policy to every transaction.
//
// Clients authenticate with Basic proxy credentials; the username is the
// user id. Plain requests are forwarded with hop-by-hop headers removed and
// tracking headers stripped as the policy decides. CONNECT is tunnelled
// without inspection. Upstream connections are kept alive per client
// connection.
//
// Grant updates arrive on a loopback control port, one session per update:
//   PERIOD <n>
//   {"user": ..., "aggregator": ..., "period": ...}   (zero or more lines)
//   COMMIT
// answered with "OK <n>" or "ERR <reason>". "STATUS" answers
// "PERIOD <n> GRANTS <k>". An update replaces the whole grant table and
// must carry a period above the current one.
namespace infomarket::proxy {

struct Endpoint {
  std::string host;
  int port = 0;
};

struct ProxyConfig {
  std::string listen_address = "127.0.0.1";
  int listen_port = 0;  // 0 picks a free port
  bool enable_control = true;
  int control_port = 0;
  std::set<std::string> cdn_allowlist;
  // Host name (lowercase, no port) -> where to connect instead of DNS.
  std::map<std::string, Endpoint> resolve_overrides;
  int io_timeout_ms = 10000;
  int64_t initial_period = 0;
  // Receives one JSON object per line, without the newline. Defaults to
  // stderr. Called from connection threads, serialized by the server.
  std::function<void(const std::string&)> log_sink;
};

struct GrantUpdate {
  int64_t period = 0;
  std::vector<policy::Grant> grants;
};

// Policy table plus the period decisions are made in. Immutable once
// published; connections hold a reference for the length of a
// transaction.
struct PolicySnapshot {
  int64_t period = 0;
  policy::PolicyState state;
};

class ProxyServer {
 public:
  ProxyServer(ProxyConfig config, policy::PolicyState initial_state);
  ~ProxyServer();

  ProxyServer(const ProxyServer&) = delete;
  ProxyServer& operator=(const ProxyServer&) = delete;

  // Binds both ports and starts serving. Throws std::runtime_error when a
  // port cannot be bound.
  void Start();
  // Closes listeners and client connections and joins every thread.
  void Stop();

  int port() const { return port_; }
  int control_port() const { return control_port_; }

  // Atomically replaces the grant table. Returns false (and sets `error`)
  // when update.period is not above the current period.
  bool ApplyGrants(const GrantUpdate& update, std::string* error = nullptr);

  std::shared_ptr<const PolicySnapshot> snapshot() const;
  int64_t period() const { return snapshot()->period; }

 private:
  struct Worker {
    std::thread thread;
    int fd = -1;
    std::shared_ptr<std::atomic<bool>> done;
  };

  void AcceptLoop();
  void ControlLoop();
  void HandleClient(int fd);
  void HandleControl(int fd);
  void ReapWorkers(bool all);
  void Log(const std::string& line);

  ProxyConfig config_;
  std::atomic<bool> running_{false};
  int listen_fd_ = -1;
  int control_fd_ = -1;
  int port_ = 0;
  int control_port_ = 0;
  std::thread accept_thread_;
  std::thread control_thread_;

  mutable std::mutex snapshot_mu_;
  std::shared_ptr<const PolicySnapshot> snapshot_;

  std::mutex workers_mu_;
  std::list<Worker> workers_;

  std::mutex log_mu_;
};

// Client side of the control protocol. Returns the server's reply line, or
// "ERR ..." describing a connection failure.
std::string SendGrantUpdate(const std::string& host, int port,
                            const GrantUpdate& update, int timeout_ms = 5000);

}  // namespace infomarket::proxy

#endif  // INFOMARKET_PROXY_H_
