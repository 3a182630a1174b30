#ifndef INFOMARKET_TESTS_TEST_UTIL_H_
#define INFOMARKET_TESTS_TEST_UTIL_H_

#include <sys/socket.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "infomarket/http_message.h"
#include "infomarket/net.h"

namespace infomarket::testing_util {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("infomarket_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string Join(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

// Loopback HTTP origin. Every request head (and body, when framed by
// Content-Length) is recorded; the reply comes from `respond`.
class StubOrigin {
 public:
  using Responder = std::function<std::string(const std::string& head)>;

  explicit StubOrigin(Responder respond) : respond_(std::move(respond)) {
    listen_ = net::ListenTcp("127.0.0.1", 0, &port_);
    thread_ = std::thread([this] { Serve(); });
  }
  ~StubOrigin() {
    ::shutdown(listen_.get(), SHUT_RDWR);
    thread_.join();
    for (std::thread& t : conns_)
      t.join();
  }
  int port() const { return port_; }
  std::vector<std::string> heads() const {
    std::lock_guard<std::mutex> lock(mu_);
    return heads_;
  }
  std::vector<std::string> bodies() const {
    std::lock_guard<std::mutex> lock(mu_);
    return bodies_;
  }
  int connections() const { return connections_; }

 private:
  void Serve() {
    for (;;) {
      const int fd = ::accept(listen_.get(), nullptr, nullptr);
      if (fd < 0)
        return;
      ++connections_;
      conns_.emplace_back([this, fd] {
        net::Fd owned(fd);
        net::SetTimeouts(fd, 5000);
        net::Reader reader(fd);
        std::string head;
        while (reader.ReadHead(&head)) {
          std::string body;
          if (auto req = http::ParseRequestHead(head)) {
            if (const http::HeaderField* cl =
                    http::FindHeader(req->headers, "Content-Length")) {
              reader.ReadExact(std::stoul(cl->value), &body);
            }
          }
          {
            std::lock_guard<std::mutex> lock(mu_);
            heads_.push_back(head);
            bodies_.push_back(body);
          }
          if (!net::SendAll(fd, respond_(head)))
            return;
          head.clear();
        }
      });
    }
  }

  Responder respond_;
  net::Fd listen_;
  int port_ = 0;
  std::thread thread_;
  std::vector<std::thread> conns_;
  mutable std::mutex mu_;
  std::vector<std::string> heads_;
  std::vector<std::string> bodies_;
  std::atomic<int> connections_{0};
};

// Loopback server echoing raw bytes back on each connection.
class EchoServer {
 public:
  EchoServer() {
    listen_ = net::ListenTcp("127.0.0.1", 0, &port_);
    thread_ = std::thread([this] {
      for (;;) {
        const int fd = ::accept(listen_.get(), nullptr, nullptr);
        if (fd < 0)
          return;
        net::Fd owned(fd);
        net::SetTimeouts(fd, 5000);
        net::Reader reader(fd);
        std::string data;
        while (reader.ReadSome(&data)) {
          if (!net::SendAll(fd, data))
            break;
          data.clear();
        }
      }
    });
  }
  ~EchoServer() {
    ::shutdown(listen_.get(), SHUT_RDWR);
    thread_.join();
  }
  int port() const { return port_; }

 private:
  net::Fd listen_;
  int port_ = 0;
  std::thread thread_;
};

// Full response read off `fd`: head (without the blank line) and a body
// framed by Content-Length, or everything until EOF otherwise.
struct RawResponse {
  std::string head;
  std::string body;
  bool ok = false;
};

inline RawResponse ReadResponse(net::Reader& reader) {
  RawResponse r;
  if (!reader.ReadHead(&r.head))
    return r;
  auto parsed = http::ParseResponseHead(r.head);
  if (!parsed)
    return r;
  if (const http::HeaderField* cl = http::FindHeader(parsed->headers, "Content-Length")) {
    r.ok = reader.ReadExact(std::stoul(cl->value), &r.body);
  } else {
    while (reader.ReadSome(&r.body)) {
    }
    r.ok = true;
  }
  return r;
}

inline std::string HttpResponse(const std::string& status_line,
                                const std::string& headers,
                                const std::string& body) {
  return status_line + "\r\n" + headers + "Content-Length: " +
         std::to_string(body.size()) + "\r\n\r\n" + body;
}

}  // namespace infomarket::testing_util

#endif  // INFOMARKET_TESTS_TEST_UTIL_H_
