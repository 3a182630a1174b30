#include "infomarket/net.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace infomarket::net {

void Fd::Reset(int fd) {
  if (fd_ >= 0)
    ::close(fd_);
  fd_ = fd;
}

void SetTimeouts(int fd, int timeout_ms) {
  timeval tv{};
  tv.tv_sec = timeout_ms / 1000;
  tv.tv_usec = (timeout_ms % 1000) * 1000;
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

Fd ListenTcp(const std::string& address, int port, int* bound_port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE | AI_NUMERICSERV;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(address.empty() ? nullptr : address.c_str(),
                             service.c_str(), &hints, &res);
      rc != 0) {
    throw std::runtime_error("cannot resolve listen address " + address + ": " +
                             ::gai_strerror(rc));
  }
  Fd fd;
  std::string last_error = "no address";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    Fd s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
    if (!s.valid())
      continue;
    int one = 1;
    ::setsockopt(s.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(s.get(), ai->ai_addr, ai->ai_addrlen) == 0 &&
        ::listen(s.get(), 128) == 0) {
      fd = std::move(s);
      break;
    }
    last_error = std::strerror(errno);
  }
  ::freeaddrinfo(res);
  if (!fd.valid())
    throw std::runtime_error("cannot listen on " + address + ":" + service +
                             ": " + last_error);
  sockaddr_storage ss{};
  socklen_t len = sizeof(ss);
  ::getsockname(fd.get(), reinterpret_cast<sockaddr*>(&ss), &len);
  if (bound_port) {
    *bound_port = ss.ss_family == AF_INET6
                      ? ntohs(reinterpret_cast<sockaddr_in6*>(&ss)->sin6_port)
                      : ntohs(reinterpret_cast<sockaddr_in*>(&ss)->sin_port);
  }
  return fd;
}

Fd ConnectTcp(const std::string& host, int port, int timeout_ms) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_NUMERICSERV;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &res) != 0)
    return Fd();
  Fd fd;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    Fd s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
    if (!s.valid())
      continue;
    // SO_SNDTIMEO also bounds connect() on Linux.
    SetTimeouts(s.get(), timeout_ms);
    if (::connect(s.get(), ai->ai_addr, ai->ai_addrlen) == 0) {
      int one = 1;
      ::setsockopt(s.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      fd = std::move(s);
      break;
    }
  }
  ::freeaddrinfo(res);
  return fd;
}

bool SendAll(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR)
      continue;
    if (n <= 0)
      return false;
    data.remove_prefix(static_cast<size_t>(n));
  }
  return true;
}

bool Reader::Fill() {
  char chunk[16 * 1024];
  for (;;) {
    const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR)
      continue;
    if (n <= 0)
      return false;
    buf_.append(chunk, static_cast<size_t>(n));
    return true;
  }
}

bool Reader::ReadHead(std::string* head, size_t max_bytes) {
  size_t scanned = 0;
  for (;;) {
    const size_t start = scanned >= 3 ? scanned - 3 : 0;
    const size_t pos = buf_.find("\r\n\r\n", start);
    if (pos != std::string::npos) {
      head->assign(buf_, 0, pos);
      buf_.erase(0, pos + 4);
      return true;
    }
    scanned = buf_.size();
    if (buf_.size() > max_bytes || !Fill())
      return false;
  }
}

bool Reader::ReadLine(std::string* line, size_t max_bytes) {
  for (;;) {
    const size_t pos = buf_.find('\n');
    if (pos != std::string::npos) {
      line->assign(buf_, 0, pos);
      buf_.erase(0, pos + 1);
      if (!line->empty() && line->back() == '\r')
        line->pop_back();
      return true;
    }
    if (buf_.size() > max_bytes)
      return false;
    if (!Fill()) {
      if (buf_.empty())
        return false;
      *line = std::move(buf_);
      buf_.clear();
      return true;
    }
  }
}

bool Reader::ReadExact(size_t n, std::string* out) {
  while (buf_.size() < n) {
    if (!Fill())
      return false;
  }
  out->append(buf_, 0, n);
  buf_.erase(0, n);
  return true;
}

bool Reader::ReadSome(std::string* out) {
  if (buf_.empty() && !Fill())
    return false;
  out->append(buf_);
  buf_.clear();
  return true;
}

bool Reader::ReadUpTo(size_t n, std::string* out) {
  if (buf_.empty() && !Fill())
    return false;
  const size_t take = std::min(n, buf_.size());
  out->append(buf_, 0, take);
  buf_.erase(0, take);
  return true;
}

std::string Reader::TakeBuffered() {
  std::string out = std::move(buf_);
  buf_.clear();
  return out;
}

}  // namespace infomarket::net
