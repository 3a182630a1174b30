#ifndef INFOMARKET_NET_H_
#define INFOMARKET_NET_H_

#include <cstdint>
#include <string>
#include <string_view>

// Thin blocking POSIX socket helpers.
namespace infomarket::net {

// Owning file descriptor.
class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() { Reset(); }
  Fd(Fd&& o) noexcept : fd_(o.Release()) {}
  Fd& operator=(Fd&& o) noexcept {
    if (this != &o)
      Reset(o.Release());
    return *this;
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;

  int get() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int Release() {
    int fd = fd_;
    fd_ = -1;
    return fd;
  }
  void Reset(int fd = -1);

 private:
  int fd_ = -1;
};

// Listening TCP socket on address:port (port 0 = ephemeral). Throws
// std::runtime_error on failure. `bound_port` receives the actual port.
Fd ListenTcp(const std::string& address, int port, int* bound_port);

// Connected socket, or an invalid Fd. Connect and I/O are bounded by
// timeout_ms.
Fd ConnectTcp(const std::string& host, int port, int timeout_ms);

void SetTimeouts(int fd, int timeout_ms);

bool SendAll(int fd, std::string_view data);

// Buffered reader over a socket.
class Reader {
 public:
  explicit Reader(int fd) : fd_(fd) {}

  // Reads through the blank line ending an HTTP head. Returns the head
  // without the final CRLFCRLF. False on EOF, error, or a head above
  // `max_bytes`.
  bool ReadHead(std::string* head, size_t max_bytes = 64 * 1024);
  // One line without its CRLF or LF. False on EOF before any byte.
  bool ReadLine(std::string* line, size_t max_bytes = 64 * 1024);
  // Exactly n bytes, appended.
  bool ReadExact(size_t n, std::string* out);
  // Whatever is available (buffered first); false on EOF or error.
  bool ReadSome(std::string* out);
  // Like ReadSome but consumes at most n bytes.
  bool ReadUpTo(size_t n, std::string* out);

  // Bytes received but not yet consumed.
  std::string TakeBuffered();
  bool has_buffered() const { return !buf_.empty(); }

 private:
  bool Fill();
  int fd_;
  std::string buf_;
};

}  // namespace infomarket::net

#endif  // INFOMARKET_NET_H_
