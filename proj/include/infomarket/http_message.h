#ifndef INFOMARKET_HTTP_MESSAGE_H_
#define INFOMARKET_HTTP_MESSAGE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace infomarket::http {

// One header line. `raw` holds the line exactly as received (without CRLF),
// so untouched headers are re-emitted byte for byte.
struct HeaderField {
  std::string name;
  std::string value;
  std::string raw;

  static HeaderField Make(std::string name, std::string value);
  bool operator==(const HeaderField&) const = default;
};

using HeaderList = std::vector<HeaderField>;

bool HeaderNameEquals(std::string_view a, std::string_view b);

const HeaderField* FindHeader(const HeaderList& headers, std::string_view name);
std::vector<std::string> FindAllValues(const HeaderList& headers,
                                       std::string_view name);
bool HasHeader(const HeaderList& headers, std::string_view name);

// Removes every field named `name` (case-insensitive). Returns how many.
size_t RemoveHeaders(HeaderList& headers, std::string_view name);

// Header block as sent on the wire, each line CRLF-terminated, without the
// terminating blank line.
std::string SerializeHeaders(const HeaderList& headers);

struct RequestHead {
  std::string method;
  std::string target;
  std::string version;
  HeaderList headers;
};

struct ResponseHead {
  std::string version;
  int status = 0;
  std::string reason;
  HeaderList headers;
};

// Parses a head up to (not including) the blank line. Header lines must be
// "name: value"; obsolete line folding is rejected.
std::optional<RequestHead> ParseRequestHead(std::string_view text);
std::optional<ResponseHead> ParseResponseHead(std::string_view text);

std::string SerializeRequestHead(const RequestHead& head);
std::string SerializeResponseHead(const ResponseHead& head);

// Connection-scoped headers that a proxy must not forward: the fixed
// HTTP/1.1 set (minus Transfer-Encoding, which is relayed with the body
// framing) plus any listed in Connection.
bool IsHopByHop(std::string_view name, const HeaderList& headers);
void StripHopByHop(HeaderList& headers);

// Comma-separated, trimmed tokens of all fields named `name`, lowercased.
std::vector<std::string> HeaderTokens(const HeaderList& headers,
                                      std::string_view name);

// Parsed absolute-form target "http://host[:port]/path?query".
struct AbsoluteUri {
  std::string scheme;
  std::string host;
  int port = 80;
  std::string authority;  // as written
  std::string path;       // origin-form, at least "/"
};
std::optional<AbsoluteUri> ParseAbsoluteUri(std::string_view uri);

// Host of a URL such as a Referer value, or nullopt.
std::optional<std::string> UrlHost(std::string_view url);

std::optional<std::string> Base64Decode(std::string_view encoded);

// Username of a "Basic <b64(user:pass)>" credential.
std::optional<std::string> BasicAuthUser(std::string_view credential);

}  // namespace infomarket::http

#endif  // INFOMARKET_HTTP_MESSAGE_H_
