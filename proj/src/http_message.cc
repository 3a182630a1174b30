#include "infomarket/http_message.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>

namespace infomarket::http {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  return s;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsTokenChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) ||
         std::string_view("!#$%&'*+-.^_`|~").find(c) != std::string_view::npos;
}

// Splits `text` into CRLF (or bare LF) separated lines.
std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (line.ends_with("\r"))
      line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

std::optional<HeaderList> ParseHeaderLines(
    const std::vector<std::string_view>& lines) {
  HeaderList headers;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty())
      break;
    if (line.front() == ' ' || line.front() == '\t')
      return std::nullopt;
    const size_t colon = line.find(':');
    if (colon == std::string_view::npos || colon == 0)
      return std::nullopt;
    const std::string_view name = line.substr(0, colon);
    if (!std::all_of(name.begin(), name.end(), IsTokenChar))
      return std::nullopt;
    HeaderField field;
    field.name = std::string(name);
    field.value = std::string(Trim(line.substr(colon + 1)));
    field.raw = std::string(line);
    headers.push_back(std::move(field));
  }
  return headers;
}

}  // namespace

HeaderField HeaderField::Make(std::string name, std::string value) {
  HeaderField f;
  f.raw = name + ": " + value;
  f.name = std::move(name);
  f.value = std::move(value);
  return f;
}

bool HeaderNameEquals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

const HeaderField* FindHeader(const HeaderList& headers,
                              std::string_view name) {
  for (const HeaderField& f : headers) {
    if (HeaderNameEquals(f.name, name))
      return &f;
  }
  return nullptr;
}

std::vector<std::string> FindAllValues(const HeaderList& headers,
                                       std::string_view name) {
  std::vector<std::string> out;
  for (const HeaderField& f : headers) {
    if (HeaderNameEquals(f.name, name))
      out.push_back(f.value);
  }
  return out;
}

bool HasHeader(const HeaderList& headers, std::string_view name) {
  return FindHeader(headers, name) != nullptr;
}

size_t RemoveHeaders(HeaderList& headers, std::string_view name) {
  const size_t before = headers.size();
  std::erase_if(headers, [name](const HeaderField& f) {
    return HeaderNameEquals(f.name, name);
  });
  return before - headers.size();
}

std::string SerializeHeaders(const HeaderList& headers) {
  std::string out;
  for (const HeaderField& f : headers) {
    out += f.raw.empty() ? f.name + ": " + f.value : f.raw;
    out += "\r\n";
  }
  return out;
}

std::optional<RequestHead> ParseRequestHead(std::string_view text) {
  const std::vector<std::string_view> lines = Lines(text);
  if (lines.empty())
    return std::nullopt;
  const std::string_view start = lines[0];
  const size_t sp1 = start.find(' ');
  const size_t sp2 = start.rfind(' ');
  if (sp1 == std::string_view::npos || sp1 == sp2)
    return std::nullopt;
  RequestHead head;
  head.method = std::string(start.substr(0, sp1));
  head.target = std::string(start.substr(sp1 + 1, sp2 - sp1 - 1));
  head.version = std::string(start.substr(sp2 + 1));
  if (head.method.empty() || head.target.empty() ||
      !head.version.starts_with("HTTP/1.") ||
      !std::all_of(head.method.begin(), head.method.end(), IsTokenChar)) {
    return std::nullopt;
  }
  auto headers = ParseHeaderLines(lines);
  if (!headers)
    return std::nullopt;
  head.headers = std::move(*headers);
  return head;
}

std::optional<ResponseHead> ParseResponseHead(std::string_view text) {
  const std::vector<std::string_view> lines = Lines(text);
  if (lines.empty())
    return std::nullopt;
  const std::string_view start = lines[0];
  const size_t sp1 = start.find(' ');
  if (sp1 == std::string_view::npos)
    return std::nullopt;
  ResponseHead head;
  head.version = std::string(start.substr(0, sp1));
  if (!head.version.starts_with("HTTP/1."))
    return std::nullopt;
  std::string_view rest = start.substr(sp1 + 1);
  const size_t sp2 = rest.find(' ');
  const std::string_view code = rest.substr(0, sp2);
  if (code.size() != 3)
    return std::nullopt;
  auto [ptr, ec] = std::from_chars(code.data(), code.data() + code.size(),
                                   head.status);
  if (ec != std::errc() || ptr != code.data() + code.size())
    return std::nullopt;
  if (sp2 != std::string_view::npos)
    head.reason = std::string(rest.substr(sp2 + 1));
  auto headers = ParseHeaderLines(lines);
  if (!headers)
    return std::nullopt;
  head.headers = std::move(*headers);
  return head;
}

std::string SerializeRequestHead(const RequestHead& head) {
  return head.method + " " + head.target + " " + head.version + "\r\n" +
         SerializeHeaders(head.headers) + "\r\n";
}

std::string SerializeResponseHead(const ResponseHead& head) {
  return head.version + " " + std::to_string(head.status) + " " +
         head.reason + "\r\n" + SerializeHeaders(head.headers) + "\r\n";
}

std::vector<std::string> HeaderTokens(const HeaderList& headers,
                                      std::string_view name) {
  std::vector<std::string> tokens;
  for (const std::string& value : FindAllValues(headers, name)) {
    std::string_view v = value;
    while (!v.empty()) {
      const size_t comma = v.find(',');
      const std::string_view token = Trim(v.substr(0, comma));
      if (!token.empty())
        tokens.push_back(Lower(token));
      if (comma == std::string_view::npos)
        break;
      v.remove_prefix(comma + 1);
    }
  }
  return tokens;
}

bool IsHopByHop(std::string_view name, const HeaderList& headers) {
  static constexpr std::string_view kFixed[] = {
      "connection", "keep-alive",          "proxy-authorization",
      "proxy-authenticate", "proxy-connection", "te",
      "trailer",    "upgrade"};
  const std::string lower = Lower(name);
  for (std::string_view f : kFixed) {
    if (lower == f)
      return true;
  }
  for (const std::string& token : HeaderTokens(headers, "Connection")) {
    if (token == lower && token != "transfer-encoding")
      return true;
  }
  return false;
}

void StripHopByHop(HeaderList& headers) {
  const HeaderList original = headers;
  std::erase_if(headers, [&](const HeaderField& f) {
    return IsHopByHop(f.name, original);
  });
}

std::optional<AbsoluteUri> ParseAbsoluteUri(std::string_view uri) {
  const size_t scheme_end = uri.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0)
    return std::nullopt;
  AbsoluteUri out;
  out.scheme = Lower(uri.substr(0, scheme_end));
  std::string_view rest = uri.substr(scheme_end + 3);
  const size_t path_start = rest.find_first_of("/?#");
  out.authority = std::string(rest.substr(0, path_start));
  out.path = path_start == std::string_view::npos
                 ? "/"
                 : std::string(rest.substr(path_start));
  if (out.path.front() != '/')
    out.path = "/" + out.path;
  std::string_view authority = out.authority;
  if (const size_t at = authority.rfind('@'); at != std::string_view::npos)
    authority.remove_prefix(at + 1);
  if (authority.empty())
    return std::nullopt;
  out.port = out.scheme == "https" ? 443 : 80;
  std::string_view host = authority;
  if (authority.front() == '[') {
    const size_t close = authority.find(']');
    if (close == std::string_view::npos)
      return std::nullopt;
    host = authority.substr(1, close - 1);
    authority.remove_prefix(close + 1);
  } else {
    const size_t colon = authority.rfind(':');
    host = authority.substr(0, colon);
    authority = colon == std::string_view::npos ? std::string_view()
                                                : authority.substr(colon);
  }
  if (authority.starts_with(":")) {
    authority.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(
        authority.data(), authority.data() + authority.size(), out.port);
    if (ec != std::errc() || ptr != authority.data() + authority.size() ||
        out.port <= 0 || out.port > 65535) {
      return std::nullopt;
    }
  }
  if (host.empty())
    return std::nullopt;
  out.host = Lower(host);
  return out;
}

std::optional<std::string> UrlHost(std::string_view url) {
  auto uri = ParseAbsoluteUri(Trim(url));
  if (!uri)
    return std::nullopt;
  return uri->host;
}

std::optional<std::string> Base64Decode(std::string_view encoded) {
  std::string_view in = Trim(encoded);
  if (in.size() % 4 != 0)
    return std::nullopt;
  std::string out(in.size() / 4 * 3, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(in.data()),
                                static_cast<int>(in.size()));
  if (n < 0)
    return std::nullopt;
  size_t padding = 0;
  if (in.ends_with("=="))
    padding = 2;
  else if (in.ends_with("="))
    padding = 1;
  out.resize(static_cast<size_t>(n) - padding);
  return out;
}

std::optional<std::string> BasicAuthUser(std::string_view credential) {
  std::string_view c = Trim(credential);
  const size_t sp = c.find(' ');
  if (sp == std::string_view::npos || !HeaderNameEquals(c.substr(0, sp), "basic"))
    return std::nullopt;
  auto decoded = Base64Decode(c.substr(sp + 1));
  if (!decoded)
    return std::nullopt;
  const size_t colon = decoded->find(':');
  std::string user = decoded->substr(0, colon);
  if (user.empty())
    return std::nullopt;
  return user;
}

}  // namespace infomarket::http
