#ifndef INFOMARKET_POLICY_H_
#define INFOMARKET_POLICY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "infomarket/http_message.h"
#include "infomarket/public_suffix.h"

// Per-request tracking decisions. Everything here is pure: the proxy feeds
// header blocks in and forwards whatever comes out.
namespace infomarket::policy {

enum class Party { kFirstParty, kThirdParty };
std::string_view PartyName(Party party);

struct RequestMeta {
  std::string user;
  std::string host;                    // Host header value, port allowed
  std::optional<std::string> referer;  // full Referer URL
  http::HeaderList headers;

  // Takes host and referer from `headers`. `fallback_host` is used when
  // there is no Host field (absolute-form targets).
  static RequestMeta FromHeaders(std::string user, const http::HeaderList& headers,
                                 std::string_view fallback_host = {});
};

struct ResponseMeta {
  http::HeaderList headers;
};

// Access bought by `aggregator` to `user`, valid during `period` only.
struct Grant {
  std::string user;
  std::string aggregator;
  int64_t period = 0;

  bool operator==(const Grant&) const = default;
};

// Whitelists and buyer lists. Domains are stored as root domains.
class PolicyState {
 public:
  void AddWhitelisted(std::string_view user, std::string_view domain);
  void AddGrant(const Grant& grant);

  bool IsWhitelisted(std::string_view user, std::string_view root) const;
  // True iff `root` holds a grant to `user` for exactly `period`.
  bool HasGrant(std::string_view user, std::string_view root,
                int64_t period) const;

  const std::map<std::string, std::set<std::string>, std::less<>>&
  whitelists() const {
    return whitelists_;
  }
  std::vector<Grant> grants() const;

  // Keeps whitelists, replaces every grant.
  PolicyState WithGrants(const std::vector<Grant>& grants) const;

 private:
  std::map<std::string, std::set<std::string>, std::less<>> whitelists_;
  // user -> root -> periods
  std::map<std::string, std::map<std::string, std::set<int64_t>, std::less<>>,
           std::less<>>
      grants_;
};

// One root domain per line; blank lines and '#' comments skipped.
std::set<std::string> ParseDomainList(std::string_view text);

inline constexpr std::string_view kTrackingRequestHeaders[] = {
    "Cookie", "Referer", "If-None-Match"};
inline constexpr std::string_view kTrackingResponseHeaders[] = {"Set-Cookie",
                                                                "ETag"};

struct Decision {
  Party party = Party::kFirstParty;
  bool pass_tracking = false;
  std::vector<std::string> strip_request;
  std::vector<std::string> strip_response;

  bool operator==(const Decision&) const = default;
};

// First party when Host and Referer share a root domain, when there is no
// Referer, or when Host's root is on the CDN allowlist. An unparseable
// Referer counts as a foreign one.
Party Classify(const RequestMeta& req, const std::set<std::string>& cdn_allowlist);

// Tracking passes iff the Referer's root is on the user's whitelist and the
// Host's root holds a grant for `period`. Unknown users have empty lists.
// Nothing is ever blocked; only headers are scheduled for removal.
Decision Decide(const RequestMeta& req, const PolicyState& state, int64_t period,
                const std::set<std::string>& cdn_allowlist = {});

http::HeaderList TransformRequest(const http::HeaderList& headers,
                                  const Decision& decision);
http::HeaderList TransformResponse(const http::HeaderList& headers,
                                   const Decision& decision);

}  // namespace infomarket::policy

#endif  // INFOMARKET_POLICY_H_
