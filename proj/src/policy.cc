#include "infomarket/policy.h"

#include <stdexcept>

namespace infomarket::policy {

namespace {

// Root of a possibly malformed host, or "" when there is none.
std::string SafeRoot(std::string_view host) {
  if (NormalizeHost(host).empty())
    return {};
  return RootDomain(host);
}

std::string RefererRoot(const RequestMeta& req) {
  if (!req.referer)
    return {};
  auto host = http::UrlHost(*req.referer);
  return host ? SafeRoot(*host) : std::string();
}

http::HeaderList Strip(const http::HeaderList& headers,
                       const std::vector<std::string>& names) {
  http::HeaderList out = headers;
  for (const std::string& name : names)
    http::RemoveHeaders(out, name);
  return out;
}

}  // namespace

std::string_view PartyName(Party party) {
  return party == Party::kFirstParty ? "first" : "third";
}

RequestMeta RequestMeta::FromHeaders(std::string user,
                                     const http::HeaderList& headers,
                                     std::string_view fallback_host) {
  RequestMeta meta;
  meta.user = std::move(user);
  const http::HeaderField* host = http::FindHeader(headers, "Host");
  meta.host = host ? host->value : std::string(fallback_host);
  if (const http::HeaderField* ref = http::FindHeader(headers, "Referer"))
    meta.referer = ref->value;
  meta.headers = headers;
  return meta;
}

void PolicyState::AddWhitelisted(std::string_view user,
                                 std::string_view domain) {
  const std::string root = SafeRoot(domain);
  if (root.empty())
    throw std::invalid_argument("empty whitelist domain");
  whitelists_[std::string(user)].insert(root);
}

void PolicyState::AddGrant(const Grant& grant) {
  const std::string root = SafeRoot(grant.aggregator);
  if (root.empty())
    throw std::invalid_argument("empty grant aggregator");
  grants_[grant.user][root].insert(grant.period);
}

bool PolicyState::IsWhitelisted(std::string_view user,
                                std::string_view root) const {
  auto it = whitelists_.find(user);
  return it != whitelists_.end() && it->second.count(std::string(root)) > 0;
}

bool PolicyState::HasGrant(std::string_view user, std::string_view root,
                           int64_t period) const {
  auto it = grants_.find(user);
  if (it == grants_.end())
    return false;
  auto jt = it->second.find(root);
  return jt != it->second.end() && jt->second.count(period) > 0;
}

std::vector<Grant> PolicyState::grants() const {
  std::vector<Grant> out;
  for (const auto& [user, by_root] : grants_) {
    for (const auto& [root, periods] : by_root) {
      for (int64_t p : periods)
        out.push_back({user, root, p});
    }
  }
  return out;
}

PolicyState PolicyState::WithGrants(const std::vector<Grant>& grants) const {
  PolicyState out;
  out.whitelists_ = whitelists_;
  for (const Grant& g : grants)
    out.AddGrant(g);
  return out;
}

std::set<std::string> ParseDomainList(std::string_view text) {
  std::set<std::string> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    line = line.substr(0, line.find('#'));
    const size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
      continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    out.insert(RootDomain(line));
  }
  return out;
}

Party Classify(const RequestMeta& req,
               const std::set<std::string>& cdn_allowlist) {
  if (!req.referer)
    return Party::kFirstParty;
  const std::string host_root = SafeRoot(req.host);
  if (!host_root.empty() && cdn_allowlist.count(host_root))
    return Party::kFirstParty;
  const std::string referer_root = RefererRoot(req);
  if (!referer_root.empty() && referer_root == host_root)
    return Party::kFirstParty;
  return Party::kThirdParty;
}

Decision Decide(const RequestMeta& req, const PolicyState& state,
                int64_t period, const std::set<std::string>& cdn_allowlist) {
  Decision d;
  d.party = Classify(req, cdn_allowlist);
  const std::string host_root = SafeRoot(req.host);
  const std::string referer_root = RefererRoot(req);
  d.pass_tracking = !referer_root.empty() && !host_root.empty() &&
                    state.IsWhitelisted(req.user, referer_root) &&
                    state.HasGrant(req.user, host_root, period);
  if (d.party == Party::kThirdParty && !d.pass_tracking) {
    d.strip_request.assign(std::begin(kTrackingRequestHeaders),
                           std::end(kTrackingRequestHeaders));
    d.strip_response.assign(std::begin(kTrackingResponseHeaders),
                            std::end(kTrackingResponseHeaders));
  }
  return d;
}

http::HeaderList TransformRequest(const http::HeaderList& headers,
                                  const Decision& decision) {
  return Strip(headers, decision.strip_request);
}

http::HeaderList TransformResponse(const http::HeaderList& headers,
                                   const Decision& decision) {
  return Strip(headers, decision.strip_response);
}

}  // namespace infomarket::policy
