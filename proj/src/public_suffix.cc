#include "infomarket/public_suffix.h"

#include <algorithm>
#include <arpa/inet.h>
#include <cctype>
#include <optional>
#include <stdexcept>
#include <vector>

namespace infomarket::policy {

namespace internal {
std::string_view BundledPublicSuffixText();
}  // namespace internal

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> SplitLabels(std::string_view host) {
  std::vector<std::string_view> labels;
  size_t start = 0;
  while (start <= host.size()) {
    size_t dot = host.find('.', start);
    if (dot == std::string_view::npos)
      dot = host.size();
    labels.push_back(host.substr(start, dot - start));
    start = dot + 1;
  }
  return labels;
}

}  // namespace

PublicSuffixList PublicSuffixList::Parse(std::string_view text) {
  PublicSuffixList list;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    // A rule is the first whitespace-delimited token on a line.
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
      continue;
    line = line.substr(first);
    line = line.substr(0, line.find_first_of(" \t\r"));
    if (line.empty() || line.starts_with("//"))
      continue;
    std::string rule = Lower(line);
    if (rule.starts_with("!"))
      list.exceptions_.insert(rule.substr(1));
    else if (rule.starts_with("*."))
      list.wildcards_.insert(rule.substr(2));
    else
      list.rules_.insert(std::move(rule));
  }
  return list;
}

const PublicSuffixList& PublicSuffixList::Bundled() {
  static const PublicSuffixList list =
      Parse(internal::BundledPublicSuffixText());
  return list;
}

std::string_view PublicSuffixList::BundledVersion() {
  return "publicsuffix.org snapshot 2019-12-21";
}

size_t PublicSuffixList::PublicSuffixLabels(std::string_view host) const {
  const std::vector<std::string_view> labels = SplitLabels(host);
  const size_t n = labels.size();
  size_t best = 1;
  std::optional<size_t> exception;
  for (size_t i = 0; i < n; ++i) {
    const size_t count = n - i;
    const std::string suffix(host.substr(labels[i].data() - host.data()));
    if (exceptions_.count(suffix)) {
      exception = count - 1;
      break;
    }
    if (rules_.count(suffix))
      best = std::max(best, count);
    if (i + 1 < n) {
      const std::string parent(host.substr(labels[i + 1].data() - host.data()));
      if (wildcards_.count(parent))
        best = std::max(best, count);
    }
  }
  return exception ? *exception : best;
}

std::string PublicSuffixList::RegistrableDomain(std::string_view host) const {
  std::string h = NormalizeHost(host);
  if (h.empty())
    throw std::invalid_argument("empty host");
  if (IsIpLiteral(h))
    return h;
  const std::vector<std::string_view> labels = SplitLabels(h);
  const size_t suffix = PublicSuffixLabels(h);
  if (labels.size() <= suffix)
    return h;
  const std::string_view start = labels[labels.size() - suffix - 1];
  return std::string(std::string_view(h).substr(start.data() - h.data()));
}

std::string NormalizeHost(std::string_view host) {
  std::string_view h = host;
  while (!h.empty() && (h.front() == ' ' || h.front() == '\t'))
    h.remove_prefix(1);
  while (!h.empty() && (h.back() == ' ' || h.back() == '\t'))
    h.remove_suffix(1);
  if (h.starts_with("[")) {
    size_t close = h.find(']');
    return Lower(h.substr(1, close == std::string_view::npos ? h.npos
                                                             : close - 1));
  }
  // A single colon separates a port; more than one means a bare IPv6.
  if (std::count(h.begin(), h.end(), ':') == 1)
    h = h.substr(0, h.find(':'));
  while (h.ends_with("."))
    h.remove_suffix(1);
  return Lower(h);
}

bool IsIpLiteral(std::string_view host) {
  const std::string h(host);
  unsigned char buf[16];
  return inet_pton(AF_INET, h.c_str(), buf) == 1 ||
         inet_pton(AF_INET6, h.c_str(), buf) == 1;
}

std::string RootDomain(std::string_view host) {
  return PublicSuffixList::Bundled().RegistrableDomain(host);
}

}  // namespace infomarket::policy
