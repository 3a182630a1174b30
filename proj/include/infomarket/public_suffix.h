#ifndef INFOMARKET_PUBLIC_SUFFIX_H_
#define INFOMARKET_PUBLIC_SUFFIX_H_

#include <string>
#include <string_view>
#include <unordered_set>

namespace infomarket::policy {

// Public suffix list matcher (normal, wildcard and exception rules).
class PublicSuffixList {
 public:
  // Parses list text in the publicsuffix.org format.
  static PublicSuffixList Parse(std::string_view text);
  // The snapshot compiled into the library.
  static const PublicSuffixList& Bundled();
  static std::string_view BundledVersion();

  // Number of labels in the public suffix of a lowercase, dot-separated
  // host. Unlisted TLDs count as one-label suffixes.
  size_t PublicSuffixLabels(std::string_view host) const;

  // eTLD+1 of `host`. Lowercases, drops a trailing dot and any port. IP
  // literals and bare public suffixes come back as-is.
  std::string RegistrableDomain(std::string_view host) const;

  size_t rule_count() const {
    return rules_.size() + wildcards_.size() + exceptions_.size();
  }

 private:
  std::unordered_set<std::string> rules_;
  std::unordered_set<std::string> wildcards_;   // "*.ck" stored as "ck"
  std::unordered_set<std::string> exceptions_;  // "!www.ck" stored as "www.ck"
};

// Host part of a Host header value or URL authority: no port, no brackets
// around IPv6, lowercase.
std::string NormalizeHost(std::string_view host);

bool IsIpLiteral(std::string_view host);

// Registrable domain under the bundled list. Throws std::invalid_argument
// on an empty host.
std::string RootDomain(std::string_view host);

}  // namespace infomarket::policy

#endif  // INFOMARKET_PUBLIC_SUFFIX_H_
