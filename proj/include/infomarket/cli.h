#ifndef INFOMARKET_CLI_H_
#define INFOMARKET_CLI_H_

#include <ostream>
#include <string>

#include "infomarket/policy.h"

// The `infomarket` command line:
//   trace gen     synthetic browsing trace (and advertiser catalog)
//   auction run   per-user auctions over a bid file
//   shapley       closed-form shares for one transaction
//   simulate      adoption dynamics over a trace
//   valuate       emulated aggregator bid for a profile
//   proxy         forward proxy; `proxy push` sends a grant update
//   report        per-user earnings from a ledger
namespace infomarket::cli {

// Runs one command. Returns the process exit code. Never throws; errors go
// to `err` with a nonzero code.
int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Proxy state directory:
//   whitelists/<user>.txt   one root domain per line
//   grants.jsonl            grant records (optional)
//   cdn.txt                 CDN allowlist (optional)
policy::PolicyState LoadStateDir(const std::string& dir);
std::set<std::string> LoadCdnAllowlist(const std::string& dir);

// Shortest round-trip decimal, always with a fractional part ("3.0").
std::string FormatReal(double v);

}  // namespace infomarket::cli

#endif  // INFOMARKET_CLI_H_
