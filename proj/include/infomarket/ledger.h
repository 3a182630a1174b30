#ifndef INFOMARKET_LEDGER_H_
#define INFOMARKET_LEDGER_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "infomarket/money.h"

// Append-only earnings ledger, one JSON record per payment:
//   {period, user, aggregator, amount, pricing_mode}
namespace infomarket::ledger {

struct LedgerEntry {
  int64_t period = 0;
  std::string user;
  std::string aggregator;
  Money amount;
  std::string pricing_mode;  // "auction" or "shapley"

  bool operator==(const LedgerEntry&) const = default;
};

std::vector<LedgerEntry> ReadLedger(std::istream& in);
// Missing file reads as an empty ledger.
std::vector<LedgerEntry> ReadLedgerFile(const std::string& path);
void WriteLedger(std::ostream& out, const std::vector<LedgerEntry>& entries);

// Appends under an exclusive advisory lock, so concurrent writers never
// interleave lines. Rejects negative amounts before writing anything.
void AppendLedgerFile(const std::string& path,
                      const std::vector<LedgerEntry>& entries);

struct EarningsSummary {
  std::map<std::string, Money> per_user;
  std::map<std::string, int64_t> payments_per_user;
  Money total;
};
EarningsSummary Summarize(const std::vector<LedgerEntry>& entries);

}  // namespace infomarket::ledger

#endif  // INFOMARKET_LEDGER_H_
