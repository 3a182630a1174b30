#ifndef INFOMARKET_RECORDS_H_
#define INFOMARKET_RECORDS_H_

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "infomarket/auction.h"
#include "infomarket/policy.h"
#include "infomarket/trace.h"
#include "infomarket/valuation.h"

// Line-delimited JSON file formats. Field names:
//   bid      {user, aggregator, max_price}
//   outcome  {user, period, clearing_price, winners[], user_revenue}
//   grant    {user, aggregator, period}
//   event    {ts, user, publisher, aggregators[], keywords[]}
//   catalog  {advertiser, keyword, cpc}
//   profile  {site, count, keywords[]}
// Money fields are JSON numbers in currency units, exact to 1e-6.
namespace infomarket::records {

// Parse failure tied to a 1-based line number.
class RecordError : public std::runtime_error {
 public:
  RecordError(size_t line, const std::string& what);
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Insertion-ordered, so written records keep the documented field order.
using json = nlohmann::ordered_json;

// Calls `fn(json, line_number)` for every non-blank line. Wraps parse and
// field errors in RecordError.
void ForEachJsonLine(std::istream& in,
                     const std::function<void(const json&, size_t)>& fn);

Money MoneyField(const json& j, const char* key);
json MoneyJson(Money m);

// Groups bids by user, users in order of first appearance.
std::vector<auction::BidSet> ReadBids(std::istream& in);
void WriteBids(std::ostream& out, const std::vector<auction::BidSet>& bids);

json ToJson(const auction::AuctionOutcome& o);
auction::AuctionOutcome OutcomeFromJson(const json& j);
std::vector<auction::AuctionOutcome> ReadOutcomes(std::istream& in);
void WriteOutcomes(std::ostream& out,
                   const std::vector<auction::AuctionOutcome>& outcomes);

json ToJson(const policy::Grant& g);
policy::Grant GrantFromJson(const json& j);
std::vector<policy::Grant> ReadGrants(std::istream& in);
void WriteGrants(std::ostream& out, const std::vector<policy::Grant>& grants);

json ToJson(const trace::TraceEvent& e);
trace::TraceEvent EventFromJson(const json& j);
trace::Trace ReadTrace(std::istream& in);
void WriteTrace(std::ostream& out, const trace::Trace& t);

// One line per (advertiser, keyword); advertisers merged, sorted by id.
std::vector<valuation::AdvertiserSpec> ReadCatalog(std::istream& in);
void WriteCatalog(std::ostream& out,
                  const std::vector<valuation::AdvertiserSpec>& catalog);

valuation::AnonymizedProfile ReadProfile(std::istream& in);
void WriteProfile(std::ostream& out, const valuation::AnonymizedProfile& p);

// Whole-file helpers; throw std::runtime_error when the file cannot be
// opened.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace infomarket::records

#endif  // INFOMARKET_RECORDS_H_
