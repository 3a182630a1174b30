#ifndef INFOMARKET_ADOPTION_H_
#define INFOMARKET_ADOPTION_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "infomarket/auction.h"
#include "infomarket/config.h"
#include "infomarket/engine.h"
#include "infomarket/game.h"
#include "infomarket/ledger.h"
#include "infomarket/money.h"
#include "infomarket/trace.h"
#include "infomarket/valuation.h"

// Market adoption under myopic best response. Users join when some
// aggregator gives them a positive Shapley share; aggregators join when
// that strictly raises their own revenue given who has joined.
//
// Revenue is accounted per transaction: one bundle of
// impressions_per_period impressions for each (event, embedded aggregator).
// The intent coefficient of a transaction depends on membership:
//   user out                   V(empty): impl, or 1 under DNT
//   user in, aggregator out    1 (tracking blocked)
//   user in, aggregator in     expl
// Gross revenue is cpm(coefficient) * impressions / 1000. The publisher gets
// (1 - alpha) of it; the user and the market get their Shapley shares of the
// aggregator's alpha fraction (never negative); the aggregator keeps the
// rest, so every transaction balances exactly.
namespace infomarket::adoption {

using config::PricingMode;
using engine::MarketType;

// `count` identical transactions.
struct TransactionGroup {
  std::string user;
  std::string aggregator;
  std::string publisher;
  int64_t period = 0;
  int64_t count = 0;
};

struct MarketInstance {
  std::vector<std::string> users;        // sorted
  std::vector<std::string> aggregators;  // sorted
  std::map<std::string, engine::IntentProfile> intents;  // by user
  std::vector<TransactionGroup> groups;  // sorted by user, aggregator, ...
  int64_t periods = 1;
  int64_t period_seconds = 7 * 86400;

  // Needed only for auction pricing, where bids come from valuation.
  std::map<std::string, std::set<std::string>> site_keywords;
  std::vector<valuation::AdvertiserSpec> catalog;
  valuation::ClickModel click_model;

  // Intents from valuation::DeriveIntents over the trace; one group per
  // (user, aggregator, publisher, period).
  static MarketInstance FromTrace(const trace::Trace& trace,
                                  const std::vector<valuation::AdvertiserSpec>& catalog,
                                  const config::RunConfig& config);
  // Explicit intents; each (user, aggregator in impl) pair gets
  // `transactions_per_pair` transactions on publisher "pub".
  static MarketInstance FromIntents(
      const std::map<std::string, engine::IntentProfile>& intents,
      int64_t transactions_per_pair = 1);

  // Group indices per aggregator, for revenue evaluation.
  const std::vector<size_t>& GroupsOf(const std::string& aggregator) const;
  void BuildIndex();

 private:
  std::map<std::string, std::vector<size_t>> by_aggregator_;
};

struct AdoptionState {
  std::set<std::string> users;
  std::set<std::string> aggregators;
  int round = 0;

  bool operator==(const AdoptionState&) const = default;
};

// True iff some aggregator seeing the user yields a positive user share.
bool UserJoinDecision(MarketType type, const engine::IntentProfile& intents);

double IntentCoefficient(MarketType type, const engine::IntentProfile& intents,
                         const std::string& aggregator, bool user_in,
                         bool aggregator_in);

// Money flows of one transaction. gross = publisher + user + market +
// aggregator.
struct TransactionSplit {
  double coefficient = 1.0;
  game::PlayerShares shares;  // only meaningful when both are in
  Money gross;
  Money publisher;
  Money user;
  Money market;
  Money aggregator;

  bool Balanced() const { return publisher + user + market + aggregator == gross; }
};

TransactionSplit SplitTransaction(MarketType type,
                                  const engine::IntentProfile& intents,
                                  const std::string& aggregator, bool user_in,
                                  bool aggregator_in,
                                  const config::RunConfig& config);

// Aggregator's net revenue over its transactions in `state`.
Money AggregatorRevenue(const std::string& aggregator, const AdoptionState& state,
                        const MarketInstance& instance,
                        const config::RunConfig& config);

// Revenue with the aggregator joined strictly exceeds revenue with it
// abstaining, everything else fixed.
bool AggregatorJoinDecision(const std::string& aggregator,
                            const AdoptionState& state,
                            const MarketInstance& instance,
                            const config::RunConfig& config);

// Users the aggregator would attract on its own: positive user share with
// this aggregator.
std::set<std::string> AttractedUsers(const std::string& aggregator,
                                     const MarketInstance& instance,
                                     MarketType type);

// Join condition in the state where only AttractedUsers() are in the
// market. Aggregators that join although this is false joined only because
// users came for other aggregators.
bool StandaloneJoinCondition(const std::string& aggregator,
                             const MarketInstance& instance,
                             const config::RunConfig& config);

// Joined aggregators whose revenue would rise by abstaining alone.
std::vector<std::string> MyopicViolations(const AdoptionState& state,
                                          const MarketInstance& instance,
                                          const config::RunConfig& config);

struct AccountLine {
  TransactionGroup group;
  TransactionSplit per_transaction;  // Shapley pricing
  Money gross;                       // group totals, payments included
  Money publisher;
  Money user;
  Money market;
  Money aggregator;

  bool Balanced() const { return publisher + user + market + aggregator == gross; }
};

struct Accounting {
  std::vector<AccountLine> lines;
  std::vector<auction::AuctionOutcome> outcomes;  // auction pricing only
  std::vector<ledger::LedgerEntry> ledger;        // payments to users
  double intent_sum = 0;                          // sum of coefficients
};

// Money flows of every transaction in `state`. Under auction pricing, each
// (user, period) runs an auction among joined aggregators that see the
// user; winners get expl and pay the clearing price, losers get 1.
Accounting Account(const AdoptionState& state, const MarketInstance& instance,
                   const config::RunConfig& config);

struct RoundRecord {
  int round = 0;
  size_t users_joined = 0;
  size_t aggregators_joined = 0;
  Money total_revenue;
  Money aggregator_revenue;

  bool operator==(const RoundRecord&) const = default;
};

struct AdoptionResult {
  MarketType market_type = MarketType::kDirect;
  PricingMode pricing_mode = PricingMode::kShapley;
  uint64_t seed = 0;
  size_t num_users = 0;
  size_t num_aggregators = 0;
  std::vector<RoundRecord> rounds;  // round 0 is the status quo
  bool converged = false;
  std::vector<std::string> joined_users;
  std::vector<std::string> joined_aggregators;
  std::vector<std::string> network_effect_aggregators;

  Money initial_total_revenue;
  Money final_total_revenue;
  Money initial_aggregator_revenue;
  Money final_aggregator_revenue;
  Money final_publisher_revenue;
  Money final_user_revenue;
  Money final_market_revenue;
  double intent_sum_initial = 0;
  double intent_sum_final = 0;
  // Every user, scaled to a 30-day month.
  std::map<std::string, Money> user_monthly_revenue;

  double user_fraction() const;
  double aggregator_fraction() const;
  // final / initial, 0 when the initial value is 0.
  double total_revenue_normalized() const;
  double aggregator_revenue_normalized() const;

  bool operator==(const AdoptionResult&) const = default;
};

struct AdoptionRun {
  AdoptionResult result;
  AdoptionState final_state;
  Accounting accounting;  // of the final state
};

// Synchronous rounds: all users decide, then all aggregators decide against
// the updated user set. Stops at the first round without a change, or at
// round_cap.
AdoptionRun RunAdoption(const MarketInstance& instance,
                        const config::RunConfig& config);

// Writes rounds.csv, revenue.csv, user_revenue.csv, summary.csv and
// snapshot.json into `dir` (created if missing). Throws std::runtime_error
// on an unwritable path.
void WriteReport(const AdoptionResult& result, const std::string& dir);

// Deterministic JSON rendering of every result field.
std::string SnapshotJson(const AdoptionResult& result);
AdoptionResult ParseSnapshot(const std::string& json_text);

// Nearest-rank quantiles at 0, 0.1, ..., 1 of the monthly user revenue.
std::vector<std::pair<double, Money>> MonthlyRevenueQuantiles(
    const AdoptionResult& result);

}  // namespace infomarket::adoption

#endif  // INFOMARKET_ADOPTION_H_
