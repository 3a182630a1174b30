#ifndef INFOMARKET_ENGINE_H_
#define INFOMARKET_ENGINE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "infomarket/money.h"

// Core revenue-model types shared by every other module.
namespace infomarket::engine {

// Price of an impression before user information is taken into account.
struct CpmParams {
  Money ron;          // run-on-network nominal price, per mille
  double tqm = 1.0;   // publisher traffic quality multiplier
};

// Advertising value of information an aggregator holds about a user, as a
// revenue multiplier. 1 means no information.
struct IntentProfile {
  double expl = 1.0;                    // with full disclosure; same for all
  std::map<std::string, double> impl;   // per aggregator, from tracking alone

  // Throws std::invalid_argument unless expl >= impl[a] >= 1 for all a.
  void Validate() const;
  // impl for `aggregator`, or 1 when the aggregator never sees the user.
  double ImplFor(const std::string& aggregator) const;
};

enum class MarketType { kMediated, kDirect, kDntMediated, kDntDirect };

std::string_view MarketTypeName(MarketType type);
// Accepts "mediated", "direct", "dnt-mediated", "dnt-direct" (and '_').
std::optional<MarketType> ParseMarketType(std::string_view name);

inline bool IsMediated(MarketType t) {
  return t == MarketType::kMediated || t == MarketType::kDntMediated;
}
inline bool IsDnt(MarketType t) {
  return t == MarketType::kDntMediated || t == MarketType::kDntDirect;
}

struct MarketConfig {
  double alpha = 1.0;   // aggregator's retained share; publisher gets 1-alpha
  MarketType market_type = MarketType::kDirect;
  double epsilon = 1.0;
  int64_t impressions_per_period = 1000;
  double currency_scale = 1.0;

  void Validate() const;
};

// Ratio of disclosed to tracked surplus, (expl-1)/(impl-1).
class ConsentLift {
 public:
  enum class Kind { kFinite, kInfinite, kUndefined };

  static ConsentLift Finite(double v) { return ConsentLift(Kind::kFinite, v); }
  static ConsentLift Infinite() { return ConsentLift(Kind::kInfinite, 0); }
  static ConsentLift Undefined() { return ConsentLift(Kind::kUndefined, 0); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::kFinite; }
  // Only meaningful for finite lifts.
  double value() const { return value_; }

  // Strict comparison with a threshold. Infinite exceeds every threshold;
  // undefined exceeds none.
  bool Exceeds(double threshold) const;

  bool operator==(const ConsentLift&) const = default;

 private:
  ConsentLift(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_;
  double value_;
};

// ron * tqm * intent. Throws std::invalid_argument if intent < 1.
Money Cpm(const CpmParams& params, double intent);

// Throws std::invalid_argument unless expl >= impl >= 1.
ConsentLift ComputeConsentLift(double expl, double impl);

}  // namespace infomarket::engine

#endif  // INFOMARKET_ENGINE_H_
