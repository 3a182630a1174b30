#include "infomarket/engine.h"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace infomarket::engine {

void IntentProfile::Validate() const {
  if (!(expl >= 1.0))
    throw std::invalid_argument("explicit intent must be >= 1");
  for (const auto& [aggregator, value] : impl) {
    if (!(value >= 1.0) || value > expl) {
      throw std::invalid_argument("implicit intent for " + aggregator +
                                  " must lie in [1, expl]");
    }
  }
}

double IntentProfile::ImplFor(const std::string& aggregator) const {
  auto it = impl.find(aggregator);
  return it == impl.end() ? 1.0 : it->second;
}

std::string_view MarketTypeName(MarketType type) {
  switch (type) {
    case MarketType::kMediated:
      return "mediated";
    case MarketType::kDirect:
      return "direct";
    case MarketType::kDntMediated:
      return "dnt-mediated";
    case MarketType::kDntDirect:
      return "dnt-direct";
  }
  return "unknown";
}

std::optional<MarketType> ParseMarketType(std::string_view name) {
  std::string n(name);
  for (char& c : n) {
    if (c == '_')
      c = '-';
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (n == "mediated")
    return MarketType::kMediated;
  if (n == "direct")
    return MarketType::kDirect;
  if (n == "dnt-mediated")
    return MarketType::kDntMediated;
  if (n == "dnt-direct")
    return MarketType::kDntDirect;
  return std::nullopt;
}

void MarketConfig::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in [0, 1]");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("epsilon must be positive");
  if (impressions_per_period < 0)
    throw std::invalid_argument("impressions_per_period must be >= 0");
  if (!(currency_scale >= 0.0))
    throw std::invalid_argument("currency_scale must be >= 0");
}

bool ConsentLift::Exceeds(double threshold) const {
  switch (kind_) {
    case Kind::kFinite:
      return value_ > threshold;
    case Kind::kInfinite:
      return true;
    case Kind::kUndefined:
      return false;
  }
  return false;
}

Money Cpm(const CpmParams& params, double intent) {
  if (!(intent >= 1.0))
    throw std::invalid_argument("intent must be >= 1");
  if (params.ron < Money::Zero() || !(params.tqm >= 0.0))
    throw std::invalid_argument("ron and tqm must be nonnegative");
  return Money::FromDouble(params.ron.ToDouble() * params.tqm * intent);
}

ConsentLift ComputeConsentLift(double expl, double impl) {
  if (!(impl >= 1.0))
    throw std::invalid_argument("implicit intent must be >= 1");
  if (!(expl >= impl))
    throw std::invalid_argument("explicit intent must be >= implicit intent");
  if (impl > 1.0)
    return ConsentLift::Finite((expl - 1.0) / (impl - 1.0));
  if (expl > 1.0)
    return ConsentLift::Infinite();
  return ConsentLift::Undefined();
}

}  // namespace infomarket::engine
