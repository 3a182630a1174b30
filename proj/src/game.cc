#include "infomarket/game.h"

namespace infomarket::game {

std::string_view PlayerName(Player p) {
  switch (p) {
    case Player::kUser:
      return "user";
    case Player::kAggregator:
      return "aggregator";
    case Player::kMarket:
      return "market";
  }
  return "unknown";
}

std::vector<Player> PlayersFor(MarketType type) {
  if (engine::IsMediated(type))
    return {Player::kUser, Player::kAggregator, Player::kMarket};
  return {Player::kUser, Player::kAggregator};
}

double Worth(MarketType type, double expl, double impl, Coalition coalition) {
  return Worth<double>(type, expl, impl, coalition);
}

PlayerShares ComputeShapley(MarketType type, double expl, double impl) {
  return ShapleyClosedForm<double>(type, expl, impl);
}

bool UserGains(MarketType type, double expl, double impl) {
  return ComputeShapley(type, expl, impl).user > 0.0;
}

double UserGainThreshold(MarketType type) {
  switch (type) {
    case MarketType::kMediated:
      return 1.5;
    case MarketType::kDirect:
      return 2.0;
    case MarketType::kDntMediated:
    case MarketType::kDntDirect:
      return 0.0;
  }
  return 0.0;
}

namespace {

Money SharePayment(double share, const engine::CpmParams& params,
                   int64_t impressions) {
  if (share <= 0.0)
    return Money::Zero();
  return Money::FromDouble(share * params.ron.ToDouble() * params.tqm *
                           static_cast<double>(impressions) / 1000.0);
}

}  // namespace

DataPrice ComputeDataPrice(const PlayerShares& shares,
                           const engine::CpmParams& params,
                           int64_t impressions) {
  if (impressions < 0)
    throw std::invalid_argument("impressions must be >= 0");
  DataPrice price;
  price.user_participates = shares.user >= 0.0;
  price.user_payment = SharePayment(shares.user, params, impressions);
  if (shares.has_market) {
    price.market_participates = shares.market >= 0.0;
    price.market_payment = SharePayment(shares.market, params, impressions);
  }
  return price;
}

Money PublisherShare(double alpha, Money gross) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in [0, 1]");
  return Money::FromDouble((1.0 - alpha) * gross.ToDouble());
}

}  // namespace infomarket::game
