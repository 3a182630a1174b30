#ifndef INFOMARKET_GAME_H_
#define INFOMARKET_GAME_H_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "infomarket/engine.h"
#include "infomarket/money.h"

// Cooperative game between a user, an aggregator and (in mediated designs) a
// market operator over one advertising transaction. Worth values are revenue
// multipliers ("intent coefficients").
//
// The templates work with any field type T constructible from int, so the
// same code runs on double and on exact rationals in tests.
namespace infomarket::game {

using engine::MarketType;

enum class Player : uint8_t { kUser = 0, kAggregator = 1, kMarket = 2 };

std::string_view PlayerName(Player p);

class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr Coalition(std::initializer_list<Player> players) {
    for (Player p : players)
      bits_ |= Bit(p);
  }
  static constexpr Coalition FromBits(uint8_t bits) {
    Coalition c;
    c.bits_ = bits;
    return c;
  }

  constexpr bool Contains(Player p) const { return bits_ & Bit(p); }
  constexpr Coalition With(Player p) const { return FromBits(bits_ | Bit(p)); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr uint8_t bits() const { return bits_; }
  constexpr bool operator==(const Coalition&) const = default;

 private:
  static constexpr uint8_t Bit(Player p) {
    return static_cast<uint8_t>(1u << static_cast<uint8_t>(p));
  }
  uint8_t bits_ = 0;
};

// {u, a} for direct designs, {u, a, m} for mediated ones.
std::vector<Player> PlayersFor(MarketType type);

// Revenue coefficient produced by `coalition`.
//
// Without the whole coalition, tracking gives impl unless the user has
// joined the market (blocking tracking) without the aggregator buying, which
// leaves 1. Under publisher-enforced DNT nothing short of the grand
// coalition beats 1. The grand coalition always reaches expl.
template <typename T>
T Worth(MarketType type, const T& expl, const T& impl, Coalition coalition) {
  const bool u = coalition.Contains(Player::kUser);
  const bool a = coalition.Contains(Player::kAggregator);
  const bool m = coalition.Contains(Player::kMarket);
  const bool mediated = engine::IsMediated(type);
  if (m && !mediated)
    throw std::invalid_argument("market player only exists in mediated markets");

  const bool grand = u && a && (m || !mediated);
  if (grand)
    return expl;
  if (engine::IsDnt(type))
    return T(1);
  // User cooperating with the market (or alone, in a direct market) but
  // without the aggregator: tracking is blocked.
  const bool user_sold = u && !a && (m || !mediated);
  return user_sold ? T(1) : impl;
}

inline constexpr size_t kMaxEnumeratedPlayers = 12;

// Shapley value by enumeration of all n! orderings. `worth(mask)` gives the
// worth of the coalition whose members are the set bits of `mask`, with
// player i at bit i. Returns each player's average marginal contribution, so
// the values sum to worth(all) - worth(empty).
template <typename T, typename WorthFn>
std::vector<T> ShapleyEnumerate(size_t num_players, WorthFn&& worth) {
  if (num_players > kMaxEnumeratedPlayers)
    throw std::invalid_argument("too many players for exact enumeration");
  std::vector<T> totals(num_players, T(0));
  if (num_players == 0)
    return totals;

  // Worth of every coalition, computed once.
  std::vector<T> table(size_t{1} << num_players);
  for (uint32_t mask = 0; mask < table.size(); ++mask)
    table[mask] = worth(mask);

  std::vector<size_t> order(num_players);
  std::iota(order.begin(), order.end(), 0);
  int64_t orderings = 0;
  do {
    uint32_t mask = 0;
    for (size_t i : order) {
      const uint32_t next = mask | (1u << i);
      totals[i] += table[next] - table[mask];
      mask = next;
    }
    ++orderings;
  } while (std::next_permutation(order.begin(), order.end()));

  for (T& t : totals)
    t /= T(orderings);
  return totals;
}

// Per-party result of the single-transaction game. `aggregator_baseline` is
// the status-quo coefficient credited to the aggregator on top of its share
// of the surplus.
template <typename T>
struct BasicShares {
  T user = T(0);
  T aggregator_surplus = T(0);
  T market = T(0);  // zero in direct designs
  T aggregator_baseline = T(0);
  bool has_market = false;

  T aggregator() const { return aggregator_baseline + aggregator_surplus; }
  T SurplusSum() const { return user + aggregator_surplus + market; }
};

using PlayerShares = BasicShares<double>;

namespace internal {
template <typename T>
void CheckIntents(const T& expl, const T& impl) {
  if (impl < T(1))
    throw std::invalid_argument("implicit intent must be >= 1");
  if (expl < impl)
    throw std::invalid_argument("explicit intent must be >= implicit intent");
}
}  // namespace internal

// Closed-form Shapley values.
//
//   mediated:  u = m = (expl-1 - 3/2 (impl-1)) / 3,  a = impl + (expl-1)/3
//   direct:    u = (expl-1 - 2 (impl-1)) / 2,        a = impl + (expl-1)/2
//   DNT:       every party gets (expl-1)/k for k parties, no baseline
template <typename T>
BasicShares<T> ShapleyClosedForm(MarketType type, const T& expl,
                                 const T& impl) {
  internal::CheckIntents(expl, impl);
  const T one(1);
  const T gain = expl - one;
  const T tracked = impl - one;
  BasicShares<T> s;
  s.has_market = engine::IsMediated(type);
  switch (type) {
    case MarketType::kMediated:
      s.user = (gain - T(3) / T(2) * tracked) / T(3);
      s.market = s.user;
      s.aggregator_surplus = gain / T(3);
      s.aggregator_baseline = impl;
      break;
    case MarketType::kDirect:
      s.user = (gain - T(2) * tracked) / T(2);
      s.aggregator_surplus = gain / T(2);
      s.aggregator_baseline = impl;
      break;
    case MarketType::kDntMediated:
      s.user = gain / T(3);
      s.market = s.user;
      s.aggregator_surplus = s.user;
      break;
    case MarketType::kDntDirect:
      s.user = gain / T(2);
      s.aggregator_surplus = s.user;
      break;
  }
  return s;
}

// Shapley values of the market game by enumeration, packaged like the
// closed form (same baseline convention), for cross-checking.
template <typename T>
BasicShares<T> ShapleyByEnumeration(MarketType type, const T& expl,
                                    const T& impl) {
  internal::CheckIntents(expl, impl);
  const std::vector<Player> players = PlayersFor(type);
  auto worth = [&](uint32_t mask) {
    Coalition c;
    for (size_t i = 0; i < players.size(); ++i) {
      if (mask & (1u << i))
        c = c.With(players[i]);
    }
    return Worth<T>(type, expl, impl, c);
  };
  const std::vector<T> phi = ShapleyEnumerate<T>(players.size(), worth);
  BasicShares<T> s;
  s.has_market = engine::IsMediated(type);
  for (size_t i = 0; i < players.size(); ++i) {
    switch (players[i]) {
      case Player::kUser:
        s.user = phi[i];
        break;
      case Player::kAggregator:
        s.aggregator_surplus = phi[i];
        break;
      case Player::kMarket:
        s.market = phi[i];
        break;
    }
  }
  if (!engine::IsDnt(type))
    s.aggregator_baseline = Worth<T>(type, expl, impl, Coalition{});
  return s;
}

// Double-precision conveniences.
double Worth(MarketType type, double expl, double impl, Coalition coalition);
PlayerShares ComputeShapley(MarketType type, double expl, double impl);

// Whether a user selling to this aggregator gets a strictly positive share.
bool UserGains(MarketType type, double expl, double impl);

// Lift above which a user gains: 3/2 mediated, 2 direct. DNT designs have
// no threshold (any expl > 1 suffices).
double UserGainThreshold(MarketType type);

struct DataPrice {
  Money user_payment;
  Money market_payment;
  bool user_participates = false;    // false when the user share is < 0
  bool market_participates = false;
};

// Payments for `impressions` impressions priced at params:
// share * ron * tqm * impressions / 1000. Negative shares pay nothing.
DataPrice ComputeDataPrice(const PlayerShares& shares,
                           const engine::CpmParams& params,
                           int64_t impressions);

// (1 - alpha) * gross, rounded to the micro-unit.
Money PublisherShare(double alpha, Money gross);

}  // namespace infomarket::game

#endif  // INFOMARKET_GAME_H_
