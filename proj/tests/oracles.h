#ifndef INFOMARKET_TESTS_ORACLES_H_
#define INFOMARKET_TESTS_ORACLES_H_

// Reference computations written independently of the library code, used
// as expected values in tests.

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "infomarket/engine.h"
#include "infomarket/game.h"

namespace infomarket::oracles {

using Rational = boost::rational<int64_t>;

// Worth of a coalition read off the revenue-coefficient tables, one
// explicit row per coalition.
template <typename T>
T TableWorth(engine::MarketType type, const T& expl, const T& impl,
             game::Coalition c) {
  using game::Player;
  const bool u = c.Contains(Player::kUser);
  const bool a = c.Contains(Player::kAggregator);
  const bool m = c.Contains(Player::kMarket);
  switch (type) {
    case engine::MarketType::kMediated:
      if (u && a && m)
        return expl;
      if (u && m && !a)
        return T(1);
      return impl;  // {}, {u}, {a}, {m}, {u,a}, {a,m}
    case engine::MarketType::kDirect:
      if (u && a)
        return expl;
      if (u)
        return T(1);
      return impl;  // {}, {a}
    case engine::MarketType::kDntMediated:
      return (u && a && m) ? expl : T(1);
    case engine::MarketType::kDntDirect:
      return (u && a) ? expl : T(1);
  }
  return T(0);
}

// Shapley value by the subset formula
//   phi_i = sum_{S not containing i} |S|! (n-|S|-1)! / n! * (v(S+i) - v(S)).
template <typename T, typename WorthFn>
std::vector<T> SubsetShapley(size_t n, WorthFn&& worth) {
  std::vector<int64_t> fact(n + 1, 1);
  for (size_t k = 1; k <= n; ++k)
    fact[k] = fact[k - 1] * static_cast<int64_t>(k);
  std::vector<T> phi(n, T(0));
  for (size_t i = 0; i < n; ++i) {
    for (uint32_t s = 0; s < (1u << n); ++s) {
      if (s & (1u << i))
        continue;
      const size_t size = static_cast<size_t>(__builtin_popcount(s));
      const T weight = T(fact[size] * fact[n - size - 1]) / T(fact[n]);
      phi[i] += weight * (worth(s | (1u << i)) - worth(s));
    }
  }
  return phi;
}

struct ExactShares {
  Rational user{0};
  Rational aggregator{0};  // surplus share only
  Rational market{0};
  Rational grand{0};
  Rational empty{0};
};

inline ExactShares TableShapley(engine::MarketType type, Rational expl,
                                Rational impl) {
  using game::Player;
  std::vector<Player> players = {Player::kUser, Player::kAggregator};
  if (engine::IsMediated(type))
    players.push_back(Player::kMarket);
  auto worth = [&](uint32_t mask) {
    game::Coalition c;
    for (size_t i = 0; i < players.size(); ++i) {
      if (mask & (1u << i))
        c = c.With(players[i]);
    }
    return TableWorth<Rational>(type, expl, impl, c);
  };
  const std::vector<Rational> phi = SubsetShapley<Rational>(players.size(), worth);
  ExactShares s;
  s.user = phi[0];
  s.aggregator = phi[1];
  if (players.size() == 3)
    s.market = phi[2];
  s.grand = worth((1u << players.size()) - 1);
  s.empty = worth(0);
  return s;
}

// ---- auction --------------------------------------------------------------

// p * |{b >= p}|, straight from the definition.
inline double Revenue(const std::vector<double>& bids, double p) {
  double n = 0;
  for (double b : bids)
    n += (b >= p) ? 1 : 0;
  return p * n;
}

// Sorted distinct positive bids: the breakpoints of R.
inline std::vector<double> Breakpoints(const std::vector<double>& bids) {
  std::set<double> s;
  for (double b : bids) {
    if (b > 0)
      s.insert(b);
  }
  return {s.begin(), s.end()};
}

// Integrates f over (0, max bid] piecewise between breakpoints with
// adaptive Gauss-Kronrod, so each piece is smooth.
template <typename F>
double PiecewiseIntegral(const std::vector<double>& bids, F&& f, double upto) {
  using boost::math::quadrature::gauss_kronrod;
  double total = 0, lo = 0;
  for (double hi : Breakpoints(bids)) {
    const double end = std::min(hi, upto);
    if (end > lo) {
      total += gauss_kronrod<double, 61>::integrate(f, lo, end, 15, 1e-12);
    }
    if (hi >= upto)
      break;
    lo = hi;
  }
  return total;
}

// Largest exponent on the support, to keep weights in range.
inline double MaxLogWeight(const std::vector<double>& bids, double eps) {
  double m = 0;
  for (double b : Breakpoints(bids))
    m = std::max(m, eps * Revenue(bids, b));
  return m;
}

// E[R(p)] for density proportional to exp(eps R(p)) on (0, max bid].
inline double QuadratureExpectedRevenue(const std::vector<double>& bids,
                                        double eps) {
  const double shift = MaxLogWeight(bids, eps);
  const double top = Breakpoints(bids).back();
  auto w = [&](double p) { return std::exp(eps * Revenue(bids, p) - shift); };
  auto rw = [&](double p) { return Revenue(bids, p) * w(p); };
  return PiecewiseIntegral(bids, rw, top) / PiecewiseIntegral(bids, w, top);
}

inline double QuadratureCdf(const std::vector<double>& bids, double eps,
                            double x) {
  const double shift = MaxLogWeight(bids, eps);
  const double top = Breakpoints(bids).back();
  if (x <= 0)
    return 0;
  if (x >= top)
    return 1;
  auto w = [&](double p) { return std::exp(eps * Revenue(bids, p) - shift); };
  return PiecewiseIntegral(bids, w, x) / PiecewiseIntegral(bids, w, top);
}

// Revenue-maximizing price by scanning every bid value.
inline std::pair<double, double> ScanOptimum(const std::vector<double>& bids) {
  double best_p = 0, best_r = 0;
  for (double p : Breakpoints(bids)) {
    const double r = Revenue(bids, p);
    if (r > best_r) {
      best_r = r;
      best_p = p;
    }
  }
  return {best_p, best_r};
}

// ---- valuation ------------------------------------------------------------

struct SimpleAdvertiser {
  std::string id;
  double cpc = 0;  // effective CPC for this profile (0: cannot serve)
};

inline double SimpleValue(const std::vector<SimpleAdvertiser>& ads,
                          const std::vector<int64_t>& slots, double pi) {
  double v = 0;
  for (size_t i = 0; i < ads.size(); ++i)
    v += ads[i].cpc * (1 - std::pow(1 - pi, static_cast<double>(slots[i])));
  return v;
}

// Best value over all ways to spread `n` slots over the servable
// advertisers (every slot is placed when someone can serve).
inline double ExhaustiveBest(const std::vector<SimpleAdvertiser>& ads, int64_t n,
                             double pi) {
  std::vector<size_t> servable;
  for (size_t i = 0; i < ads.size(); ++i) {
    if (ads[i].cpc > 0)
      servable.push_back(i);
  }
  if (servable.empty() || n == 0)
    return 0;
  double best = 0;
  std::vector<int64_t> slots(ads.size(), 0);
  // Recursive composition of n into |servable| parts.
  auto rec = [&](auto&& self, size_t k, int64_t left) -> void {
    if (k + 1 == servable.size()) {
      slots[servable[k]] = left;
      best = std::max(best, SimpleValue(ads, slots, pi));
      return;
    }
    for (int64_t x = 0; x <= left; ++x) {
      slots[servable[k]] = x;
      self(self, k + 1, left - x);
    }
  };
  rec(rec, 0, n);
  return best;
}

}  // namespace infomarket::oracles

#endif  // INFOMARKET_TESTS_ORACLES_H_
