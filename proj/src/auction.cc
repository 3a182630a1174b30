#include "infomarket/auction.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace infomarket::auction {

namespace {

// log of the integral of exp(slope * p) over (lo, hi], slope > 0.
double LogIntegralExp(double slope, double lo, double hi) {
  const double x = slope * (hi - lo);
  return slope * hi + std::log(-std::expm1(-x)) - std::log(slope);
}

// Mean of hi - p when p has density proportional to exp(slope * p) on
// (lo, hi]; that is, the mean of an exponential truncated to [0, L].
double TruncatedExpMeanGap(double slope, double length) {
  const double x = slope * length;
  if (x < 1e-3)
    return length * (0.5 - x / 12.0 + x * x * x / 720.0);
  return 1.0 / slope - length / std::expm1(x);
}

}  // namespace

void BidSet::Validate() const {
  std::set<std::string> seen;
  for (const Bid& b : bids) {
    if (b.max_price < Money::Zero())
      throw std::invalid_argument("negative bid from " + b.aggregator);
    if (!seen.insert(b.aggregator).second)
      throw std::invalid_argument("duplicate bid from " + b.aggregator);
  }
}

std::vector<double> BidSet::PositiveBidValues() const {
  std::vector<double> values;
  for (const Bid& b : bids) {
    if (b.max_price > Money::Zero())
      values.push_back(b.max_price.ToDouble());
  }
  return values;
}

size_t WinnerCount(std::span<const double> bids, double price) {
  return static_cast<size_t>(std::count_if(
      bids.begin(), bids.end(), [price](double b) { return price <= b; }));
}

double RevenueAtPrice(std::span<const double> bids, double price) {
  return price * static_cast<double>(WinnerCount(bids, price));
}

Money RevenueAtPrice(const BidSet& bids, Money price) {
  int64_t count = 0;
  for (const Bid& b : bids.bids) {
    if (b.max_price > Money::Zero() && price <= b.max_price)
      ++count;
  }
  return price * count;
}

OptimalPrice ComputeOptimalPrice(const BidSet& bids) {
  std::vector<Money> values;
  for (const Bid& b : bids.bids) {
    if (b.max_price > Money::Zero())
      values.push_back(b.max_price);
  }
  std::sort(values.begin(), values.end());
  OptimalPrice best;
  // Scanning ascending with strict improvement keeps the lowest price on ties.
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0 && values[i] == values[i - 1])
      continue;
    const int64_t winners = static_cast<int64_t>(values.size() - i);
    const Money revenue = values[i] * winners;
    if (revenue > best.revenue) {
      best.price = values[i];
      best.revenue = revenue;
      best.winners = static_cast<size_t>(winners);
    }
  }
  return best;
}

PriceDensity PriceDensity::Create(std::span<const double> bids,
                                  double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("epsilon must be positive and finite");
  std::vector<double> values;
  for (double b : bids) {
    if (b > 0.0)
      values.push_back(b);
  }
  if (values.empty())
    throw std::invalid_argument("price density needs a positive bid");
  std::sort(values.begin(), values.end());

  PriceDensity d;
  d.epsilon_ = epsilon;
  double lo = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] == lo)
      continue;
    Segment s;
    s.lo = lo;
    s.hi = values[i];
    s.winners = values.size() - i;
    s.slope = epsilon * static_cast<double>(s.winners);
    s.log_mass = LogIntegralExp(s.slope, s.lo, s.hi);
    d.segments_.push_back(s);
    lo = values[i];
  }

  double max_log = -std::numeric_limits<double>::infinity();
  for (const Segment& s : d.segments_)
    max_log = std::max(max_log, s.log_mass);
  double sum = 0.0;
  for (const Segment& s : d.segments_)
    sum += std::exp(s.log_mass - max_log);
  d.log_normalizer_ = max_log + std::log(sum);
  return d;
}

double PriceDensity::SegmentProbability(size_t i) const {
  return std::exp(segments_.at(i).log_mass - log_normalizer_);
}

size_t PriceDensity::SegmentFor(double price) const {
  auto it = std::lower_bound(
      segments_.begin(), segments_.end(), price,
      [](const Segment& s, double p) { return s.hi < p; });
  return static_cast<size_t>(it - segments_.begin());
}

double PriceDensity::LogWeight(double price) const {
  if (!(price > 0.0) || price > support_max())
    return -std::numeric_limits<double>::infinity();
  return segments_[SegmentFor(price)].slope * price;
}

double PriceDensity::Pdf(double price) const {
  return std::exp(LogWeight(price) - log_normalizer_);
}

double PriceDensity::Cdf(double price) const {
  if (!(price > 0.0))
    return 0.0;
  if (price >= support_max())
    return 1.0;
  const size_t idx = SegmentFor(price);
  double cdf = 0.0;
  for (size_t i = 0; i < idx; ++i)
    cdf += SegmentProbability(i);
  const Segment& s = segments_[idx];
  if (price > s.lo)
    cdf += std::exp(LogIntegralExp(s.slope, s.lo, price) - log_normalizer_);
  return std::min(cdf, 1.0);
}

double PriceDensity::Sample(Rng& rng) const {
  const double pick = UniformDouble(rng);
  size_t chosen = segments_.size() - 1;
  double cumulative = 0.0;
  for (size_t i = 0; i < segments_.size(); ++i) {
    cumulative += SegmentProbability(i);
    if (pick < cumulative) {
      chosen = i;
      break;
    }
  }
  const Segment& s = segments_[chosen];
  const double u = UniformOpenDouble(rng);
  const double length = s.hi - s.lo;
  const double price =
      s.hi + std::log1p((1.0 - u) * std::expm1(-s.slope * length)) / s.slope;
  return std::clamp(price, s.lo, s.hi);
}

double PriceDensity::ExpectedRevenue() const {
  double total = 0.0;
  for (size_t i = 0; i < segments_.size(); ++i) {
    const Segment& s = segments_[i];
    const double mean_price = s.hi - TruncatedExpMeanGap(s.slope, s.hi - s.lo);
    total += SegmentProbability(i) * static_cast<double>(s.winners) *
             mean_price;
  }
  return total;
}

double SamplePrice(const PriceDensity& density, uint64_t seed) {
  Rng rng(seed);
  return density.Sample(rng);
}

AuctionOutcome RunAuction(const BidSet& bids, double epsilon, uint64_t seed,
                          int64_t period) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("epsilon must be positive");
  bids.Validate();
  AuctionOutcome outcome;
  outcome.user = bids.user;
  outcome.period = period;
  const std::vector<double> values = bids.PositiveBidValues();
  if (values.empty())
    return outcome;

  const PriceDensity density = PriceDensity::Create(values, epsilon);
  outcome.clearing_price = Money::FromDouble(SamplePrice(density, seed));
  for (const Bid& b : bids.bids) {
    if (b.max_price > Money::Zero() && outcome.clearing_price <= b.max_price)
      outcome.winners.push_back(b.aggregator);
  }
  std::sort(outcome.winners.begin(), outcome.winners.end());
  outcome.user_revenue =
      outcome.clearing_price * static_cast<int64_t>(outcome.winners.size());
  return outcome;
}

double ExpectedRevenue(std::span<const double> bids, double epsilon) {
  return PriceDensity::Create(bids, epsilon).ExpectedRevenue();
}

double ExpectedRevenue(const BidSet& bids, double epsilon) {
  return ExpectedRevenue(bids.PositiveBidValues(), epsilon);
}

double RevenueLowerBound(double opt, double epsilon, size_t optimal_winners) {
  return opt - 3.0 *
                   std::log(std::exp(1.0) + opt * epsilon * epsilon *
                                                static_cast<double>(
                                                    optimal_winners)) /
                   epsilon;
}

}  // namespace infomarket::auction
