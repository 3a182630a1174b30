#ifndef INFOMARKET_AUCTION_H_
#define INFOMARKET_AUCTION_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "infomarket/money.h"
#include "infomarket/rng.h"

// Exponential-mechanism auction for access to one user. Supply is unlimited:
// every bidder at or above the clearing price wins and pays that price.
namespace infomarket::auction {

struct Bid {
  std::string aggregator;
  Money max_price;
};

struct BidSet {
  std::string user;
  std::vector<Bid> bids;

  // Throws std::invalid_argument on negative bids or duplicate aggregators.
  void Validate() const;
  // Strictly positive bid values; zero bids abstain.
  std::vector<double> PositiveBidValues() const;
};

struct AuctionOutcome {
  std::string user;
  int64_t period = 0;
  Money clearing_price;
  std::vector<std::string> winners;  // sorted
  Money user_revenue;                // clearing_price * winners
};

// p * |{bids >= p}|.
double RevenueAtPrice(std::span<const double> bids, double price);
Money RevenueAtPrice(const BidSet& bids, Money price);

// Number of bids >= price.
size_t WinnerCount(std::span<const double> bids, double price);

struct OptimalPrice {
  Money price;
  Money revenue;  // OPT
  size_t winners = 0;
};

// Revenue-maximizing single price. The optimum sits at a bid value; ties go
// to the lower price (more winners). Empty bids give (0, 0).
OptimalPrice ComputeOptimalPrice(const BidSet& bids);

// Density of the clearing price, proportional to exp(epsilon * R(p)) with
// respect to Lebesgue measure on (0, max bid]. Between consecutive distinct
// bids the winner count w is constant, so each piece is an exponential with
// log-slope epsilon * w.
class PriceDensity {
 public:
  struct Segment {
    double lo = 0;
    double hi = 0;
    size_t winners = 0;
    double slope = 0;     // epsilon * winners
    double log_mass = 0;  // log of the unnormalized mass on (lo, hi]
  };

  // Throws std::invalid_argument if epsilon <= 0 or no bid is positive.
  static PriceDensity Create(std::span<const double> bids, double epsilon);

  const std::vector<Segment>& segments() const { return segments_; }
  double epsilon() const { return epsilon_; }
  double log_normalizer() const { return log_normalizer_; }
  double support_max() const { return segments_.back().hi; }

  // Probability mass of each segment.
  double SegmentProbability(size_t i) const;

  double Pdf(double price) const;
  double Cdf(double price) const;
  // Unnormalized log density epsilon * R(p) on the support; -inf outside.
  double LogWeight(double price) const;

  // Two-stage exact draw: pick a segment by mass, then invert the CDF of
  // the truncated exponential inside it.
  double Sample(Rng& rng) const;

  // E[R(p)], summing closed-form truncated-exponential means per segment.
  double ExpectedRevenue() const;

 private:
  PriceDensity() = default;
  size_t SegmentFor(double price) const;

  double epsilon_ = 0;
  double log_normalizer_ = 0;
  std::vector<Segment> segments_;
};

// Price drawn from the density with a dedicated generator seeded by `seed`.
double SamplePrice(const PriceDensity& density, uint64_t seed);

// Runs the auction with its own seed. No positive bids means no sale.
AuctionOutcome RunAuction(const BidSet& bids, double epsilon, uint64_t seed,
                          int64_t period = 0);

// E[R(p)] under the mechanism. Throws like PriceDensity::Create.
double ExpectedRevenue(std::span<const double> bids, double epsilon);
double ExpectedRevenue(const BidSet& bids, double epsilon);

// OPT - 3 ln(e + OPT eps^2 m) / eps, with m the number of winners at OPT.
double RevenueLowerBound(double opt, double epsilon, size_t optimal_winners);

}  // namespace infomarket::auction

#endif  // INFOMARKET_AUCTION_H_
