#ifndef INFOMARKET_TRACE_H_
#define INFOMARKET_TRACE_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "infomarket/rng.h"
#include "infomarket/valuation.h"

// Browsing traces: who visited which publisher, and which aggregators were
// embedded there. The generator is a synthetic stand-in for real HTTP logs.
namespace infomarket::trace {

struct TraceEvent {
  int64_t ts = 0;  // seconds
  std::string user;
  std::string publisher;                 // root domain
  std::vector<std::string> aggregators;  // root domains embedded on the page
  std::vector<std::string> keywords;     // site keywords

  bool operator==(const TraceEvent&) const = default;
};

class Trace {
 public:
  Trace() = default;
  // Throws std::invalid_argument if timestamps decrease or a user or
  // publisher is empty.
  explicit Trace(std::vector<TraceEvent> events);

  const std::vector<TraceEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }

  // Sorted, distinct.
  std::vector<std::string> Users() const;
  std::vector<std::string> Aggregators() const;
  std::vector<std::string> Publishers() const;

  // Every visit of `user`, grouped by site.
  valuation::AnonymizedProfile FullProfile(const std::string& user) const;
  // Visits of `user` to sites embedding `aggregator`.
  valuation::AnonymizedProfile VisibleProfile(const std::string& user,
                                              const std::string& aggregator) const;
  // Per-user view of every aggregator that saw the user at least once.
  std::map<std::string, valuation::AnonymizedProfile> VisibleProfiles(
      const std::string& user) const;

 private:
  std::vector<TraceEvent> events_;
};

struct TraceParams {
  int users = 1000;
  int publishers = 200;
  int aggregators = 50;
  int64_t events = 100000;
  double popularity_skew = 1.0;  // Zipf exponent over publishers
  double embedding_skew = 1.0;   // power-law decay of aggregator coverage
  double top_coverage = 0.9;     // share of sites embedding the top aggregator
  double activity_skew = 0.5;    // Zipf exponent over users
  int64_t start_ts = 1'600'000'000;
  int64_t duration_seconds = 30 * 86400;
  std::vector<std::string> keywords;  // site keyword pool

  void Validate() const;
};

std::string UserName(int i);
std::string PublisherName(int i);
std::string AggregatorName(int i);

// Deterministic in (params, seed). Aggregator i is embedded on a site with
// probability top_coverage / (i+1)^embedding_skew (and on one random site
// if that placed it nowhere), and each site carries 1-3
// distinct keywords drawn from the pool.
Trace GenerateTrace(const TraceParams& params, uint64_t seed);

struct CatalogParams {
  int advertisers = 100;
  int keywords = 40;
  int max_keywords_per_advertiser = 4;
  double min_cpc = 0.1;
  double max_cpc = 5.0;
};

// Keyword names "kw00".."kwNN" and advertisers bidding on 1..max of them.
std::vector<valuation::AdvertiserSpec> GenerateCatalog(const CatalogParams& params,
                                                       uint64_t seed);
std::vector<std::string> CatalogKeywords(
    const std::vector<valuation::AdvertiserSpec>& catalog);

// Zipf-like sampler over {0..n-1} with weights 1/(i+1)^s.
class ZipfSampler {
 public:
  ZipfSampler(size_t n, double s);
  size_t operator()(Rng& rng) const;
  double Probability(size_t i) const;

 private:
  std::vector<double> cdf_;
};

}  // namespace infomarket::trace

#endif  // INFOMARKET_TRACE_H_
