#ifndef INFOMARKET_VALUATION_H_
#define INFOMARKET_VALUATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "infomarket/engine.h"

// Emulated aggregator valuation of an anonymized browsing profile: ads are
// placed to maximize expected click revenue, where each advertiser earns its
// best matching keyword's CPC at most once per period.
namespace infomarket::valuation {

struct AdvertiserSpec {
  std::string id;
  std::map<std::string, double> keyword_cpc;

  void Validate() const;
};

struct SiteVisits {
  std::string site;
  int64_t count = 0;
  std::set<std::string> keywords;
};

// No identity, only a pseudonym and per-site visit counts.
struct AnonymizedProfile {
  std::string pseudonym;
  std::vector<SiteVisits> sites;

  int64_t TotalImpressions() const;
  AnonymizedProfile Restricted(const std::set<std::string>& visible_sites) const;
};

struct ClickModel {
  double pi_click = 0.1;

  void Validate() const;
};

// Ad slots per advertiser id.
using Allocation = std::map<std::string, int64_t>;

int64_t TotalSlots(const Allocation& alloc);

// Union of keyword sets of sites visited at least once.
std::set<std::string> RelevantKeywords(const AnonymizedProfile& profile);

// CPC of the advertiser's highest-CPC keyword shared with the profile, or
// nullopt when nothing is shared (the advertiser cannot serve).
std::optional<double> EffectiveCpc(const AdvertiserSpec& advertiser,
                                   const std::set<std::string>& keywords);

// Expected click revenue: sum over advertisers of CPC * (1 - (1-pi)^n_a).
// Throws std::invalid_argument when the allocation gives slots to an
// unknown advertiser or one without a shared keyword.
double AllocationValue(const Allocation& alloc,
                       std::span<const AdvertiserSpec> advertisers,
                       const AnonymizedProfile& profile,
                       const ClickModel& model);

// Assigns slots one at a time to the largest marginal gain
// CPC * pi * (1-pi)^n_a, ties to the smaller advertiser id. Each
// advertiser's gain is decreasing in its slot count, so this is optimal.
Allocation GreedyAllocate(int64_t slots,
                          std::span<const AdvertiserSpec> advertisers,
                          const AnonymizedProfile& profile,
                          const ClickModel& model);

inline constexpr int64_t kBruteForceMaxSlots = 8;
inline constexpr size_t kBruteForceMaxAdvertisers = 5;

// Exhaustive search over all allocations; small instances only.
Allocation BruteForceAllocate(int64_t slots,
                              std::span<const AdvertiserSpec> advertisers,
                              const AnonymizedProfile& profile,
                              const ClickModel& model);

// Greedy value over all of the profile's impressions. This is the bid an
// emulated aggregator places for access to the profile, before currency
// scaling.
double BidForUser(const AnonymizedProfile& profile,
                  std::span<const AdvertiserSpec> advertisers,
                  const ClickModel& model);

// Intents from valuations: expl = 1 + beta * v(full), impl[a] = 1 + beta *
// v(visible to a), where v is the greedy value divided by the impressions of
// the full profile. Normalizing by the full profile keeps v monotone under
// adding sites, so impl[a] <= expl.
engine::IntentProfile DeriveIntents(
    const AnonymizedProfile& full,
    const std::map<std::string, AnonymizedProfile>& visible_by_aggregator,
    double beta, std::span<const AdvertiserSpec> advertisers,
    const ClickModel& model);

}  // namespace infomarket::valuation

#endif  // INFOMARKET_VALUATION_H_
