#include "infomarket/valuation.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>

namespace infomarket::valuation {

void AdvertiserSpec::Validate() const {
  if (keyword_cpc.empty())
    throw std::invalid_argument("advertiser " + id + " has no keywords");
  for (const auto& [keyword, cpc] : keyword_cpc) {
    if (!(cpc >= 0.0))
      throw std::invalid_argument("negative CPC for " + id + "/" + keyword);
  }
}

int64_t AnonymizedProfile::TotalImpressions() const {
  int64_t total = 0;
  for (const SiteVisits& s : sites)
    total += std::max<int64_t>(s.count, 0);
  return total;
}

AnonymizedProfile AnonymizedProfile::Restricted(
    const std::set<std::string>& visible_sites) const {
  AnonymizedProfile out;
  out.pseudonym = pseudonym;
  for (const SiteVisits& s : sites) {
    if (visible_sites.count(s.site))
      out.sites.push_back(s);
  }
  return out;
}

void ClickModel::Validate() const {
  if (!(pi_click >= 0.0 && pi_click <= 1.0))
    throw std::invalid_argument("click probability must lie in [0, 1]");
}

int64_t TotalSlots(const Allocation& alloc) {
  int64_t total = 0;
  for (const auto& [id, n] : alloc)
    total += n;
  return total;
}

std::set<std::string> RelevantKeywords(const AnonymizedProfile& profile) {
  std::set<std::string> out;
  for (const SiteVisits& s : profile.sites) {
    if (s.count > 0)
      out.insert(s.keywords.begin(), s.keywords.end());
  }
  return out;
}

std::optional<double> EffectiveCpc(const AdvertiserSpec& advertiser,
                                   const std::set<std::string>& keywords) {
  std::optional<double> best;
  for (const auto& [keyword, cpc] : advertiser.keyword_cpc) {
    if (keywords.count(keyword) && (!best || cpc > *best))
      best = cpc;
  }
  return best;
}

namespace {

struct Eligible {
  std::string id;
  double cpc;
};

// Advertisers that can serve the profile, sorted by id.
std::vector<Eligible> EligibleAdvertisers(
    std::span<const AdvertiserSpec> advertisers,
    const AnonymizedProfile& profile) {
  const std::set<std::string> keywords = RelevantKeywords(profile);
  std::vector<Eligible> out;
  for (const AdvertiserSpec& a : advertisers) {
    if (auto cpc = EffectiveCpc(a, keywords))
      out.push_back({a.id, *cpc});
  }
  std::sort(out.begin(), out.end(),
            [](const Eligible& x, const Eligible& y) { return x.id < y.id; });
  return out;
}

double ClickValue(double cpc, double pi, int64_t slots) {
  return cpc * (1.0 - std::pow(1.0 - pi, static_cast<double>(slots)));
}

}  // namespace

double AllocationValue(const Allocation& alloc,
                       std::span<const AdvertiserSpec> advertisers,
                       const AnonymizedProfile& profile,
                       const ClickModel& model) {
  model.Validate();
  const std::set<std::string> keywords = RelevantKeywords(profile);
  double total = 0.0;
  for (const auto& [id, slots] : alloc) {
    if (slots < 0)
      throw std::invalid_argument("negative slot count for " + id);
    if (slots == 0)
      continue;
    auto it = std::find_if(advertisers.begin(), advertisers.end(),
                           [&](const AdvertiserSpec& a) { return a.id == id; });
    if (it == advertisers.end())
      throw std::invalid_argument("unknown advertiser " + id);
    auto cpc = EffectiveCpc(*it, keywords);
    if (!cpc)
      throw std::invalid_argument("advertiser " + id +
                                  " shares no keyword with the profile");
    total += ClickValue(*cpc, model.pi_click, slots);
  }
  return total;
}

Allocation GreedyAllocate(int64_t slots,
                          std::span<const AdvertiserSpec> advertisers,
                          const AnonymizedProfile& profile,
                          const ClickModel& model) {
  if (slots < 0)
    throw std::invalid_argument("slot count must be >= 0");
  model.Validate();
  Allocation alloc;
  const std::vector<Eligible> eligible =
      EligibleAdvertisers(advertisers, profile);
  if (eligible.empty() || slots == 0)
    return alloc;

  struct Entry {
    double gain;
    size_t index;  // into `eligible`, which is id-sorted
  };
  auto worse = [](const Entry& x, const Entry& y) {
    if (x.gain != y.gain)
      return x.gain < y.gain;
    return x.index > y.index;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (size_t i = 0; i < eligible.size(); ++i)
    heap.push({eligible[i].cpc * model.pi_click, i});

  std::vector<int64_t> counts(eligible.size(), 0);
  const double decay = 1.0 - model.pi_click;
  for (int64_t s = 0; s < slots; ++s) {
    Entry top = heap.top();
    heap.pop();
    ++counts[top.index];
    top.gain *= decay;
    heap.push(top);
  }
  for (size_t i = 0; i < eligible.size(); ++i) {
    if (counts[i] > 0)
      alloc[eligible[i].id] = counts[i];
  }
  return alloc;
}

Allocation BruteForceAllocate(int64_t slots,
                              std::span<const AdvertiserSpec> advertisers,
                              const AnonymizedProfile& profile,
                              const ClickModel& model) {
  if (slots < 0 || slots > kBruteForceMaxSlots ||
      advertisers.size() > kBruteForceMaxAdvertisers) {
    throw std::invalid_argument("instance too large for brute force");
  }
  model.Validate();
  const std::vector<Eligible> eligible =
      EligibleAdvertisers(advertisers, profile);
  Allocation best;
  if (eligible.empty() || slots == 0)
    return best;

  double best_value = -1.0;
  std::vector<int64_t> counts(eligible.size(), 0);
  // Enumerates every composition of `slots` into eligible.size() parts.
  std::function<void(size_t, int64_t)> recurse = [&](size_t i,
                                                     int64_t remaining) {
    if (i + 1 == eligible.size()) {
      counts[i] = remaining;
      Allocation candidate;
      for (size_t k = 0; k < eligible.size(); ++k) {
        if (counts[k] > 0)
          candidate[eligible[k].id] = counts[k];
      }
      const double value =
          AllocationValue(candidate, advertisers, profile, model);
      if (value > best_value) {
        best_value = value;
        best = std::move(candidate);
      }
      return;
    }
    for (int64_t n = remaining; n >= 0; --n) {
      counts[i] = n;
      recurse(i + 1, remaining - n);
    }
  };
  recurse(0, slots);
  return best;
}

double BidForUser(const AnonymizedProfile& profile,
                  std::span<const AdvertiserSpec> advertisers,
                  const ClickModel& model) {
  const Allocation alloc = GreedyAllocate(profile.TotalImpressions(),
                                          advertisers, profile, model);
  return AllocationValue(alloc, advertisers, profile, model);
}

engine::IntentProfile DeriveIntents(
    const AnonymizedProfile& full,
    const std::map<std::string, AnonymizedProfile>& visible_by_aggregator,
    double beta, std::span<const AdvertiserSpec> advertisers,
    const ClickModel& model) {
  if (!(beta >= 0.0))
    throw std::invalid_argument("beta must be >= 0");
  engine::IntentProfile intents;
  const int64_t impressions = full.TotalImpressions();
  if (impressions == 0) {
    for (const auto& [aggregator, profile] : visible_by_aggregator)
      intents.impl[aggregator] = 1.0;
    return intents;
  }
  const double scale = beta / static_cast<double>(impressions);
  intents.expl = 1.0 + scale * BidForUser(full, advertisers, model);
  for (const auto& [aggregator, profile] : visible_by_aggregator) {
    const double impl = 1.0 + scale * BidForUser(profile, advertisers, model);
    intents.impl[aggregator] = std::min(impl, intents.expl);
  }
  return intents;
}

}  // namespace infomarket::valuation
