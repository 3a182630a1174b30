#include "infomarket/trace.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace infomarket::trace {

namespace {

std::string Format(const char* pattern, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), pattern, i);
  return buf;
}

std::string Pseudonym(const std::string& user) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "p%016llx",
                static_cast<unsigned long long>(HashString(user)));
  return buf;
}

// Picks `k` distinct indices from [0, n), sorted.
std::vector<size_t> Choose(Rng& rng, size_t n, size_t k) {
  std::vector<size_t> pool(n);
  for (size_t i = 0; i < n; ++i)
    pool[i] = i;
  k = std::min(k, n);
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + UniformIndex(rng, n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

valuation::AnonymizedProfile BuildProfile(
    const std::string& user, const std::vector<const TraceEvent*>& events) {
  std::map<std::string, valuation::SiteVisits> by_site;
  for (const TraceEvent* e : events) {
    valuation::SiteVisits& s = by_site[e->publisher];
    s.site = e->publisher;
    ++s.count;
    s.keywords.insert(e->keywords.begin(), e->keywords.end());
  }
  valuation::AnonymizedProfile profile;
  profile.pseudonym = Pseudonym(user);
  for (auto& [site, visits] : by_site)
    profile.sites.push_back(std::move(visits));
  return profile;
}

}  // namespace

std::string UserName(int i) { return Format("u%04d", i); }
std::string PublisherName(int i) { return Format("pub%03d.com", i); }
std::string AggregatorName(int i) { return Format("agg%02d.net", i); }

Trace::Trace(std::vector<TraceEvent> events) : events_(std::move(events)) {
  for (size_t i = 0; i < events_.size(); ++i) {
    const TraceEvent& e = events_[i];
    if (e.user.empty() || e.publisher.empty())
      throw std::invalid_argument("trace event " + std::to_string(i + 1) +
                                  " lacks user or publisher");
    if (i > 0 && e.ts < events_[i - 1].ts)
      throw std::invalid_argument("trace timestamps decrease at event " +
                                  std::to_string(i + 1));
  }
}

std::vector<std::string> Trace::Users() const {
  std::set<std::string> s;
  for (const TraceEvent& e : events_)
    s.insert(e.user);
  return {s.begin(), s.end()};
}

std::vector<std::string> Trace::Aggregators() const {
  std::set<std::string> s;
  for (const TraceEvent& e : events_)
    s.insert(e.aggregators.begin(), e.aggregators.end());
  return {s.begin(), s.end()};
}

std::vector<std::string> Trace::Publishers() const {
  std::set<std::string> s;
  for (const TraceEvent& e : events_)
    s.insert(e.publisher);
  return {s.begin(), s.end()};
}

valuation::AnonymizedProfile Trace::FullProfile(const std::string& user) const {
  std::vector<const TraceEvent*> mine;
  for (const TraceEvent& e : events_) {
    if (e.user == user)
      mine.push_back(&e);
  }
  return BuildProfile(user, mine);
}

valuation::AnonymizedProfile Trace::VisibleProfile(
    const std::string& user, const std::string& aggregator) const {
  std::vector<const TraceEvent*> mine;
  for (const TraceEvent& e : events_) {
    if (e.user == user &&
        std::find(e.aggregators.begin(), e.aggregators.end(), aggregator) !=
            e.aggregators.end()) {
      mine.push_back(&e);
    }
  }
  return BuildProfile(user, mine);
}

std::map<std::string, valuation::AnonymizedProfile> Trace::VisibleProfiles(
    const std::string& user) const {
  std::map<std::string, std::vector<const TraceEvent*>> by_agg;
  for (const TraceEvent& e : events_) {
    if (e.user != user)
      continue;
    for (const std::string& a : e.aggregators)
      by_agg[a].push_back(&e);
  }
  std::map<std::string, valuation::AnonymizedProfile> out;
  for (const auto& [a, events] : by_agg)
    out[a] = BuildProfile(user, events);
  return out;
}

void TraceParams::Validate() const {
  if (users <= 0 || publishers <= 0 || aggregators < 0 || events < 0)
    throw std::invalid_argument(
        "users and publishers must be positive, aggregators and events >= 0");
  if (keywords.empty())
    throw std::invalid_argument("keyword catalog is empty");
  if (!(popularity_skew >= 0) || !(embedding_skew >= 0) ||
      !(activity_skew >= 0))
    throw std::invalid_argument("skews must be >= 0");
  if (!(top_coverage >= 0 && top_coverage <= 1))
    throw std::invalid_argument("top_coverage must lie in [0, 1]");
  if (duration_seconds <= 0)
    throw std::invalid_argument("duration must be positive");
}

ZipfSampler::ZipfSampler(size_t n, double s) {
  if (n == 0)
    throw std::invalid_argument("Zipf sampler needs n >= 1");
  cdf_.resize(n);
  double total = 0;
  for (size_t i = 0; i < n; ++i) {
    total += std::pow(static_cast<double>(i + 1), -s);
    cdf_[i] = total;
  }
  for (double& c : cdf_)
    c /= total;
  cdf_.back() = 1.0;
}

size_t ZipfSampler::operator()(Rng& rng) const {
  const double u = UniformDouble(rng);
  return static_cast<size_t>(
      std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
}

double ZipfSampler::Probability(size_t i) const {
  return i == 0 ? cdf_[0] : cdf_[i] - cdf_[i - 1];
}

Trace GenerateTrace(const TraceParams& params, uint64_t seed) {
  params.Validate();
  struct Site {
    std::vector<std::string> keywords;
    std::vector<std::string> aggregators;
  };
  std::vector<Site> sites(params.publishers);
  Rng site_rng(DeriveSeed(seed, "sites"));
  for (Site& site : sites) {
    const size_t k = 1 + UniformIndex(site_rng, 3);
    for (size_t i : Choose(site_rng, params.keywords.size(), k))
      site.keywords.push_back(params.keywords[i]);
    std::sort(site.keywords.begin(), site.keywords.end());
    for (int a = 0; a < params.aggregators; ++a) {
      const double p = std::min(
          1.0, params.top_coverage * std::pow(a + 1.0, -params.embedding_skew));
      if (UniformDouble(site_rng) < p)
        site.aggregators.push_back(AggregatorName(a));
    }
  }
  // Every aggregator is embedded somewhere, so the trace has exactly
  // `aggregators` of them whenever the sites are visited.
  for (int a = 0; a < params.aggregators; ++a) {
    const std::string name = AggregatorName(a);
    const bool placed = std::any_of(sites.begin(), sites.end(), [&](const Site& s) {
      return std::binary_search(s.aggregators.begin(), s.aggregators.end(), name);
    });
    if (!placed) {
      std::vector<std::string>& list =
          sites[UniformIndex(site_rng, sites.size())].aggregators;
      list.insert(std::upper_bound(list.begin(), list.end(), name), name);
    }
  }

  const ZipfSampler pick_user(params.users, params.activity_skew);
  const ZipfSampler pick_site(params.publishers, params.popularity_skew);
  Rng event_rng(DeriveSeed(seed, "events"));
  std::vector<TraceEvent> events;
  events.reserve(params.events);
  for (int64_t i = 0; i < params.events; ++i) {
    TraceEvent e;
    e.user = UserName(static_cast<int>(pick_user(event_rng)));
    const size_t j = pick_site(event_rng);
    e.publisher = PublisherName(static_cast<int>(j));
    e.ts = params.start_ts + static_cast<int64_t>(UniformIndex(
                                 event_rng, params.duration_seconds));
    e.aggregators = sites[j].aggregators;
    e.keywords = sites[j].keywords;
    events.push_back(std::move(e));
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const TraceEvent& x, const TraceEvent& y) {
                     return x.ts < y.ts;
                   });
  return Trace(std::move(events));
}

std::vector<valuation::AdvertiserSpec> GenerateCatalog(
    const CatalogParams& params, uint64_t seed) {
  if (params.advertisers < 0 || params.keywords <= 0 ||
      params.max_keywords_per_advertiser <= 0 ||
      !(params.min_cpc >= 0 && params.max_cpc >= params.min_cpc)) {
    throw std::invalid_argument("invalid catalog parameters");
  }
  Rng rng(DeriveSeed(seed, "catalog"));
  std::vector<valuation::AdvertiserSpec> out;
  for (int a = 0; a < params.advertisers; ++a) {
    valuation::AdvertiserSpec spec;
    spec.id = Format("adv%03d", a);
    const size_t k =
        1 + UniformIndex(rng, static_cast<uint64_t>(
                                  params.max_keywords_per_advertiser));
    for (size_t i : Choose(rng, params.keywords, k)) {
      const double cpc =
          params.min_cpc + UniformDouble(rng) * (params.max_cpc - params.min_cpc);
      spec.keyword_cpc[Format("kw%02d", static_cast<int>(i))] =
          std::round(cpc * 100.0) / 100.0;
    }
    out.push_back(std::move(spec));
  }
  return out;
}

std::vector<std::string> CatalogKeywords(
    const std::vector<valuation::AdvertiserSpec>& catalog) {
  std::set<std::string> s;
  for (const valuation::AdvertiserSpec& a : catalog) {
    for (const auto& [k, cpc] : a.keyword_cpc)
      s.insert(k);
  }
  return {s.begin(), s.end()};
}

}  // namespace infomarket::trace
