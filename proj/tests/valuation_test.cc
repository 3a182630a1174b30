#include "infomarket/valuation.h"

#include <random>

#include "gtest/gtest.h"
#include "tests/oracles.h"

namespace infomarket::valuation {
namespace {

AdvertiserSpec Adv(std::string id, std::map<std::string, double> kw) {
  return AdvertiserSpec{std::move(id), std::move(kw)};
}

AnonymizedProfile Profile(std::vector<SiteVisits> sites) {
  AnonymizedProfile p;
  p.pseudonym = "p1";
  p.sites = std::move(sites);
  return p;
}

TEST(RelevantKeywordsTest, Examples) {
  EXPECT_TRUE(RelevantKeywords(Profile({})).empty());
  EXPECT_EQ(RelevantKeywords(Profile({{"j1", 1, {"k1"}}, {"j2", 3, {"k1", "k2"}}})),
            (std::set<std::string>{"k1", "k2"}));
  EXPECT_EQ(RelevantKeywords(Profile({{"j1", 0, {"k9"}}, {"j2", 1, {"k2"}}})),
            (std::set<std::string>{"k2"}));
}

TEST(EffectiveCpcTest, HighestSharedKeyword) {
  const AdvertiserSpec a = Adv("a", {{"k1", 0.5}, {"k2", 2.0}, {"k3", 9.0}});
  EXPECT_EQ(EffectiveCpc(a, {"k1", "k2"}), 2.0);
  EXPECT_FALSE(EffectiveCpc(a, {"k7"}).has_value());
}

TEST(AllocationValueTest, Examples) {
  const std::vector<AdvertiserSpec> ads = {Adv("a", {{"k", 1.0}})};
  const AnonymizedProfile p = Profile({{"j", 2, {"k"}}});
  EXPECT_DOUBLE_EQ(AllocationValue({{"a", 2}}, ads, p, ClickModel{0.5}), 0.75);
  EXPECT_EQ(AllocationValue({{"a", 2}}, ads, p, ClickModel{0.0}), 0.0);
  EXPECT_EQ(AllocationValue({{"a", 0}}, ads, p, ClickModel{0.5}), 0.0);
  EXPECT_EQ(AllocationValue({}, ads, p, ClickModel{0.5}), 0.0);
}

TEST(AllocationValueTest, RejectsAdvertiserWithoutSharedKeyword) {
  const std::vector<AdvertiserSpec> ads = {Adv("a", {{"k", 1.0}}),
                                           Adv("b", {{"other", 1.0}})};
  const AnonymizedProfile p = Profile({{"j", 2, {"k"}}});
  EXPECT_THROW(AllocationValue({{"b", 1}}, ads, p, ClickModel{0.5}),
               std::invalid_argument);
  EXPECT_THROW(AllocationValue({{"zzz", 1}}, ads, p, ClickModel{0.5}),
               std::invalid_argument);
}

TEST(GreedyAllocateTest, Examples) {
  const AnonymizedProfile p = Profile({{"j", 2, {"k", "m"}}});
  const std::vector<AdvertiserSpec> same = {Adv("a", {{"k", 1.0}}),
                                            Adv("b", {{"k", 1.0}})};
  const Allocation split = GreedyAllocate(2, same, p, ClickModel{0.5});
  EXPECT_EQ(split, (Allocation{{"a", 1}, {"b", 1}}));
  EXPECT_DOUBLE_EQ(AllocationValue(split, same, p, ClickModel{0.5}), 1.0);

  const std::vector<AdvertiserSpec> two = {Adv("a", {{"k", 1.0}}),
                                           Adv("b", {{"m", 2.0}})};
  EXPECT_EQ(GreedyAllocate(1, two, p, ClickModel{0.5}), (Allocation{{"b", 1}}));
  EXPECT_TRUE(GreedyAllocate(0, two, p, ClickModel{0.5}).empty());
}

TEST(GreedyAllocateTest, NoEligibleAdvertiser) {
  const std::vector<AdvertiserSpec> ads = {Adv("a", {{"x", 1.0}})};
  EXPECT_TRUE(GreedyAllocate(5, ads, Profile({{"j", 5, {"k"}}}), ClickModel{0.5})
                  .empty());
  EXPECT_EQ(BidForUser(Profile({{"j", 5, {"k"}}}), ads, ClickModel{0.5}), 0.0);
}

TEST(GreedyAllocateTest, TieBreakBySmallerId) {
  const std::vector<AdvertiserSpec> ads = {Adv("b", {{"k", 1.0}}),
                                           Adv("a", {{"k", 1.0}})};
  EXPECT_EQ(GreedyAllocate(1, ads, Profile({{"j", 1, {"k"}}}), ClickModel{0.3}),
            (Allocation{{"a", 1}}));
}

TEST(BruteForceTest, CapsAndExamples) {
  const std::vector<AdvertiserSpec> ads = {Adv("a", {{"k", 1.0}}),
                                           Adv("b", {{"k", 1.0}})};
  const AnonymizedProfile p = Profile({{"j", 2, {"k"}}});
  EXPECT_DOUBLE_EQ(
      AllocationValue(BruteForceAllocate(2, ads, p, ClickModel{0.5}), ads, p,
                      ClickModel{0.5}),
      1.0);
  EXPECT_THROW(BruteForceAllocate(9, ads, p, ClickModel{0.5}),
               std::invalid_argument);
  std::vector<AdvertiserSpec> six;
  for (int i = 0; i < 6; ++i)
    six.push_back(Adv("a" + std::to_string(i), {{"k", 1.0}}));
  EXPECT_THROW(BruteForceAllocate(2, six, p, ClickModel{0.5}),
               std::invalid_argument);
}

// Greedy against an exhaustive oracle that never touches the library's
// objective code.
TEST(GreedyAllocateTest, OptimalAgainstExhaustiveOracle) {
  std::mt19937_64 rng(4);
  const double cpcs[] = {0.5, 1, 2};
  const char* keywords[] = {"k0", "k1", "k2", "k3"};
  for (int trial = 0; trial < 300; ++trial) {
    const size_t n_ads = 1 + trial % 4;
    std::vector<AdvertiserSpec> ads;
    for (size_t i = 0; i < n_ads; ++i) {
      AdvertiserSpec a;
      a.id = "adv" + std::to_string(i);
      const size_t nk = 1 + rng() % 2;
      for (size_t k = 0; k < nk; ++k)
        a.keyword_cpc[keywords[rng() % 4]] = cpcs[rng() % 3];
      ads.push_back(a);
    }
    const AnonymizedProfile p = Profile({{"j", 1, {"k0", "k1"}}, {"j2", 1, {"k2"}}});
    const std::set<std::string> kws = RelevantKeywords(p);
    std::vector<oracles::SimpleAdvertiser> simple;
    for (const AdvertiserSpec& a : ads) {
      double best = 0;
      for (const auto& [k, c] : a.keyword_cpc) {
        if (kws.count(k))
          best = std::max(best, c);
      }
      simple.push_back({a.id, best});
    }
    for (double pi : {0.1, 0.3, 0.5, 0.9}) {
      for (int64_t n = 0; n <= 6; ++n) {
        const double greedy =
            AllocationValue(GreedyAllocate(n, ads, p, ClickModel{pi}), ads, p,
                            ClickModel{pi});
        EXPECT_NEAR(greedy, oracles::ExhaustiveBest(simple, n, pi), 1e-12);
      }
    }
  }
}

TEST(AllocationValueTest, MonotoneInSlotsAndPi) {
  const std::vector<AdvertiserSpec> ads = {Adv("a", {{"k", 1.5}}),
                                           Adv("b", {{"k", 0.7}})};
  const AnonymizedProfile p = Profile({{"j", 1, {"k"}}});
  double prev = 0;
  for (int64_t n = 0; n < 20; ++n) {
    const double v = AllocationValue(GreedyAllocate(n, ads, p, ClickModel{0.2}), ads,
                                     p, ClickModel{0.2});
    EXPECT_GE(v, prev);
    prev = v;
  }
  prev = 0;
  for (double pi = 0; pi <= 1.0; pi += 0.05) {
    const double v =
        AllocationValue(GreedyAllocate(5, ads, p, ClickModel{pi}), ads, p, ClickModel{pi});
    EXPECT_GE(v + 1e-15, prev);
    prev = v;
  }
}

TEST(BidForUserTest, Examples) {
  const std::vector<AdvertiserSpec> ads = {Adv("a", {{"k", 1.0}})};
  EXPECT_DOUBLE_EQ(BidForUser(Profile({{"j", 2, {"k"}}}), ads, ClickModel{0.5}), 0.75);
  EXPECT_EQ(BidForUser(Profile({{"j", 2, {"z"}}}), ads, ClickModel{0.5}), 0.0);
}

TEST(BidForUserTest, ScaleEquivariantInCpc) {
  std::vector<AdvertiserSpec> ads = {Adv("a", {{"k", 1.25}, {"m", 0.5}}),
                                     Adv("b", {{"m", 2.0}})};
  const AnonymizedProfile p = Profile({{"j", 4, {"k"}}, {"j2", 3, {"m"}}});
  const double base = BidForUser(p, ads, ClickModel{0.3});
  for (AdvertiserSpec& a : ads) {
    for (auto& [k, c] : a.keyword_cpc)
      c *= 2;
  }
  EXPECT_DOUBLE_EQ(BidForUser(p, ads, ClickModel{0.3}), 2 * base);
}

TEST(DeriveIntentsTest, Examples) {
  const std::vector<AdvertiserSpec> ads = {Adv("a", {{"k", 1.0}}),
                                           Adv("b", {{"m", 3.0}})};
  const AnonymizedProfile full = Profile({{"j", 2, {"k"}}, {"j2", 2, {"m"}}});
  std::map<std::string, AnonymizedProfile> views = {
      {"empty", Profile({})}, {"all", full}, {"part", full.Restricted({"j"})}};
  const engine::IntentProfile in =
      DeriveIntents(full, views, 2.0, ads, ClickModel{0.5});
  EXPECT_EQ(in.impl.at("empty"), 1.0);
  EXPECT_EQ(in.impl.at("all"), in.expl);
  EXPECT_GT(in.impl.at("part"), 1.0);
  EXPECT_LT(in.impl.at("part"), in.expl);
  // Best split of 4 slots is a:1, b:3, worth 0.5 + 2.625. expl = 1 + beta *
  // v / N.
  EXPECT_DOUBLE_EQ(in.expl, 1 + 2 * 3.125 / 4);

  const engine::IntentProfile zero = DeriveIntents(full, views, 0, ads, ClickModel{0.5});
  EXPECT_EQ(zero.expl, 1.0);
  for (const auto& [a, v] : zero.impl)
    EXPECT_EQ(v, 1.0);
}

TEST(DeriveIntentsTest, AddingSitesNeverLowersImpl) {
  std::mt19937_64 rng(77);
  std::vector<AdvertiserSpec> ads;
  for (int i = 0; i < 8; ++i)
    ads.push_back(Adv("a" + std::to_string(i),
                      {{"k" + std::to_string(rng() % 6), 0.1 + (rng() % 50) / 10.0}}));
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SiteVisits> sites;
    for (int j = 0; j < 6; ++j)
      sites.push_back({"s" + std::to_string(j), static_cast<int64_t>(1 + rng() % 5),
                       {"k" + std::to_string(rng() % 6)}});
    const AnonymizedProfile full = Profile(sites);
    std::set<std::string> visible;
    std::map<std::string, AnonymizedProfile> views;
    for (int j = 0; j < 6; ++j) {
      visible.insert("s" + std::to_string(j));
      views["v" + std::to_string(j)] = full.Restricted(visible);
    }
    const engine::IntentProfile in =
        DeriveIntents(full, views, 1.5, ads, ClickModel{0.2});
    EXPECT_NO_THROW(in.Validate());
    double prev = 1.0;
    for (int j = 0; j < 6; ++j) {
      const double impl = in.impl.at("v" + std::to_string(j));
      EXPECT_GE(impl, prev);
      EXPECT_LE(impl, in.expl);
      prev = impl;
    }
  }
}

}  // namespace
}  // namespace infomarket::valuation
