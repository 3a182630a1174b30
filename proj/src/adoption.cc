#include "infomarket/adoption.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <tuple>

#include "infomarket/records.h"

namespace infomarket::adoption {

namespace {

constexpr double kSecondsPerMonth = 30.0 * 86400.0;

valuation::AnonymizedProfile MakeProfile(
    const std::string& pseudonym, const std::map<std::string, int64_t>& visits,
    const std::map<std::string, std::set<std::string>>& site_keywords) {
  valuation::AnonymizedProfile p;
  p.pseudonym = pseudonym;
  for (const auto& [site, count] : visits) {
    valuation::SiteVisits s;
    s.site = site;
    s.count = count;
    if (auto it = site_keywords.find(site); it != site_keywords.end())
      s.keywords = it->second;
    p.sites.push_back(std::move(s));
  }
  return p;
}

const engine::IntentProfile& IntentsOf(const MarketInstance& instance,
                                       const std::string& user) {
  static const engine::IntentProfile kNone;
  auto it = instance.intents.find(user);
  return it == instance.intents.end() ? kNone : it->second;
}

// Gross and publisher share for `count` transactions at `coefficient`.
Money Gross(double coefficient, const config::RunConfig& config) {
  const Money cpm = engine::Cpm(config.cpm, coefficient);
  return Money::FromDouble(cpm.ToDouble() *
                           static_cast<double>(config.market.impressions_per_period) /
                           1000.0);
}

// Shortest text that parses back to the same double.
std::string FormatDouble(double d) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, end);
}

}  // namespace

MarketInstance MarketInstance::FromTrace(
    const trace::Trace& trace,
    const std::vector<valuation::AdvertiserSpec>& catalog,
    const config::RunConfig& config) {
  config.Validate();
  MarketInstance inst;
  inst.period_seconds = config.period_seconds;
  inst.catalog = catalog;
  inst.click_model.pi_click = config.pi_click;
  if (trace.empty()) {
    inst.BuildIndex();
    return inst;
  }

  const int64_t t0 = trace.events().front().ts;
  std::map<std::string, std::map<std::string, int64_t>> full;
  std::map<std::string, std::map<std::string, std::map<std::string, int64_t>>>
      visible;
  std::map<std::tuple<std::string, std::string, std::string, int64_t>, int64_t>
      groups;
  std::set<std::string> aggregators;
  int64_t last_period = 0;
  for (const trace::TraceEvent& e : trace.events()) {
    const int64_t period = (e.ts - t0) / config.period_seconds;
    last_period = std::max(last_period, period);
    ++full[e.user][e.publisher];
    inst.site_keywords[e.publisher].insert(e.keywords.begin(), e.keywords.end());
    const std::set<std::string> embedded(e.aggregators.begin(),
                                         e.aggregators.end());
    for (const std::string& a : embedded) {
      aggregators.insert(a);
      ++visible[e.user][a][e.publisher];
      ++groups[{e.user, a, e.publisher, period}];
    }
  }
  inst.periods = last_period + 1;
  for (const auto& [user, visits] : full)
    inst.users.push_back(user);
  inst.aggregators.assign(aggregators.begin(), aggregators.end());
  for (const auto& [key, count] : groups) {
    const auto& [user, agg, pub, period] = key;
    inst.groups.push_back({user, agg, pub, period, count});
  }

  for (const std::string& user : inst.users) {
    const valuation::AnonymizedProfile profile =
        MakeProfile(user, full[user], inst.site_keywords);
    std::map<std::string, valuation::AnonymizedProfile> views;
    for (const auto& [agg, visits] : visible[user])
      views[agg] = MakeProfile(user, visits, inst.site_keywords);
    inst.intents[user] = valuation::DeriveIntents(profile, views, config.beta,
                                                  catalog, inst.click_model);
  }
  inst.BuildIndex();
  return inst;
}

MarketInstance MarketInstance::FromIntents(
    const std::map<std::string, engine::IntentProfile>& intents,
    int64_t transactions_per_pair) {
  MarketInstance inst;
  std::set<std::string> aggregators;
  for (const auto& [user, profile] : intents) {
    profile.Validate();
    inst.users.push_back(user);
    inst.intents[user] = profile;
    for (const auto& [agg, impl] : profile.impl) {
      aggregators.insert(agg);
      if (transactions_per_pair > 0)
        inst.groups.push_back({user, agg, "pub", 0, transactions_per_pair});
    }
  }
  inst.aggregators.assign(aggregators.begin(), aggregators.end());
  inst.BuildIndex();
  return inst;
}

void MarketInstance::BuildIndex() {
  by_aggregator_.clear();
  for (size_t i = 0; i < groups.size(); ++i)
    by_aggregator_[groups[i].aggregator].push_back(i);
}

const std::vector<size_t>& MarketInstance::GroupsOf(
    const std::string& aggregator) const {
  static const std::vector<size_t> kEmpty;
  auto it = by_aggregator_.find(aggregator);
  return it == by_aggregator_.end() ? kEmpty : it->second;
}

bool UserJoinDecision(MarketType type, const engine::IntentProfile& intents) {
  for (const auto& [agg, impl] : intents.impl) {
    if (game::UserGains(type, intents.expl, impl))
      return true;
  }
  return false;
}

double IntentCoefficient(MarketType type, const engine::IntentProfile& intents,
                         const std::string& aggregator, bool user_in,
                         bool aggregator_in) {
  if (!user_in)
    return engine::IsDnt(type) ? 1.0 : intents.ImplFor(aggregator);
  return aggregator_in ? intents.expl : 1.0;
}

TransactionSplit SplitTransaction(MarketType type,
                                  const engine::IntentProfile& intents,
                                  const std::string& aggregator, bool user_in,
                                  bool aggregator_in,
                                  const config::RunConfig& config) {
  TransactionSplit s;
  s.coefficient =
      IntentCoefficient(type, intents, aggregator, user_in, aggregator_in);
  s.gross = Gross(s.coefficient, config);
  s.publisher = game::PublisherShare(config.market.alpha, s.gross);
  if (user_in && aggregator_in) {
    s.shares = game::ComputeShapley(type, intents.expl, intents.ImplFor(aggregator));
    // Shares split the aggregator's alpha fraction of the revenue.
    engine::CpmParams scaled = config.cpm;
    scaled.ron = Money::FromDouble(config.cpm.ron.ToDouble() * config.market.alpha);
    const game::DataPrice price = game::ComputeDataPrice(
        s.shares, scaled, config.market.impressions_per_period);
    s.user = price.user_payment;
    s.market = price.market_payment;
  }
  s.aggregator = s.gross - s.publisher - s.user - s.market;
  return s;
}

Money AggregatorRevenue(const std::string& aggregator, const AdoptionState& state,
                        const MarketInstance& instance,
                        const config::RunConfig& config) {
  const MarketType type = config.market.market_type;
  const bool agg_in = state.aggregators.count(aggregator) > 0;
  Money total;
  const std::string* cached_user = nullptr;
  Money cached;
  for (size_t i : instance.GroupsOf(aggregator)) {
    const TransactionGroup& g = instance.groups[i];
    if (!cached_user || *cached_user != g.user) {
      cached = SplitTransaction(type, IntentsOf(instance, g.user), aggregator,
                                state.users.count(g.user) > 0, agg_in, config)
                   .aggregator;
      cached_user = &g.user;
    }
    total += cached * g.count;
  }
  return total;
}

bool AggregatorJoinDecision(const std::string& aggregator,
                            const AdoptionState& state,
                            const MarketInstance& instance,
                            const config::RunConfig& config) {
  AdoptionState joined = state;
  joined.aggregators.insert(aggregator);
  AdoptionState abstained = state;
  abstained.aggregators.erase(aggregator);
  return AggregatorRevenue(aggregator, joined, instance, config) >
         AggregatorRevenue(aggregator, abstained, instance, config);
}

std::set<std::string> AttractedUsers(const std::string& aggregator,
                                     const MarketInstance& instance,
                                     MarketType type) {
  std::set<std::string> out;
  for (size_t i : instance.GroupsOf(aggregator)) {
    const std::string& user = instance.groups[i].user;
    const engine::IntentProfile& p = IntentsOf(instance, user);
    if (game::UserGains(type, p.expl, p.ImplFor(aggregator)))
      out.insert(user);
  }
  return out;
}

bool StandaloneJoinCondition(const std::string& aggregator,
                             const MarketInstance& instance,
                             const config::RunConfig& config) {
  AdoptionState standalone;
  standalone.users =
      AttractedUsers(aggregator, instance, config.market.market_type);
  return AggregatorJoinDecision(aggregator, standalone, instance, config);
}

std::vector<std::string> MyopicViolations(const AdoptionState& state,
                                          const MarketInstance& instance,
                                          const config::RunConfig& config) {
  std::vector<std::string> out;
  for (const std::string& a : state.aggregators) {
    AdoptionState alone_out = state;
    alone_out.aggregators.erase(a);
    if (AggregatorRevenue(a, state, instance, config) <
        AggregatorRevenue(a, alone_out, instance, config)) {
      out.push_back(a);
    }
  }
  return out;
}

Accounting Account(const AdoptionState& state, const MarketInstance& instance,
                   const config::RunConfig& config) {
  const MarketType type = config.market.market_type;
  const bool auction_mode = config.pricing_mode == PricingMode::kAuction;
  Accounting acc;

  // Auction pricing: one auction per (user, period) among joined
  // aggregators that see the user in that period.
  std::map<std::pair<std::string, int64_t>, auction::AuctionOutcome> outcomes;
  if (auction_mode) {
    std::map<std::pair<std::string, int64_t>,
             std::map<std::string, std::map<std::string, int64_t>>>
        views;
    for (const TransactionGroup& g : instance.groups) {
      if (state.users.count(g.user) && state.aggregators.count(g.aggregator))
        views[{g.user, g.period}][g.aggregator][g.publisher] += g.count;
    }
    for (const auto& [key, by_agg] : views) {
      auction::BidSet bids;
      bids.user = key.first;
      for (const auto& [agg, visits] : by_agg) {
        const valuation::AnonymizedProfile profile =
            MakeProfile(key.first, visits, instance.site_keywords);
        const double value = valuation::BidForUser(profile, instance.catalog,
                                                   instance.click_model);
        bids.bids.push_back(
            {agg, Money::FromDouble(value * config.market.currency_scale)});
      }
      auction::AuctionOutcome o = auction::RunAuction(
          bids, config.market.epsilon,
          DeriveSeed(config.seed, key.first, key.second), key.second);
      acc.outcomes.push_back(o);
      outcomes.emplace(key, std::move(o));
    }
  }

  std::set<std::tuple<std::string, std::string, int64_t>> charged;
  std::map<std::tuple<int64_t, std::string, std::string>, Money> shapley_paid;
  for (const TransactionGroup& g : instance.groups) {
    const engine::IntentProfile& intents = IntentsOf(instance, g.user);
    const bool user_in = state.users.count(g.user) > 0;
    bool agg_in = state.aggregators.count(g.aggregator) > 0;
    AccountLine line;
    line.group = g;
    if (!auction_mode) {
      line.per_transaction =
          SplitTransaction(type, intents, g.aggregator, user_in, agg_in, config);
      const TransactionSplit& s = line.per_transaction;
      line.gross = s.gross * g.count;
      line.publisher = s.publisher * g.count;
      line.user = s.user * g.count;
      line.market = s.market * g.count;
      line.aggregator = s.aggregator * g.count;
      if (line.user > Money::Zero())
        shapley_paid[{g.period, g.user, g.aggregator}] += line.user;
    } else {
      bool won = false;
      Money price;
      if (user_in && agg_in) {
        auto it = outcomes.find({g.user, g.period});
        if (it != outcomes.end()) {
          const auto& w = it->second.winners;
          won = std::binary_search(w.begin(), w.end(), g.aggregator);
          price = it->second.clearing_price;
        }
      }
      // Losers are blocked like abstaining aggregators.
      TransactionSplit s;
      s.coefficient =
          IntentCoefficient(type, intents, g.aggregator, user_in, won);
      s.gross = Gross(s.coefficient, config);
      s.publisher = game::PublisherShare(config.market.alpha, s.gross);
      s.aggregator = s.gross - s.publisher;
      line.per_transaction = s;
      line.gross = s.gross * g.count;
      line.publisher = s.publisher * g.count;
      if (won && charged.insert({g.user, g.aggregator, g.period}).second) {
        line.user = price;
        acc.ledger.push_back({g.period, g.user, g.aggregator, price, "auction"});
      }
      line.aggregator = line.gross - line.publisher - line.user;
    }
    acc.intent_sum += line.per_transaction.coefficient * static_cast<double>(g.count);
    acc.lines.push_back(std::move(line));
  }
  for (const auto& [key, amount] : shapley_paid) {
    const auto& [period, user, agg] = key;
    acc.ledger.push_back({period, user, agg, amount, "shapley"});
  }
  return acc;
}

double AdoptionResult::user_fraction() const {
  return num_users == 0 ? 0.0
                        : static_cast<double>(joined_users.size()) /
                              static_cast<double>(num_users);
}

double AdoptionResult::aggregator_fraction() const {
  return num_aggregators == 0 ? 0.0
                              : static_cast<double>(joined_aggregators.size()) /
                                    static_cast<double>(num_aggregators);
}

double AdoptionResult::total_revenue_normalized() const {
  return initial_total_revenue.micros() == 0
             ? 0.0
             : static_cast<double>(final_total_revenue.micros()) /
                   static_cast<double>(initial_total_revenue.micros());
}

double AdoptionResult::aggregator_revenue_normalized() const {
  return initial_aggregator_revenue.micros() == 0
             ? 0.0
             : static_cast<double>(final_aggregator_revenue.micros()) /
                   static_cast<double>(initial_aggregator_revenue.micros());
}

namespace {

struct Totals {
  Money gross, publisher, user, market, aggregator;
};

Totals Sum(const Accounting& acc) {
  Totals t;
  for (const AccountLine& l : acc.lines) {
    t.gross += l.gross;
    t.publisher += l.publisher;
    t.user += l.user;
    t.market += l.market;
    t.aggregator += l.aggregator;
  }
  return t;
}

}  // namespace

AdoptionRun RunAdoption(const MarketInstance& instance,
                        const config::RunConfig& config) {
  config.Validate();
  const MarketType type = config.market.market_type;
  AdoptionRun run;
  AdoptionResult& r = run.result;
  r.market_type = type;
  r.pricing_mode = config.pricing_mode;
  r.seed = config.seed;
  r.num_users = instance.users.size();
  r.num_aggregators = instance.aggregators.size();

  AdoptionState state;
  Accounting acc = Account(state, instance, config);
  Totals totals = Sum(acc);
  r.initial_total_revenue = totals.gross;
  r.initial_aggregator_revenue = totals.aggregator;
  r.intent_sum_initial = acc.intent_sum;
  r.rounds.push_back({0, 0, 0, totals.gross, totals.aggregator});

  for (int round = 1; round <= config.round_cap; ++round) {
    AdoptionState next = state;
    next.round = round;
    for (const std::string& u : instance.users) {
      if (UserJoinDecision(type, IntentsOf(instance, u)))
        next.users.insert(u);
    }
    // Aggregators all respond to the same post-user state.
    const AdoptionState after_users = next;
    for (const std::string& a : instance.aggregators) {
      if (!after_users.aggregators.count(a) &&
          AggregatorJoinDecision(a, after_users, instance, config)) {
        next.aggregators.insert(a);
      }
    }
    const bool changed =
        next.users != state.users || next.aggregators != state.aggregators;
    state = std::move(next);
    acc = Account(state, instance, config);
    totals = Sum(acc);
    r.rounds.push_back({round, state.users.size(), state.aggregators.size(),
                        totals.gross, totals.aggregator});
    if (!changed) {
      r.converged = true;
      break;
    }
  }

  r.joined_users.assign(state.users.begin(), state.users.end());
  r.joined_aggregators.assign(state.aggregators.begin(), state.aggregators.end());
  for (const std::string& a : r.joined_aggregators) {
    if (!StandaloneJoinCondition(a, instance, config))
      r.network_effect_aggregators.push_back(a);
  }
  r.final_total_revenue = totals.gross;
  r.final_aggregator_revenue = totals.aggregator;
  r.final_publisher_revenue = totals.publisher;
  r.final_user_revenue = totals.user;
  r.final_market_revenue = totals.market;
  r.intent_sum_final = acc.intent_sum;

  std::map<std::string, Money> per_user;
  for (const std::string& u : instance.users)
    per_user[u] = Money::Zero();
  for (const AccountLine& l : acc.lines)
    per_user[l.group.user] += l.user;
  const double span = static_cast<double>(instance.periods) *
                      static_cast<double>(instance.period_seconds);
  const double month_factor = span > 0 ? kSecondsPerMonth / span : 0.0;
  for (const auto& [u, total] : per_user)
    r.user_monthly_revenue[u] = Money::FromDouble(total.ToDouble() * month_factor);

  run.final_state = std::move(state);
  run.accounting = std::move(acc);
  return run;
}

std::vector<std::pair<double, Money>> MonthlyRevenueQuantiles(
    const AdoptionResult& result) {
  std::vector<Money> values;
  for (const auto& [u, m] : result.user_monthly_revenue)
    values.push_back(m);
  std::vector<std::pair<double, Money>> out;
  if (values.empty())
    return out;
  std::sort(values.begin(), values.end());
  for (int i = 0; i <= 10; ++i) {
    const double q = i / 10.0;
    const size_t rank = static_cast<size_t>(
        std::ceil(q * static_cast<double>(values.size())));
    out.push_back({q, values[rank == 0 ? 0 : rank - 1]});
  }
  return out;
}

std::string SnapshotJson(const AdoptionResult& r) {
  using records::json;
  json j;
  j["market_type"] = std::string(engine::MarketTypeName(r.market_type));
  j["pricing_mode"] = std::string(config::PricingModeName(r.pricing_mode));
  j["seed"] = r.seed;
  j["num_users"] = r.num_users;
  j["num_aggregators"] = r.num_aggregators;
  json rounds = json::array();
  for (const RoundRecord& rr : r.rounds) {
    json x;
    x["round"] = rr.round;
    x["users_joined"] = rr.users_joined;
    x["aggregators_joined"] = rr.aggregators_joined;
    x["total_revenue_micros"] = rr.total_revenue.micros();
    x["aggregator_revenue_micros"] = rr.aggregator_revenue.micros();
    rounds.push_back(std::move(x));
  }
  j["rounds"] = std::move(rounds);
  j["converged"] = r.converged;
  j["joined_users"] = r.joined_users;
  j["joined_aggregators"] = r.joined_aggregators;
  j["network_effect_aggregators"] = r.network_effect_aggregators;
  j["initial_total_revenue_micros"] = r.initial_total_revenue.micros();
  j["final_total_revenue_micros"] = r.final_total_revenue.micros();
  j["initial_aggregator_revenue_micros"] = r.initial_aggregator_revenue.micros();
  j["final_aggregator_revenue_micros"] = r.final_aggregator_revenue.micros();
  j["final_publisher_revenue_micros"] = r.final_publisher_revenue.micros();
  j["final_user_revenue_micros"] = r.final_user_revenue.micros();
  j["final_market_revenue_micros"] = r.final_market_revenue.micros();
  // Doubles as exact round-trip strings so the snapshot compares bitwise.
  j["intent_sum_initial"] = FormatDouble(r.intent_sum_initial);
  j["intent_sum_final"] = FormatDouble(r.intent_sum_final);
  json monthly = json::object();
  for (const auto& [u, m] : r.user_monthly_revenue)
    monthly[u] = m.micros();
  j["user_monthly_revenue_micros"] = std::move(monthly);
  return j.dump(1) + "\n";
}

AdoptionResult ParseSnapshot(const std::string& text) {
  using records::json;
  const json j = json::parse(text);
  AdoptionResult r;
  auto type = engine::ParseMarketType(j.at("market_type").get<std::string>());
  auto mode = config::ParsePricingMode(j.at("pricing_mode").get<std::string>());
  if (!type || !mode)
    throw std::invalid_argument("snapshot has unknown market or pricing mode");
  r.market_type = *type;
  r.pricing_mode = *mode;
  r.seed = j.at("seed").get<uint64_t>();
  r.num_users = j.at("num_users").get<size_t>();
  r.num_aggregators = j.at("num_aggregators").get<size_t>();
  for (const json& x : j.at("rounds")) {
    r.rounds.push_back(
        {x.at("round").get<int>(), x.at("users_joined").get<size_t>(),
         x.at("aggregators_joined").get<size_t>(),
         Money::FromMicros(x.at("total_revenue_micros").get<int64_t>()),
         Money::FromMicros(x.at("aggregator_revenue_micros").get<int64_t>())});
  }
  r.converged = j.at("converged").get<bool>();
  r.joined_users = j.at("joined_users").get<std::vector<std::string>>();
  r.joined_aggregators = j.at("joined_aggregators").get<std::vector<std::string>>();
  r.network_effect_aggregators =
      j.at("network_effect_aggregators").get<std::vector<std::string>>();
  auto money = [&j](const char* key) {
    return Money::FromMicros(j.at(key).get<int64_t>());
  };
  r.initial_total_revenue = money("initial_total_revenue_micros");
  r.final_total_revenue = money("final_total_revenue_micros");
  r.initial_aggregator_revenue = money("initial_aggregator_revenue_micros");
  r.final_aggregator_revenue = money("final_aggregator_revenue_micros");
  r.final_publisher_revenue = money("final_publisher_revenue_micros");
  r.final_user_revenue = money("final_user_revenue_micros");
  r.final_market_revenue = money("final_market_revenue_micros");
  r.intent_sum_initial = std::stod(j.at("intent_sum_initial").get<std::string>());
  r.intent_sum_final = std::stod(j.at("intent_sum_final").get<std::string>());
  for (const auto& [u, m] : j.at("user_monthly_revenue_micros").items())
    r.user_monthly_revenue[u] = Money::FromMicros(m.get<int64_t>());
  return r;
}

void WriteReport(const AdoptionResult& r, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create report directory " + dir + ": " +
                             ec.message());
  const std::filesystem::path base(dir);
  const bool empty = r.rounds.empty();

  std::string rounds = "round,users_joined,aggregators_joined,user_fraction,"
                       "aggregator_fraction,total_revenue,aggregator_revenue\n";
  for (const RoundRecord& rr : r.rounds) {
    const double uf = r.num_users ? static_cast<double>(rr.users_joined) /
                                        static_cast<double>(r.num_users)
                                  : 0.0;
    const double af = r.num_aggregators
                          ? static_cast<double>(rr.aggregators_joined) /
                                static_cast<double>(r.num_aggregators)
                          : 0.0;
    rounds += std::to_string(rr.round) + "," + std::to_string(rr.users_joined) +
              "," + std::to_string(rr.aggregators_joined) + "," +
              FormatDouble(uf) + "," + FormatDouble(af) + "," +
              rr.total_revenue.ToString() + "," +
              rr.aggregator_revenue.ToString() + "\n";
  }
  records::WriteFile((base / "rounds.csv").string(), rounds);

  std::string revenue = "metric,initial,final,normalized\n";
  if (!empty) {
    revenue += "total," + r.initial_total_revenue.ToString() + "," +
               r.final_total_revenue.ToString() + "," +
               FormatDouble(r.total_revenue_normalized()) + "\n";
    revenue += "aggregators," + r.initial_aggregator_revenue.ToString() + "," +
               r.final_aggregator_revenue.ToString() + "," +
               FormatDouble(r.aggregator_revenue_normalized()) + "\n";
  }
  records::WriteFile((base / "revenue.csv").string(), revenue);

  std::string quantiles = "quantile,monthly_revenue\n";
  for (const auto& [q, m] : MonthlyRevenueQuantiles(r))
    quantiles += FormatDouble(q) + "," + m.ToString() + "\n";
  records::WriteFile((base / "user_revenue.csv").string(), quantiles);

  std::string summary = "key,value\n";
  if (!empty) {
    auto put = [&summary](const std::string& k, const std::string& v) {
      summary += k + "," + v + "\n";
    };
    put("market_type", std::string(engine::MarketTypeName(r.market_type)));
    put("pricing_mode", std::string(config::PricingModeName(r.pricing_mode)));
    put("seed", std::to_string(r.seed));
    put("users", std::to_string(r.num_users));
    put("aggregators", std::to_string(r.num_aggregators));
    put("users_joined", std::to_string(r.joined_users.size()));
    put("aggregators_joined", std::to_string(r.joined_aggregators.size()));
    put("user_fraction", FormatDouble(r.user_fraction()));
    put("aggregator_fraction", FormatDouble(r.aggregator_fraction()));
    put("network_effect_aggregators",
        std::to_string(r.network_effect_aggregators.size()));
    put("rounds", std::to_string(r.rounds.size() - 1));
    put("converged", r.converged ? "true" : "false");
    put("publisher_revenue", r.final_publisher_revenue.ToString());
    put("user_revenue", r.final_user_revenue.ToString());
    put("market_revenue", r.final_market_revenue.ToString());
    put("intent_sum_initial", FormatDouble(r.intent_sum_initial));
    put("intent_sum_final", FormatDouble(r.intent_sum_final));
  }
  records::WriteFile((base / "summary.csv").string(), summary);
  records::WriteFile((base / "snapshot.json").string(), SnapshotJson(r));
}

}  // namespace infomarket::adoption
