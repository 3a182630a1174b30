#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "infomarket/adoption.h"
#include "infomarket/auction.h"
#include "infomarket/config.h"
#include "infomarket/engine.h"
#include "infomarket/game.h"
#include "infomarket/public_suffix.h"

namespace py = pybind11;

namespace infomarket {
namespace {

engine::MarketType MarketFromName(const std::string& name) {
  const auto t = engine::ParseMarketType(name);
  if (!t)
    throw std::invalid_argument("unknown market type: " + name);
  return *t;
}

py::dict Shapley(const std::string& market, double expl, double impl) {
  const engine::MarketType type = MarketFromName(market);
  const game::PlayerShares s = game::ComputeShapley(type, expl, impl);
  py::dict d;
  d["user"] = s.user;
  d["aggregator"] = s.aggregator();
  d["aggregator_baseline"] = s.aggregator_baseline;
  d["aggregator_surplus"] = s.aggregator_surplus;
  if (s.has_market)
    d["market"] = s.market;
  return d;
}

double Lift(double expl, double impl) {
  const engine::ConsentLift lift = engine::ComputeConsentLift(expl, impl);
  switch (lift.kind()) {
    case engine::ConsentLift::Kind::kFinite:
      return lift.value();
    case engine::ConsentLift::Kind::kInfinite:
      return std::numeric_limits<double>::infinity();
    case engine::ConsentLift::Kind::kUndefined:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

auction::BidSet MakeBidSet(const std::string& user,
                           const std::map<std::string, double>& bids) {
  auction::BidSet set;
  set.user = user;
  for (const auto& [aggregator, price] : bids)
    set.bids.push_back({aggregator, Money::FromDouble(price)});
  set.Validate();
  return set;
}

std::tuple<double, double, size_t> OptimalPrice(const std::map<std::string, double>& bids) {
  const auction::OptimalPrice p = auction::ComputeOptimalPrice(MakeBidSet("", bids));
  return {p.price.ToDouble(), p.revenue.ToDouble(), p.winners};
}

py::dict RunAuction(const std::string& user, const std::map<std::string, double>& bids,
                    double epsilon, uint64_t seed, int64_t period) {
  const auction::AuctionOutcome o =
      auction::RunAuction(MakeBidSet(user, bids), epsilon, seed, period);
  py::dict d;
  d["user"] = o.user;
  d["period"] = o.period;
  d["clearing_price"] = o.clearing_price.ToDouble();
  d["winners"] = o.winners;
  d["user_revenue"] = o.user_revenue.ToDouble();
  return d;
}

using IntentMap = std::map<std::string, std::pair<double, std::map<std::string, double>>>;

std::string RunAdoptionJson(const IntentMap& intents, const std::string& market,
                            double alpha, double ron, double tqm,
                            int64_t impressions_per_period, int round_cap,
                            int64_t transactions_per_pair, uint64_t seed) {
  std::map<std::string, engine::IntentProfile> profiles;
  for (const auto& [user, value] : intents) {
    engine::IntentProfile p{value.first, value.second};
    p.Validate();
    profiles.emplace(user, std::move(p));
  }
  config::RunConfig cfg;
  cfg.market.market_type = MarketFromName(market);
  cfg.market.alpha = alpha;
  cfg.market.impressions_per_period = impressions_per_period;
  cfg.cpm = {Money::FromDouble(ron), tqm};
  cfg.round_cap = round_cap;
  cfg.seed = seed;
  cfg.Validate();
  const adoption::MarketInstance instance =
      adoption::MarketInstance::FromIntents(profiles, transactions_per_pair);
  return adoption::SnapshotJson(adoption::RunAdoption(instance, cfg).result);
}

}  // namespace
}  // namespace infomarket

PYBIND11_MODULE(_core, m) {
  using namespace infomarket;
  m.doc() = "infomarket core bindings";
  py::register_exception<std::invalid_argument>(m, "InvalidArgument", PyExc_ValueError);

  m.def("shapley", &Shapley, py::arg("market"), py::arg("expl"), py::arg("impl"));
  m.def(
      "user_gains",
      [](const std::string& market, double expl, double impl) {
        return game::UserGains(MarketFromName(market), expl, impl);
      },
      py::arg("market"), py::arg("expl"), py::arg("impl"));
  m.def("consent_lift", &Lift, py::arg("expl"), py::arg("impl"),
        "(expl-1)/(impl-1); inf when impl == 1 < expl, nan when both are 1.");
  m.def(
      "expected_revenue",
      [](const std::vector<double>& bids, double epsilon) {
        return auction::ExpectedRevenue(bids, epsilon);
      },
      py::arg("bids"), py::arg("epsilon"));
  m.def("revenue_lower_bound", &auction::RevenueLowerBound, py::arg("opt"),
        py::arg("epsilon"), py::arg("winners"));
  m.def("optimal_price", &OptimalPrice, py::arg("bids"),
        "Returns (price, revenue, winners) for bids keyed by aggregator.");
  m.def("run_auction", &RunAuction, py::arg("user"), py::arg("bids"), py::arg("epsilon"),
        py::arg("seed"), py::arg("period") = 0);
  m.def(
      "root_domain", [](const std::string& host) { return policy::RootDomain(host); },
      py::arg("host"));
  m.def("run_adoption_json", &RunAdoptionJson, py::arg("intents"),
        py::arg("market") = "direct", py::kw_only(), py::arg("alpha") = 1.0,
        py::arg("ron") = 1.0, py::arg("tqm") = 1.0,
        py::arg("impressions_per_period") = 1000, py::arg("round_cap") = 100,
        py::arg("transactions_per_pair") = 1, py::arg("seed") = 1);
}
