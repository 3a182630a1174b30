#include "infomarket/cli.h"

#include <signal.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "infomarket/adoption.h"
#include "infomarket/auction.h"
#include "infomarket/config.h"
#include "infomarket/game.h"
#include "infomarket/ledger.h"
#include "infomarket/proxy.h"
#include "infomarket/public_suffix.h"
#include "infomarket/records.h"
#include "infomarket/trace.h"
#include "infomarket/valuation.h"

namespace infomarket::cli {

namespace fs = std::filesystem;

std::string FormatReal(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, end);
  if (s.find_first_of(".eEn") == std::string::npos)
    s += ".0";
  return s;
}

policy::PolicyState LoadStateDir(const std::string& dir) {
  policy::PolicyState state;
  const fs::path whitelists = fs::path(dir) / "whitelists";
  if (fs::is_directory(whitelists)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(whitelists)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt")
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) {
      const std::string user = f.stem().string();
      for (const std::string& d : policy::ParseDomainList(records::ReadFile(f.string())))
        state.AddWhitelisted(user, d);
    }
  }
  const fs::path grants = fs::path(dir) / "grants.jsonl";
  if (fs::exists(grants)) {
    std::ifstream in(grants);
    for (const policy::Grant& g : records::ReadGrants(in))
      state.AddGrant(g);
  }
  return state;
}

std::set<std::string> LoadCdnAllowlist(const std::string& dir) {
  const fs::path cdn = fs::path(dir) / "cdn.txt";
  if (!fs::exists(cdn))
    return {};
  return policy::ParseDomainList(records::ReadFile(cdn.string()));
}

namespace {

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  return in;
}

void WriteOutput(const std::string& path,
                 const std::function<void(std::ostream&)>& fn) {
  std::ostringstream buf;
  fn(buf);
  records::WriteFile(path, buf.str());
}

// --- trace gen ------------------------------------------------------------

struct TraceGenArgs {
  trace::TraceParams params;
  trace::CatalogParams catalog_params;
  uint64_t seed = 1;
  std::string out;
  std::string catalog_in;
  std::string catalog_out;
};

int RunTraceGen(const TraceGenArgs& a, std::ostream& out) {
  std::vector<valuation::AdvertiserSpec> catalog;
  if (!a.catalog_in.empty()) {
    std::ifstream in = OpenInput(a.catalog_in);
    catalog = records::ReadCatalog(in);
  } else {
    catalog = trace::GenerateCatalog(a.catalog_params,
                                     DeriveSeed(a.seed, "catalog"));
  }
  trace::TraceParams params = a.params;
  params.keywords = trace::CatalogKeywords(catalog);
  const trace::Trace t = trace::GenerateTrace(params, a.seed);
  WriteOutput(a.out, [&t](std::ostream& o) { records::WriteTrace(o, t); });
  if (!a.catalog_out.empty()) {
    WriteOutput(a.catalog_out,
                [&catalog](std::ostream& o) { records::WriteCatalog(o, catalog); });
  }
  out << "events=" << t.events().size() << " users=" << t.Users().size()
      << " publishers=" << t.Publishers().size()
      << " aggregators=" << t.Aggregators().size() << "\n";
  return 0;
}

// --- auction run ----------------------------------------------------------

struct AuctionArgs {
  std::string bids;
  double epsilon = 1.0;
  uint64_t seed = 1;
  int64_t period = 0;
  std::string outcomes;
  std::string ledger;
  std::string grants;
};

int RunAuctionCmd(const AuctionArgs& a, std::ostream& out) {
  if (!(a.epsilon > 0))
    throw std::invalid_argument("--epsilon must be positive");
  std::vector<auction::BidSet> bid_sets;
  {
    std::ifstream in = OpenInput(a.bids);
    bid_sets = records::ReadBids(in);
  }
  std::vector<auction::AuctionOutcome> outcomes;
  std::vector<ledger::LedgerEntry> entries;
  std::vector<policy::Grant> grants;
  Money revenue;
  for (const auction::BidSet& bids : bid_sets) {
    auction::AuctionOutcome o = auction::RunAuction(
        bids, a.epsilon, DeriveSeed(a.seed, bids.user, a.period), a.period);
    for (const std::string& w : o.winners) {
      entries.push_back({a.period, o.user, w, o.clearing_price, "auction"});
      // Access is granted for the period after the auction.
      grants.push_back({o.user, w, a.period + 1});
    }
    revenue += o.user_revenue;
    outcomes.push_back(std::move(o));
  }
  if (!a.outcomes.empty()) {
    WriteOutput(a.outcomes,
                [&outcomes](std::ostream& o) { records::WriteOutcomes(o, outcomes); });
  } else {
    records::WriteOutcomes(out, outcomes);
  }
  if (!a.ledger.empty())
    ledger::AppendLedgerFile(a.ledger, entries);
  if (!a.grants.empty())
    WriteOutput(a.grants, [&grants](std::ostream& o) { records::WriteGrants(o, grants); });
  if (!a.outcomes.empty()) {
    out << "users=" << outcomes.size() << " payments=" << entries.size()
        << " revenue=" << revenue.ToString() << "\n";
  }
  return 0;
}

// --- shapley --------------------------------------------------------------

int RunShapleyCmd(const std::string& market, double impl, double expl,
                  std::ostream& out) {
  const auto type = engine::ParseMarketType(market);
  if (!type)
    throw std::invalid_argument("unknown market type: " + market);
  const game::PlayerShares s = game::ComputeShapley(*type, expl, impl);
  out << "u=" << FormatReal(s.user);
  if (s.has_market)
    out << " m=" << FormatReal(s.market);
  out << " a=" << FormatReal(s.aggregator()) << "\n";
  const engine::ConsentLift lift = engine::ComputeConsentLift(expl, impl);
  std::string lift_text = lift.is_finite() ? FormatReal(lift.value())
                          : lift.kind() == engine::ConsentLift::Kind::kInfinite
                              ? "inf"
                              : "undefined";
  out << "a_baseline=" << FormatReal(s.aggregator_baseline)
      << " a_surplus=" << FormatReal(s.aggregator_surplus)
      << " lift=" << lift_text
      << " user_gains=" << (game::UserGains(*type, expl, impl) ? "true" : "false")
      << "\n";
  return 0;
}

// --- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::map<std::string, std::string> overrides;
  std::vector<std::string> sets;
};

int RunSimulateCmd(const SimulateArgs& a, std::ostream& out) {
  config::RunConfig cfg;
  if (!a.config.empty())
    cfg = config::LoadConfigFile(a.config);
  std::map<std::string, std::string> overrides = a.overrides;
  for (const std::string& kv : a.sets) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects key=value, got " + kv);
    overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  cfg = config::Apply(cfg, overrides);
  if (cfg.trace_path.empty())
    throw std::invalid_argument("no trace given (--trace or trace = ...)");
  if (cfg.catalog_path.empty())
    throw std::invalid_argument("no catalog given (--catalog or catalog = ...)");
  if (cfg.output_path.empty())
    throw std::invalid_argument("no output directory given (--out or output = ...)");

  trace::Trace t;
  {
    std::ifstream in = OpenInput(cfg.trace_path);
    t = records::ReadTrace(in);
  }
  std::vector<valuation::AdvertiserSpec> catalog;
  {
    std::ifstream in = OpenInput(cfg.catalog_path);
    catalog = records::ReadCatalog(in);
  }
  const adoption::MarketInstance instance =
      adoption::MarketInstance::FromTrace(t, catalog, cfg);
  const adoption::AdoptionRun run = adoption::RunAdoption(instance, cfg);
  adoption::WriteReport(run.result, cfg.output_path);
  records::WriteFile((fs::path(cfg.output_path) / "config.txt").string(),
                     config::Serialize(cfg));
  if (!cfg.ledger_path.empty())
    ledger::AppendLedgerFile(cfg.ledger_path, run.accounting.ledger);

  const adoption::AdoptionResult& r = run.result;
  out << "market=" << engine::MarketTypeName(r.market_type)
      << " pricing=" << config::PricingModeName(r.pricing_mode)
      << " rounds=" << (r.rounds.empty() ? 0 : r.rounds.size() - 1)
      << " converged=" << (r.converged ? "true" : "false") << "\n"
      << "users_joined=" << r.joined_users.size() << "/" << r.num_users
      << " aggregators_joined=" << r.joined_aggregators.size() << "/"
      << r.num_aggregators
      << " network_effect=" << r.network_effect_aggregators.size() << "\n"
      << "total_revenue_normalized=" << FormatReal(r.total_revenue_normalized())
      << " aggregator_revenue_normalized="
      << FormatReal(r.aggregator_revenue_normalized()) << "\n";
  return 0;
}

// --- valuate --------------------------------------------------------------

struct ValuateArgs {
  std::string profile;
  std::string trace;
  std::string user;
  std::string aggregator;
  std::string catalog;
  double pi_click = 0.1;
  double beta = 1.0;
  double currency_scale = 1.0;
};

int RunValuateCmd(const ValuateArgs& a, std::ostream& out) {
  valuation::ClickModel model{a.pi_click};
  model.Validate();
  std::vector<valuation::AdvertiserSpec> catalog;
  {
    std::ifstream in = OpenInput(a.catalog);
    catalog = records::ReadCatalog(in);
  }
  auto print_bid = [&](const valuation::AnonymizedProfile& p) {
    const valuation::Allocation alloc = valuation::GreedyAllocate(
        p.TotalImpressions(), catalog, p, model);
    const double bid = valuation::BidForUser(p, catalog, model);
    out << "impressions=" << p.TotalImpressions()
        << " bid=" << Money::FromDouble(bid * a.currency_scale).ToString() << "\n";
    for (const auto& [adv, n] : alloc) {
      if (n > 0)
        out << "  " << adv << " " << n << "\n";
    }
  };

  if (!a.profile.empty()) {
    std::ifstream in = OpenInput(a.profile);
    print_bid(records::ReadProfile(in));
    return 0;
  }
  if (a.trace.empty() || a.user.empty())
    throw std::invalid_argument("give --profile, or --trace with --user");
  trace::Trace t;
  {
    std::ifstream in = OpenInput(a.trace);
    t = records::ReadTrace(in);
  }
  if (!a.aggregator.empty()) {
    print_bid(t.VisibleProfile(a.user, a.aggregator));
    return 0;
  }
  const valuation::AnonymizedProfile full = t.FullProfile(a.user);
  print_bid(full);
  const std::map<std::string, valuation::AnonymizedProfile> views =
      t.VisibleProfiles(a.user);
  const engine::IntentProfile intents =
      valuation::DeriveIntents(full, views, a.beta, catalog, model);
  out << "expl=" << FormatReal(intents.expl) << "\n";
  for (const auto& [agg, impl] : intents.impl)
    out << "impl " << agg << " " << FormatReal(impl) << "\n";
  return 0;
}

// --- proxy ----------------------------------------------------------------

struct ProxyArgs {
  std::string listen = "127.0.0.1:8080";
  int control_port = 0;
  bool no_control = false;
  std::string state_dir;
  int64_t period = 0;
  std::vector<std::string> resolve;
  std::string push_control;
  std::string push_grants;
  int64_t push_period = 0;
};

std::pair<std::string, int> SplitHostPort(const std::string& s) {
  const size_t colon = s.rfind(':');
  if (colon == std::string::npos || colon + 1 == s.size())
    throw std::invalid_argument("expected host:port, got " + s);
  std::string host = s.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']')
    host = host.substr(1, host.size() - 2);
  int port = 0;
  const char* first = s.data() + colon + 1;
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, port);
  if (ec != std::errc() || ptr != last || port < 0 || port > 65535)
    throw std::invalid_argument("bad port in " + s);
  return {host, port};
}

int RunProxyServe(const ProxyArgs& a, std::ostream& out) {
  proxy::ProxyConfig pc;
  const auto [host, port] = SplitHostPort(a.listen);
  pc.listen_address = host;
  pc.listen_port = port;
  pc.enable_control = !a.no_control;
  pc.control_port = a.control_port;
  pc.initial_period = a.period;
  for (const std::string& r : a.resolve) {
    const size_t eq = r.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--resolve expects name=host:port, got " + r);
    const auto [to_host, to_port] = SplitHostPort(r.substr(eq + 1));
    pc.resolve_overrides[policy::NormalizeHost(r.substr(0, eq))] = {to_host, to_port};
  }
  policy::PolicyState state;
  if (!a.state_dir.empty()) {
    if (!fs::is_directory(a.state_dir))
      throw std::invalid_argument("no such state directory: " + a.state_dir);
    state = LoadStateDir(a.state_dir);
    pc.cdn_allowlist = LoadCdnAllowlist(a.state_dir);
  }

  // Block the shutdown signals before any thread starts so only sigwait
  // below receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  proxy::ProxyServer server(std::move(pc), std::move(state));
  server.Start();
  out << "listening port=" << server.port();
  if (!a.no_control)
    out << " control_port=" << server.control_port();
  out << " period=" << server.period() << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  server.Stop();
  return 0;
}

int RunProxyPush(const ProxyArgs& a, std::ostream& out, std::ostream& err) {
  const auto [host, port] = SplitHostPort(a.push_control);
  proxy::GrantUpdate update;
  update.period = a.push_period;
  if (!a.push_grants.empty()) {
    std::ifstream in = OpenInput(a.push_grants);
    update.grants = records::ReadGrants(in);
  }
  const std::string reply = proxy::SendGrantUpdate(host, port, update);
  if (reply.rfind("OK", 0) == 0) {
    out << reply << "\n";
    return 0;
  }
  err << reply << "\n";
  return 1;
}

// --- report ---------------------------------------------------------------

int RunReportCmd(const std::string& ledger_path, std::ostream& out) {
  if (!ledger_path.empty() && !fs::exists(ledger_path))
    throw std::runtime_error("no such ledger: " + ledger_path);
  const ledger::EarningsSummary s =
      ledger::Summarize(ledger::ReadLedgerFile(ledger_path));
  out << "user,payments,total\n";
  for (const auto& [user, total] : s.per_user)
    out << user << "," << s.payments_per_user.at(user) << "," << total.ToString()
        << "\n";
  if (!s.per_user.empty()) {
    int64_t payments = 0;
    for (const auto& [user, n] : s.payments_per_user)
      payments += n;
    out << "TOTAL," << payments << "," << s.total.ToString() << "\n";
  }
  return 0;
}

}  // namespace

int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information market toolkit", "infomarket"};
  app.require_subcommand(1);

  // trace gen
  TraceGenArgs tg;
  CLI::App* trace_cmd = app.add_subcommand("trace", "Browsing traces");
  trace_cmd->require_subcommand(1);
  CLI::App* gen = trace_cmd->add_subcommand("gen", "Generate a synthetic trace");
  gen->add_option("--users", tg.params.users)->check(CLI::PositiveNumber);
  gen->add_option("--publishers", tg.params.publishers)->check(CLI::PositiveNumber);
  gen->add_option("--aggs", tg.params.aggregators)->check(CLI::NonNegativeNumber);
  gen->add_option("--events", tg.params.events)->check(CLI::PositiveNumber);
  gen->add_option("--popularity-skew", tg.params.popularity_skew);
  gen->add_option("--embedding-skew", tg.params.embedding_skew);
  gen->add_option("--top-coverage", tg.params.top_coverage);
  gen->add_option("--activity-skew", tg.params.activity_skew);
  gen->add_option("--start-ts", tg.params.start_ts);
  gen->add_option("--duration", tg.params.duration_seconds, "Seconds");
  gen->add_option("--advertisers", tg.catalog_params.advertisers);
  gen->add_option("--keywords", tg.catalog_params.keywords);
  gen->add_option("--seed", tg.seed);
  gen->add_option("--catalog", tg.catalog_in, "Existing catalog for site keywords");
  gen->add_option("--catalog-out", tg.catalog_out, "Write the generated catalog");
  gen->add_option("--out", tg.out, "Trace file")->required();

  // auction run
  AuctionArgs au;
  CLI::App* auction_cmd = app.add_subcommand("auction", "Per-user auctions");
  auction_cmd->require_subcommand(1);
  CLI::App* run = auction_cmd->add_subcommand("run", "Run one auction period");
  run->add_option("--bids", au.bids, "Bid file")->required();
  run->add_option("--epsilon", au.epsilon);
  run->add_option("--seed", au.seed);
  run->add_option("--period", au.period);
  run->add_option("--outcomes", au.outcomes, "Outcome file (default: stdout)");
  run->add_option("--ledger", au.ledger, "Ledger to append payments to");
  run->add_option("--grants", au.grants, "Grant file for the next period");

  // shapley
  std::string market = "mediated";
  double impl = 1, expl = 1;
  CLI::App* shapley = app.add_subcommand("shapley", "Shares of one transaction");
  shapley->add_option("--market", market);
  shapley->add_option("--impl", impl)->required();
  shapley->add_option("--expl", expl)->required();

  // simulate
  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Adoption dynamics");
  simulate->add_option("--config", sim.config, "key = value file");
  struct Flag {
    const char* name;
    const char* key;
  };
  static constexpr Flag kSimFlags[] = {
      {"--trace", "trace"},         {"--catalog", "catalog"},
      {"--out", "output"},          {"--ledger", "ledger"},
      {"--market", "market_type"},  {"--pricing", "pricing_mode"},
      {"--seed", "seed"},           {"--alpha", "alpha"},
      {"--epsilon", "epsilon"},     {"--beta", "beta"},
      {"--pi-click", "pi_click"},   {"--round-cap", "round_cap"},
      {"--impressions", "impressions_per_period"}};
  for (const Flag& f : kSimFlags) {
    simulate->add_option_function<std::string>(
        f.name, [&sim, key = std::string(f.key)](const std::string& v) {
          sim.overrides[key] = v;
        });
  }
  simulate->add_option("--set", sim.sets, "Any config key=value");

  // valuate
  ValuateArgs va;
  CLI::App* valuate = app.add_subcommand("valuate", "Emulated aggregator bid");
  valuate->add_option("--catalog", va.catalog)->required();
  valuate->add_option("--profile", va.profile);
  valuate->add_option("--trace", va.trace);
  valuate->add_option("--user", va.user);
  valuate->add_option("--aggregator", va.aggregator);
  valuate->add_option("--pi-click", va.pi_click);
  valuate->add_option("--beta", va.beta);
  valuate->add_option("--currency-scale", va.currency_scale);

  // proxy
  ProxyArgs px;
  CLI::App* proxy_cmd = app.add_subcommand("proxy", "Forward proxy");
  proxy_cmd->add_option("--listen", px.listen, "host:port");
  proxy_cmd->add_option("--control-port", px.control_port);
  proxy_cmd->add_flag("--no-control", px.no_control);
  proxy_cmd->add_option("--state-dir", px.state_dir);
  proxy_cmd->add_option("--period", px.period);
  proxy_cmd->add_option("--resolve", px.resolve, "name=host:port");
  CLI::App* push = proxy_cmd->add_subcommand("push", "Send a grant update");
  push->add_option("--control", px.push_control, "host:port")->required();
  push->add_option("--grants", px.push_grants);
  push->add_option("--period", px.push_period)->required();

  // report
  std::string ledger_path;
  CLI::App* report = app.add_subcommand("report", "Earnings per user");
  report->add_option("--ledger", ledger_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (gen->parsed())
      return RunTraceGen(tg, out);
    if (run->parsed())
      return RunAuctionCmd(au, out);
    if (shapley->parsed())
      return RunShapleyCmd(market, impl, expl, out);
    if (simulate->parsed())
      return RunSimulateCmd(sim, out);
    if (valuate->parsed())
      return RunValuateCmd(va, out);
    if (push->parsed())
      return RunProxyPush(px, out, err);
    if (proxy_cmd->parsed())
      return RunProxyServe(px, out);
    if (report->parsed())
      return RunReportCmd(ledger_path, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace infomarket::cli
