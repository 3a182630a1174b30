#include "infomarket/records.h"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace infomarket::records {

namespace {

std::string StringField(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw std::invalid_argument(std::string("missing string field '") + key +
                                "'");
  return j[key].get<std::string>();
}

int64_t IntField(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw std::invalid_argument(std::string("missing integer field '") + key +
                                "'");
  return j[key].get<int64_t>();
}

std::vector<std::string> StringArray(const json& j, const char* key) {
  if (!j.contains(key))
    return {};
  if (!j[key].is_array())
    throw std::invalid_argument(std::string("field '") + key +
                                "' is not an array");
  std::vector<std::string> out;
  for (const json& v : j[key]) {
    if (!v.is_string())
      throw std::invalid_argument(std::string("field '") + key +
                                  "' holds a non-string");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

RecordError::RecordError(size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

void ForEachJsonLine(std::istream& in,
                     const std::function<void(const json&, size_t)>& fn) {
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw RecordError(number, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object())
      throw RecordError(number, "record is not a JSON object");
    try {
      fn(j, number);
    } catch (const RecordError&) {
      throw;
    } catch (const std::exception& e) {
      throw RecordError(number, e.what());
    }
  }
}

Money MoneyField(const json& j, const char* key) {
  if (!j.contains(key))
    throw std::invalid_argument(std::string("missing field '") + key + "'");
  const json& v = j[key];
  if (v.is_number())
    return Money::FromDouble(v.get<double>());
  if (v.is_string()) {
    if (auto m = Money::Parse(v.get<std::string>()))
      return *m;
  }
  throw std::invalid_argument(std::string("field '") + key +
                              "' is not an amount");
}

json MoneyJson(Money m) {
  // Shortest round-trip formatting of micros/1e6 parses back to the same
  // micro count.
  return m.ToDouble();
}

std::vector<auction::BidSet> ReadBids(std::istream& in) {
  std::vector<auction::BidSet> sets;
  std::map<std::string, size_t> index;
  ForEachJsonLine(in, [&](const json& j, size_t line) {
    const std::string user = StringField(j, "user");
    auction::Bid bid{StringField(j, "aggregator"), MoneyField(j, "max_price")};
    if (bid.max_price < Money::Zero())
      throw RecordError(line, "negative max_price");
    auto [it, inserted] = index.emplace(user, sets.size());
    if (inserted)
      sets.push_back({user, {}});
    auction::BidSet& set = sets[it->second];
    for (const auction::Bid& b : set.bids) {
      if (b.aggregator == bid.aggregator)
        throw RecordError(line, "duplicate bid from " + bid.aggregator +
                                    " on " + user);
    }
    set.bids.push_back(std::move(bid));
  });
  return sets;
}

void WriteBids(std::ostream& out, const std::vector<auction::BidSet>& bids) {
  for (const auction::BidSet& set : bids) {
    for (const auction::Bid& b : set.bids) {
      json j;
      j["user"] = set.user;
      j["aggregator"] = b.aggregator;
      j["max_price"] = MoneyJson(b.max_price);
      out << j.dump() << '\n';
    }
  }
}

json ToJson(const auction::AuctionOutcome& o) {
  json j;
  j["user"] = o.user;
  j["period"] = o.period;
  j["clearing_price"] = MoneyJson(o.clearing_price);
  j["winners"] = o.winners;
  j["user_revenue"] = MoneyJson(o.user_revenue);
  return j;
}

auction::AuctionOutcome OutcomeFromJson(const json& j) {
  auction::AuctionOutcome o;
  o.user = StringField(j, "user");
  o.period = IntField(j, "period");
  o.clearing_price = MoneyField(j, "clearing_price");
  o.winners = StringArray(j, "winners");
  o.user_revenue = MoneyField(j, "user_revenue");
  return o;
}

std::vector<auction::AuctionOutcome> ReadOutcomes(std::istream& in) {
  std::vector<auction::AuctionOutcome> out;
  ForEachJsonLine(in, [&](const json& j, size_t) {
    out.push_back(OutcomeFromJson(j));
  });
  return out;
}

void WriteOutcomes(std::ostream& out,
                   const std::vector<auction::AuctionOutcome>& outcomes) {
  for (const auction::AuctionOutcome& o : outcomes)
    out << ToJson(o).dump() << '\n';
}

json ToJson(const policy::Grant& g) {
  json j;
  j["user"] = g.user;
  j["aggregator"] = g.aggregator;
  j["period"] = g.period;
  return j;
}

policy::Grant GrantFromJson(const json& j) {
  return {StringField(j, "user"), StringField(j, "aggregator"),
          IntField(j, "period")};
}

std::vector<policy::Grant> ReadGrants(std::istream& in) {
  std::vector<policy::Grant> out;
  ForEachJsonLine(in, [&](const json& j, size_t) {
    out.push_back(GrantFromJson(j));
  });
  return out;
}

void WriteGrants(std::ostream& out, const std::vector<policy::Grant>& grants) {
  for (const policy::Grant& g : grants)
    out << ToJson(g).dump() << '\n';
}

json ToJson(const trace::TraceEvent& e) {
  json j;
  j["ts"] = e.ts;
  j["user"] = e.user;
  j["publisher"] = e.publisher;
  j["aggregators"] = e.aggregators;
  j["keywords"] = e.keywords;
  return j;
}

trace::TraceEvent EventFromJson(const json& j) {
  trace::TraceEvent e;
  e.ts = IntField(j, "ts");
  e.user = StringField(j, "user");
  e.publisher = StringField(j, "publisher");
  e.aggregators = StringArray(j, "aggregators");
  e.keywords = StringArray(j, "keywords");
  return e;
}

trace::Trace ReadTrace(std::istream& in) {
  std::vector<trace::TraceEvent> events;
  ForEachJsonLine(in, [&](const json& j, size_t line) {
    trace::TraceEvent e = EventFromJson(j);
    if (!events.empty() && e.ts < events.back().ts)
      throw RecordError(line, "timestamp decreases");
    events.push_back(std::move(e));
  });
  return trace::Trace(std::move(events));
}

void WriteTrace(std::ostream& out, const trace::Trace& t) {
  for (const trace::TraceEvent& e : t.events())
    out << ToJson(e).dump() << '\n';
}

std::vector<valuation::AdvertiserSpec> ReadCatalog(std::istream& in) {
  std::map<std::string, valuation::AdvertiserSpec> by_id;
  ForEachJsonLine(in, [&](const json& j, size_t line) {
    const std::string id = StringField(j, "advertiser");
    const std::string keyword = StringField(j, "keyword");
    if (!j.contains("cpc") || !j["cpc"].is_number())
      throw RecordError(line, "missing numeric field 'cpc'");
    const double cpc = j["cpc"].get<double>();
    if (!(cpc >= 0))
      throw RecordError(line, "negative cpc");
    valuation::AdvertiserSpec& spec = by_id[id];
    spec.id = id;
    if (!spec.keyword_cpc.emplace(keyword, cpc).second)
      throw RecordError(line, "duplicate keyword " + keyword + " for " + id);
  });
  std::vector<valuation::AdvertiserSpec> out;
  for (auto& [id, spec] : by_id)
    out.push_back(std::move(spec));
  return out;
}

void WriteCatalog(std::ostream& out,
                  const std::vector<valuation::AdvertiserSpec>& catalog) {
  for (const valuation::AdvertiserSpec& a : catalog) {
    for (const auto& [keyword, cpc] : a.keyword_cpc) {
      json j;
      j["advertiser"] = a.id;
      j["keyword"] = keyword;
      j["cpc"] = cpc;
      out << j.dump() << '\n';
    }
  }
}

valuation::AnonymizedProfile ReadProfile(std::istream& in) {
  valuation::AnonymizedProfile p;
  ForEachJsonLine(in, [&](const json& j, size_t line) {
    valuation::SiteVisits s;
    s.site = StringField(j, "site");
    s.count = IntField(j, "count");
    if (s.count < 0)
      throw RecordError(line, "negative count");
    for (std::string& k : StringArray(j, "keywords"))
      s.keywords.insert(std::move(k));
    p.sites.push_back(std::move(s));
  });
  return p;
}

void WriteProfile(std::ostream& out, const valuation::AnonymizedProfile& p) {
  for (const valuation::SiteVisits& s : p.sites) {
    json j;
    j["site"] = s.site;
    j["count"] = s.count;
    j["keywords"] = std::vector<std::string>(s.keywords.begin(), s.keywords.end());
    out << j.dump() << '\n';
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out.flush())
    throw std::runtime_error("write failed for " + path);
}

}  // namespace infomarket::records
