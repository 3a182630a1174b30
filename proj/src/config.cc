#include "infomarket/config.h"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>

#include "infomarket/records.h"

namespace infomarket::config {

namespace {

std::string_view Trim(std::string_view s) {
  const size_t first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

double ToDouble(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument("config key '" + key + "': not a number: " + v);
  return d;
}

int64_t ToInt(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long n = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument("config key '" + key + "': not an integer: " + v);
  return n;
}

std::string FormatDouble(double d) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  return buf;
}

}  // namespace

std::string_view PricingModeName(PricingMode mode) {
  return mode == PricingMode::kShapley ? "shapley" : "auction";
}

std::optional<PricingMode> ParsePricingMode(std::string_view name) {
  if (name == "shapley")
    return PricingMode::kShapley;
  if (name == "auction")
    return PricingMode::kAuction;
  return std::nullopt;
}

void RunConfig::Validate() const {
  market.Validate();
  if (!(beta >= 0))
    throw std::invalid_argument("config key 'beta' must be >= 0");
  if (!(pi_click >= 0 && pi_click <= 1))
    throw std::invalid_argument("config key 'pi_click' must lie in [0, 1]");
  if (cpm.ron < Money::Zero())
    throw std::invalid_argument("config key 'ron' must be >= 0");
  if (!(cpm.tqm >= 0))
    throw std::invalid_argument("config key 'tqm' must be >= 0");
  if (round_cap <= 0)
    throw std::invalid_argument("config key 'round_cap' must be positive");
  if (period_seconds <= 0)
    throw std::invalid_argument("config key 'period_seconds' must be positive");
}

std::map<std::string, std::string> ParseKeyValues(std::string_view text) {
  std::map<std::string, std::string> out;
  size_t pos = 0;
  size_t number = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    ++number;
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    line = Trim(line.substr(0, line.find('#')));
    if (line.empty())
      continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(number) +
                                  ": expected key = value");
    const std::string key(Trim(line.substr(0, eq)));
    const std::string value(Trim(line.substr(eq + 1)));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(number) +
                                  ": empty key");
    if (!out.emplace(key, value).second)
      throw std::invalid_argument("config line " + std::to_string(number) +
                                  ": repeated key '" + key + "'");
  }
  return out;
}

RunConfig Apply(RunConfig c, const std::map<std::string, std::string>& values) {
  for (const auto& [key, v] : values) {
    if (key == "market_type") {
      auto t = engine::ParseMarketType(v);
      if (!t)
        throw std::invalid_argument("config key 'market_type': unknown " + v);
      c.market.market_type = *t;
    } else if (key == "pricing_mode") {
      auto m = ParsePricingMode(v);
      if (!m)
        throw std::invalid_argument("config key 'pricing_mode': unknown " + v);
      c.pricing_mode = *m;
    } else if (key == "alpha") {
      c.market.alpha = ToDouble(key, v);
    } else if (key == "epsilon") {
      c.market.epsilon = ToDouble(key, v);
    } else if (key == "currency_scale") {
      c.market.currency_scale = ToDouble(key, v);
    } else if (key == "impressions_per_period") {
      c.market.impressions_per_period = ToInt(key, v);
    } else if (key == "beta") {
      c.beta = ToDouble(key, v);
    } else if (key == "pi_click") {
      c.pi_click = ToDouble(key, v);
    } else if (key == "ron") {
      auto m = Money::Parse(v);
      if (!m)
        throw std::invalid_argument("config key 'ron': not an amount: " + v);
      c.cpm.ron = *m;
    } else if (key == "tqm") {
      c.cpm.tqm = ToDouble(key, v);
    } else if (key == "round_cap") {
      c.round_cap = static_cast<int>(ToInt(key, v));
    } else if (key == "seed") {
      c.seed = static_cast<uint64_t>(ToInt(key, v));
    } else if (key == "period_seconds") {
      c.period_seconds = ToInt(key, v);
    } else if (key == "trace") {
      c.trace_path = v;
    } else if (key == "catalog") {
      c.catalog_path = v;
    } else if (key == "whitelists") {
      c.whitelists_path = v;
    } else if (key == "ledger") {
      c.ledger_path = v;
    } else if (key == "output") {
      c.output_path = v;
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  return c;
}

RunConfig LoadConfigFile(const std::string& path) {
  RunConfig c = Apply(RunConfig{}, ParseKeyValues(records::ReadFile(path)));
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  for (std::string* p : {&c.trace_path, &c.catalog_path, &c.whitelists_path,
                         &c.ledger_path, &c.output_path}) {
    if (!p->empty() && std::filesystem::path(*p).is_relative())
      *p = (dir / *p).lexically_normal().string();
  }
  // Inputs must exist; the ledger and output are created on demand.
  const std::pair<const char*, const std::string*> inputs[] = {
      {"trace", &c.trace_path},
      {"catalog", &c.catalog_path},
      {"whitelists", &c.whitelists_path}};
  for (const auto& [key, p] : inputs) {
    if (!p->empty() && !std::filesystem::exists(*p))
      throw std::invalid_argument(std::string(key) + ": no such file " + *p);
  }
  return c;
}

std::string Serialize(const RunConfig& c) {
  std::string out;
  auto put = [&out](std::string_view key, const std::string& value) {
    out += std::string(key) + " = " + value + "\n";
  };
  put("market_type", std::string(engine::MarketTypeName(c.market.market_type)));
  put("pricing_mode", std::string(PricingModeName(c.pricing_mode)));
  put("alpha", FormatDouble(c.market.alpha));
  put("epsilon", FormatDouble(c.market.epsilon));
  put("beta", FormatDouble(c.beta));
  put("pi_click", FormatDouble(c.pi_click));
  put("impressions_per_period", std::to_string(c.market.impressions_per_period));
  put("round_cap", std::to_string(c.round_cap));
  put("seed", std::to_string(c.seed));
  put("ron", c.cpm.ron.ToString());
  put("tqm", FormatDouble(c.cpm.tqm));
  put("period_seconds", std::to_string(c.period_seconds));
  put("currency_scale", FormatDouble(c.market.currency_scale));
  const std::pair<std::string_view, const std::string*> paths[] = {
      {"trace", &c.trace_path},       {"catalog", &c.catalog_path},
      {"whitelists", &c.whitelists_path}, {"ledger", &c.ledger_path},
      {"output", &c.output_path}};
  for (const auto& [key, value] : paths) {
    if (!value->empty())
      put(key, *value);
  }
  return out;
}

}  // namespace infomarket::config
