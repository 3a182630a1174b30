#ifndef INFOMARKET_CONFIG_H_
#define INFOMARKET_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "infomarket/engine.h"

// `key = value` experiment configuration. '#' starts a comment. Keys:
//   market_type             mediated | direct | dnt-mediated | dnt-direct
//   pricing_mode            shapley | auction
//   alpha, epsilon, beta, pi_click, ron, tqm, currency_scale   reals
//   impressions_per_period, round_cap, seed, period_seconds    integers
//   trace, catalog, whitelists, ledger, output                 paths
namespace infomarket::config {

enum class PricingMode { kShapley, kAuction };
std::string_view PricingModeName(PricingMode mode);
std::optional<PricingMode> ParsePricingMode(std::string_view name);

struct RunConfig {
  engine::MarketConfig market;
  PricingMode pricing_mode = PricingMode::kShapley;
  double beta = 1.0;
  double pi_click = 0.1;
  engine::CpmParams cpm{Money::FromMicros(1'000'000), 1.0};
  int round_cap = 100;
  uint64_t seed = 1;
  int64_t period_seconds = 7 * 86400;

  std::string trace_path;
  std::string catalog_path;
  std::string whitelists_path;
  std::string ledger_path;
  std::string output_path;

  // Throws std::invalid_argument naming the offending key.
  void Validate() const;
};

// Raw key/value pairs. Throws std::invalid_argument on a line without '='
// or a repeated key, citing the line number.
std::map<std::string, std::string> ParseKeyValues(std::string_view text);

// Applies `values` on top of `base`. Unknown keys and unparsable values
// throw std::invalid_argument.
RunConfig Apply(RunConfig base, const std::map<std::string, std::string>& values);

// Relative paths are resolved against the file's directory. Throws
// std::invalid_argument when the trace, catalog or whitelists path is set
// but missing.
RunConfig LoadConfigFile(const std::string& path);

// Canonical text form; parsing it back yields an equal configuration.
std::string Serialize(const RunConfig& config);

}  // namespace infomarket::config

#endif  // INFOMARKET_CONFIG_H_
