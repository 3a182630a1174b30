#ifndef INFOMARKET_RNG_H_
#define INFOMARKET_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace infomarket {

// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. Distributions are implemented here instead of using <random>'s,
// whose algorithms are implementation-defined, so seeded runs are
// reproducible across standard libraries.
using Rng = std::mt19937_64;

uint64_t SplitMix64(uint64_t x);

// Stable 64-bit FNV-1a hash of a string.
uint64_t HashString(std::string_view s);

// Sub-seed for a (user, period) pair under a global seed. Used for per-user
// auctions so seeds do not depend on iteration order.
uint64_t DeriveSeed(uint64_t global_seed, std::string_view user, int64_t period);

// Sub-seed for a named stream ("publishers", "events", ...).
uint64_t DeriveSeed(uint64_t global_seed, std::string_view stream);

// Uniform on [0, 1) with 53 random bits.
double UniformDouble(Rng& rng);
// Uniform on (0, 1); safe as a log argument.
double UniformOpenDouble(Rng& rng);
// Uniform integer in [0, n). n must be positive.
uint64_t UniformIndex(Rng& rng, uint64_t n);

}  // namespace infomarket

#endif  // INFOMARKET_RNG_H_
