#include "infomarket/rng.h"

namespace infomarket {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t HashString(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t DeriveSeed(uint64_t global_seed, std::string_view user,
                    int64_t period) {
  uint64_t h = SplitMix64(global_seed);
  h = SplitMix64(h ^ HashString(user));
  return SplitMix64(h ^ static_cast<uint64_t>(period));
}

uint64_t DeriveSeed(uint64_t global_seed, std::string_view stream) {
  return SplitMix64(SplitMix64(global_seed) ^ HashString(stream));
}

double UniformDouble(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double UniformOpenDouble(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

uint64_t UniformIndex(Rng& rng, uint64_t n) {
  // Rejection sampling removes modulo bias.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace infomarket
