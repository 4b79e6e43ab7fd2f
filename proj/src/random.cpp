#include "mpft/random.hpp"

namespace mpft {

Rng Rng::derive(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::uint64_t words[2];
  std::uint32_t raw[4];
  seq.generate(raw, raw + 4);
  words[0] = (static_cast<std::uint64_t>(raw[0]) << 32) | raw[1];
  words[1] = (static_cast<std::uint64_t>(raw[2]) << 32) | raw[3];
  return Rng(words[0] ^ (words[1] * 0x9E3779B97F4A7C15ull));
}

}  // namespace mpft
