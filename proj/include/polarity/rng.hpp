#ifndef POLARITY_RNG_HPP
#define POLARITY_RNG_HPP

#include <cstdint>
#include <vector>

namespace polarity::rng {

// SplitMix64 (Steele/Lea/Flood, public domain), reimplemented from its
// reference specification so that streams are bit-identical across
// platforms and languages.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1), 53 mantissa bits.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Deterministic uniform draws on [0, hi).
std::vector<double> seeded_uniform(std::uint64_t seed, std::size_t n, double hi);

}  // namespace polarity::rng

#endif
