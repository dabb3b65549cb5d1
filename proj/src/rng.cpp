#include "polarity/rng.hpp"

#include "polarity/errors.hpp"

namespace polarity::rng {

std::vector<double> seeded_uniform(std::uint64_t seed, std::size_t n,
                                   double hi) {
  if (n < 1 || !(hi > 0.0)) {
    throw Error(ErrorCode::ValidationError,
                "seeded_uniform requires n >= 1 and hi > 0");
  }
  SplitMix64 gen(seed);
  std::vector<double> out(n);
  for (double& x : out) x = gen.next_unit() * hi;
  return out;
}

}  // namespace polarity::rng
