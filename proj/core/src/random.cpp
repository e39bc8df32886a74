#include "conestable/random.hpp"

#include <cmath>
#include <numbers>

namespace conestable {

Rng Rng::substream(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t sm = seed ^ 0x5851f42d4c957f2dULL;
  std::uint64_t mixed = splitmix64(sm);
  sm = mixed ^ (index * 0xd1b54a32d192ed03ULL + 0x8bb84b93962eacc9ULL);
  return Rng(splitmix64(sm));
}

double Rng::exponential() noexcept { return -std::log(uniform()); }

double Rng::standard_normal() noexcept {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace conestable
