#include "qrd/random.hpp"

#include <bit>

namespace qrd {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t index, std::uint64_t domain) {
  std::uint64_t mix = master_seed;
  std::uint64_t key = splitmix64(mix);
  mix = key ^ domain;
  key = splitmix64(mix);
  mix = key ^ index;
  for (auto& word : state_) word = splitmix64(mix);
}

RandomStream::result_type RandomStream::operator()() {
  const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = std::rotl(state_[3], 45);
  return result;
}

double RandomStream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double RandomStream::normal() { return normal_(*this); }

double RandomStream::gamma(double shape, double scale) {
  return gamma_(*this, std::gamma_distribution<double>::param_type(shape, scale));
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(*this);
}

}  // namespace qrd
