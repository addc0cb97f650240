#include "cccp/dcsolver.hpp"

namespace cccp {

namespace {

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

std::size_t uniform_index(std::uint64_t seed, std::uint64_t counter, std::size_t m) noexcept {
  // Multiply-shift range reduction; bias is below 2^-64 * m.
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(counter_hash(seed, counter)) * m;
  return static_cast<std::size_t>(wide >> 64);
}

}  // namespace cccp
