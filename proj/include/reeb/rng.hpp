#ifndef REEB_RNG_HPP
#define REEB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace reeb {

// Counter-based generator: every draw is a pure function of
// (seed, stream name, index), so sharding a loop across threads cannot
// change the values produced for a given index.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::string_view stream) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (char c : stream) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    key_ = splitmix(seed ^ h);
  }

  std::uint64_t bits(std::uint64_t index) const { return splitmix(key_ + 0x9e3779b97f4a7c15ull * (index + 1)); }

  // Uniform in [0, 1).
  double uniform(std::uint64_t index) const {
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
  }

  double uniform(std::uint64_t index, double lo, double hi) const {
    return lo + (hi - lo) * uniform(index);
  }

  // Standard normal via Box-Muller on two decorrelated substreams.
  double normal(std::uint64_t index) const {
    const double u1 = static_cast<double>(bits(2 * index) >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(bits(2 * index + 1) >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t key_;
};

}  // namespace reeb

#endif
