#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace credo {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stable 64-bit seed for a named RNG stream. The hash is defined over
/// length-prefixed label bytes (FNV-1a) so label lists cannot collide by
/// concatenation, and does not depend on std::hash or platform details.
inline std::uint64_t derive_seed(std::uint64_t master_seed,
                                 std::span<const std::string> labels) {
  if (labels.empty()) {
    throw std::invalid_argument("derive_seed: label list must be non-empty");
  }
  std::uint64_t h = 0xcbf29ce484222325ULL ^ splitmix64(master_seed);
  auto mix_byte = [&h](unsigned char b) {
    h ^= b;
    h *= 0x100000001b3ULL;
  };
  for (const std::string& label : labels) {
    std::uint64_t len = label.size();
    for (int i = 0; i < 8; ++i) mix_byte(static_cast<unsigned char>(len >> (8 * i)));
    for (char c : label) mix_byte(static_cast<unsigned char>(c));
  }
  return splitmix64(h);
}

namespace detail {
inline void append_label(std::vector<std::string>&) {}
template <typename T, typename... Rest>
void append_label(std::vector<std::string>& out, const T& head, const Rest&... rest) {
  if constexpr (std::is_integral_v<T>) {
    out.push_back(std::to_string(head));
  } else {
    out.emplace_back(head);
  }
  append_label(out, rest...);
}
}  // namespace detail

/// derive_seed(master, "trial", 3, "agent", 0, "behavior")
template <typename... Labels>
std::uint64_t derive_seed(std::uint64_t master_seed, const Labels&... labels) {
  std::vector<std::string> v;
  detail::append_label(v, labels...);
  return derive_seed(master_seed, std::span<const std::string>(v));
}

/// Deterministic random stream. Wraps std::mt19937_64 (whose output sequence
/// is fixed by the standard) but implements all derived draws by hand, since
/// the std::*_distribution classes are not bit-reproducible across platforms.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1), 53 bits of precision.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound), unbiased via rejection sampling.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Box-Muller without the cached spare, so the draw count per call is fixed.
  double gaussian(double mean, double sigma) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    return mean + sigma * r * std::cos(two_pi * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace credo
