#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace erp {

// 64-bit FNV-1a. Used for stable seed derivation and artifact digests;
// stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t basis);

// Derive a child seed from a root seed and a tag (stage name, subject index...).
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag);
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

// Deterministic random source. mt19937_64 is fully specified by the
// standard; normals use explicit Box-Muller so the stream does not depend
// on the standard library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1].
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Unbiased integer in [0, n).
  std::size_t below(std::size_t n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace erp
