#include "erp/rng.hpp"

#include <cmath>
#include <cstring>

namespace erp {

namespace {
constexpr std::uint64_t kFnvBasis = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;
}  // namespace

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t basis) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = basis;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  return fnv1a64(bytes.data(), bytes.size(), kFnvBasis);
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view tag) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(root >> (8 * i));
  std::uint64_t h = fnv1a64(buf, 8, kFnvBasis);
  h = fnv1a64(tag.data(), tag.size(), h);
  return h;
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  unsigned char buf[16];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(root >> (8 * i));
  for (int i = 0; i < 8; ++i) buf[8 + i] = static_cast<unsigned char>(index >> (8 * i));
  return fnv1a64(buf, 16, kFnvBasis);
}

double Rng::normal() {
  // Box-Muller, cosine branch only. Two uniforms per normal keeps the
  // stream position independent of call history.
  double u1 = uniform_open();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

std::size_t Rng::below(std::size_t n) {
  if (n == 0) return 0;
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

}  // namespace erp
