#include "scriptmix/rng.hpp"

#include <algorithm>
#include <numeric>

namespace scriptmix {

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  // Classic rejection sampling; unbiased for any bound.
  const std::uint64_t threshold = -bound % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

std::uint64_t substream_seed(std::uint64_t root, std::string_view name) {
  // FNV-1a over the name, mixed with the root seed through SplitMix64.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  SplitMix64 mixer(root ^ h);
  return mixer.next();
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, SplitMix64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  seeded_shuffle(idx, rng);
  if (k > n) k = n;
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace scriptmix
