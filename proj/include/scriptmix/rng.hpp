#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace scriptmix {

// SplitMix64 generator. Chosen over std:: engines so that shuffles and
// samples are reproducible independent of the standard library in use.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Derives an independent named substream from a root seed. Every random
// decision in the pipeline draws from a named substream so a single root
// seed reproduces the whole experiment.
std::uint64_t substream_seed(std::uint64_t root, std::string_view name);

template <typename T>
void seeded_shuffle(std::vector<T>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(v[i - 1], v[j]);
  }
}

// k distinct indices from [0, n), returned in ascending order.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, SplitMix64& rng);

}  // namespace scriptmix
