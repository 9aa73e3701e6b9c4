#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace hiergap {

// Deterministic 64-bit generator used for every random choice in the
// library. The state update is the xorshift64* shift-register step
//   s ^= s >> 12; s ^= s << 25; s ^= s >> 27; out = s * 0x2545F4914F6CDD1D
// seeded through one splitmix64 scramble so that small seeds give unrelated
// streams. Sub-streams are split off by hashing (FNV-1a) the parent state
// with a purpose label, so each sampling site replays independently of call
// order elsewhere.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next();

  // Uniform in [0, n), unbiased via rejection. n must be positive.
  uint64_t below(uint64_t n);

  // Independent stream labeled by purpose, derived from the *seed*, not the
  // current position, so splits are stable.
  Rng sub(std::string_view label) const;

  uint64_t seed() const { return seed_; }

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t seed_;
  uint64_t state_;
};

}  // namespace hiergap
