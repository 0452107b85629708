#pragma once

#include <cstdint>

namespace bisidon {

// splitmix64 finalizer (Steele/Lea/Flood via Vigna). Bijective on uint64.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Substream derivation: derive(seed, i) feeds both words through mix64 so
// nearby (seed, index) pairs land in unrelated states. This is the fixed
// mixing bijection every parallel code path uses; results are reproducible
// for a given (seed, index) regardless of scheduling.
inline uint64_t derive_stream(uint64_t seed, uint64_t index) {
    return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
  public:
    explicit Rng(uint64_t seed) : seed_(seed), state_(seed) {}

    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased draw from [0, n) by rejection; no modulo bias.
    uint64_t below(uint64_t n) {
        // largest multiple of n that fits in 2^64
        const uint64_t limit = n * ((~uint64_t{0}) / n);
        uint64_t r;
        do {
            r = next();
        } while (r >= limit);
        return r % n;
    }

    // Substreams hang off the construction seed, not the evolving state, so
    // substream(i) does not depend on how many values were drawn first.
    Rng substream(uint64_t index) const {
        return Rng(derive_stream(seed_, index));
    }

    uint64_t seed() const { return seed_; }

  private:
    uint64_t seed_;
    uint64_t state_;
};

} // namespace bisidon
