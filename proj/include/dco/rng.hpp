#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "dco/rational.hpp"

namespace dco {

// Seeding discipline: all randomness is derived from (master seed, purpose
// tag, indices) through a keyed mixing function. No ambient RNG state, so
// results are independent of thread count and platform.

inline constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a over a string literal, for stable purpose tags.
inline constexpr uint64_t tag(const char* s) {
    uint64_t h = 1469598103934665603ULL;
    for (; *s; ++s) h = (h ^ static_cast<unsigned char>(*s)) * 1099511628211ULL;
    return h;
}

// Stateless keyed PRF: mixes any number of 64-bit words into one output.
inline uint64_t prf(uint64_t key) { return splitmix64(key); }

template <typename... Rest>
inline uint64_t prf(uint64_t key, uint64_t w, Rest... rest) {
    return prf(splitmix64(key ^ (w + 0x9e3779b97f4a7c15ULL)), rest...);
}

// Sequential generator seeded from the PRF, for shuffles and streams.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(splitmix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return splitmix64(state_);
    }

    // Uniform in [0, bound) by rejection; bound > 0.
    uint64_t below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool coin() { return next() & 1; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    std::vector<int> permutation(int n) {
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        shuffle(p);
        return p;
    }

  private:
    uint64_t state_;
};

// Uniform draw on [0, p) keyed by (seed, tag, three words), exact by rejection.
inline long long uniform_prf(uint64_t seed, uint64_t t, uint64_t w1, uint64_t w2, uint64_t w3,
                             long long p) {
    uint64_t k = static_cast<uint64_t>(p);
    uint64_t threshold = (0 - k) % k;
    for (uint64_t attempt = 0;; ++attempt) {
        uint64_t r = prf(seed, t, w1, w2, w3, attempt);
        if (r >= threshold) return static_cast<long long>(r % k);
    }
}

// Exact Bernoulli(q) for rational q in [0,1]: compare a 64-bit draw against
// floor(q * 2^64).
inline bool bernoulli_prf(uint64_t draw, const Rat& q) {
    if (q <= Rat(0)) return false;
    if (q >= Rat(1)) return true;
    unsigned __int128 cut =
        (static_cast<unsigned __int128>(q.numerator()) << 64) / static_cast<unsigned __int128>(q.denominator());
    return static_cast<unsigned __int128>(draw) < cut;
}

}  // namespace dco
