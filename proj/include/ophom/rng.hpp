#pragma once

#include <cstdint>
#include <vector>

namespace ophom {

// Deterministic splitmix64 generator.  All sampling in the test and
// verification layers goes through this so that a seed fully determines a
// run on every platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n)
    uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }

    // uniform in [lo, hi] inclusive
    long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<uint64_t>(hi - lo + 1))); }

    // small nonzero integer in [-max, max] \ {0}
    long small_nonzero(long max = 3) {
        long v = range(1, max);
        return below(2) ? v : -v;
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

private:
    uint64_t state_;
};

}  // namespace ophom
