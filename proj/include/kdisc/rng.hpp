#pragma once

#include <cstdint>

namespace kdisc {

// Counter-based splittable generator (splitmix64 finalizer).  Every draw is a
// pure function of (seed, stream, counter), so per-trial streams can run in
// any order or in parallel and still reproduce byte-identical results.
class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t stream)
        : state_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))), counter_(0) {}

    uint64_t next_u64() { return mix(state_ + (++counter_) * 0x9e3779b97f4a7c15ull); }

    // Uniform in (0, 1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double gaussian(); // Box-Muller, one value per call (pair cached)

    static uint64_t mix(uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

private:
    uint64_t state_;
    uint64_t counter_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace kdisc
