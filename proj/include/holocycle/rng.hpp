#pragma once

#include <cstdint>

namespace holo {

// Counter-based generator: output i is a pure function of (key, i), so any
// pixel/frame/parameter can be sampled independently of thread scheduling.
// Keys are derived by folding stream identifiers through the SplitMix64
// finalizer. Distribution code is hand-rolled because std:: distributions
// are implementation-defined and would break byte-identical datasets.

uint64_t mix64(uint64_t x);

/// Derive a child key from a parent key and a stream index.
uint64_t derive_key(uint64_t parent, uint64_t stream);

class CounterRng {
public:
    explicit CounterRng(uint64_t key) : key_(key) {}
    CounterRng(uint64_t parent, uint64_t stream) : key_(derive_key(parent, stream)) {}

    uint64_t next_u64() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    /// Uniform integer in [lo, hi] inclusive.
    int64_t uniform_int(int64_t lo, int64_t hi);
    /// Standard normal via Box-Muller.
    double normal();
    /// Poisson with the given mean (inversion for small, PTRD for large means).
    long long poisson(double mean);

private:
    uint64_t key_;
    uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace holo
