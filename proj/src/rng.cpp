#include "holocycle/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace holo {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t derive_key(uint64_t parent, uint64_t stream) { return mix64(mix64(parent) ^ mix64(stream * 0xda942042e4dd58b5ULL + 1)); }

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int64_t CounterRng::uniform_int(int64_t lo, int64_t hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    // rejection sampling keeps the distribution exactly uniform
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return lo + static_cast<int64_t>(v % span);
}

double CounterRng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

namespace {

// Hormann's PTRD transformed-rejection sampler, valid for mean >= 10.
long long poisson_ptrd(CounterRng& rng, double mu) {
    const double smu = std::sqrt(mu);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        double u;
        double v = rng.uniform();
        if (v <= 0.86 * v_r) {
            u = v / v_r - 0.43;
            return static_cast<long long>(std::floor((2.0 * a / (0.5 - std::abs(u)) + b) * u + mu + 0.445));
        }
        if (v >= v_r) {
            u = rng.uniform() - 0.5;
        } else {
            u = v / v_r - 0.93;
            u = (u < 0 ? -0.5 : 0.5) - u;
            v = rng.uniform() * v_r;
        }
        const double us = 0.5 - std::abs(u);
        if (us < 0.013 && v > us) continue;
        const double k = std::floor((2.0 * a / us + b) * u + mu + 0.445);
        v = v * inv_alpha / (a / (us * us) + b);
        if (k >= 10.0) {
            const double log_sqrt_2pi = 0.91893853320467267;
            if (std::log(v * smu) <= (k + 0.5) * std::log(mu / k) - mu - log_sqrt_2pi + k - (1.0 / 12.0 - 1.0 / (360.0 * k * k)) / k)
                return static_cast<long long>(k);
        } else if (k >= 0.0) {
            // lgamma covers the small-k acceptance test exactly
            if (std::log(v) <= k * std::log(mu) - mu - std::lgamma(k + 1.0)) return static_cast<long long>(k);
        }
    }
}

long long poisson_inversion(CounterRng& rng, double mu) {
    const double q = std::exp(-mu);
    double p = 1.0;
    long long k = -1;
    do {
        ++k;
        p *= rng.uniform();
    } while (p > q);
    return k;
}

}  // namespace

long long CounterRng::poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be nonnegative");
    if (mean == 0.0) return 0;
    if (mean < 10.0) return poisson_inversion(*this, mean);
    return poisson_ptrd(*this, mean);
}

}  // namespace holo
