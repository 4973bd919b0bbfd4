#pragma once

// Seeded input generators for property tests.

#include <cmath>
#include <cstdint>
#include <random>

namespace testgen {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }
    double sign() { return coin() ? 1.0 : -1.0; }

private:
    std::mt19937_64 rng_;
};

} // namespace testgen
