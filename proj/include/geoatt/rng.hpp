#pragma once

#include <cstdint>

namespace geoatt {

// Counter-based generator (splitmix64 finalizer over seed + counter).
// The same seed yields the same stream everywhere; nothing depends on
// platform library internals, so ports can reproduce results bit for bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64();
    double next_double();                  // uniform [0, 1)
    double uniform(double lo, double hi);
    double normal();                       // standard normal (Box-Muller)
    int next_index(int n);                 // uniform over {0, ..., n-1}

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace geoatt
