#ifndef NETMORPH_RNG_HPP
#define NETMORPH_RNG_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace netmorph {

// Counter-based generator: the value at (seed, stream, counter) is a pure
// function of its arguments, so shards can draw from disjoint counter ranges
// in any order and still reproduce the same sample set. The reference values
// published in the README are asserted in tests/test_verify.cpp.
inline uint64_t counter_hash(uint64_t seed, uint64_t stream, uint64_t counter) {
    uint64_t z = seed;
    z += 0x9e3779b97f4a7c15ULL * (stream + 1);
    z += 0xd1b54a32d192ed03ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double unit_double(uint64_t seed, uint64_t stream, uint64_t counter) {
    return static_cast<double>(counter_hash(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Sequential convenience wrapper over the counter function.
class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t stream = 0) : seed_(seed), stream_(stream) {}

    uint64_t next_u64() { return counter_hash(seed_, stream_, counter_++); }
    double next_unit() { return unit_double(seed_, stream_, counter_++); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // Uniform point in the axis-aligned box [lo, hi]^D.
    std::vector<double> point(std::span<const double> lo, std::span<const double> hi) {
        std::vector<double> x(lo.size());
        for (size_t j = 0; j < lo.size(); ++j) x[j] = uniform(lo[j], hi[j]);
        return x;
    }

    uint64_t counter() const { return counter_; }

private:
    uint64_t seed_;
    uint64_t stream_;
    uint64_t counter_ = 0;
};

}  // namespace netmorph

#endif
