#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace clgeo {

/// Seeded RNG used by every sampler. Bounded draws use rejection
/// sampling on the raw mt19937_64 stream, so a given seed produces the
/// same sequence on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform draw from [0, n), n >= 1.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~0ull - ~0ull % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

    /// Sorted sample of k distinct values from [0, n).
    std::vector<std::uint32_t> sample_indices(std::uint32_t n, std::uint32_t k) {
        std::vector<std::uint32_t> all(n);
        for (std::uint32_t i = 0; i < n; ++i) all[i] = i;
        shuffle(all);
        std::vector<std::uint32_t> out(all.begin(), all.begin() + k);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace clgeo
