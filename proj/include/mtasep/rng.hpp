#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace mtasep {

// Philox4x32-10 (Salmon et al.), counter-based.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int r = 0; r < 10; ++r) {
        std::uint64_t p0 = std::uint64_t{M0} * ctr[0];
        std::uint64_t p1 = std::uint64_t{M1} * ctr[2];
        std::array<std::uint32_t, 4> next = {
            static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        ctr = next;
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent seed for a named sub-experiment (e.g. the two sides of a duality test).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(seed ^ splitmix64(tag + 0x5851F42D4C957F2Dull));
}

// Exponential(1) clocks keyed by (seed, stream, lane, draw index). A lane is a
// bond's left site for lattice dynamics or a colour for the n-particle process.
class ClockStream {
public:
    ClockStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_(stream_id) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    double uniform(std::int64_t lane, std::uint64_t n) const {
        const auto l = static_cast<std::uint32_t>(static_cast<std::uint64_t>(lane) + 0x80000000ull);
        auto out = philox4x32(
            {static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n >> 32) ^ l,
             static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
            {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
        std::uint64_t bits = (std::uint64_t{out[0]} << 32) | out[1];
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

    double exponential(std::int64_t lane, std::uint64_t n) const {
        return -std::log1p(-uniform(lane, n));
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace mtasep
