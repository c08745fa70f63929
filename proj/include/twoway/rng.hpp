// Seeded random streams with keyed substream derivation. Every stream is a
// pure function of its 64-bit seed, so replications, bootstrap draws, and
// grid cells get independent streams that are reproducible no matter how
// work is scheduled across threads.
#pragma once

#include <cstdint>

namespace twoway {

// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives a child seed from (base, key). Chain calls to key a stream by a
// path of identifiers; distinct paths give statistically independent streams.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key) {
    return mix64(base ^ mix64(key ^ 0x632be59bd9b4e019ULL));
}

// Fixed purpose tags keeping unrelated substreams of one seed apart.
namespace seed_tag {
inline constexpr std::uint64_t replication = 0x01;
inline constexpr std::uint64_t bootstrap = 0x02;
inline constexpr std::uint64_t cell = 0x03;
inline constexpr std::uint64_t diagnostics = 0x04;
}  // namespace seed_tag

// splitmix64 sequence generator.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0,1): 53-bit grid offset by half a step,
    // so inverse-CDF transforms never see 0 or 1.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via inverse CDF; one uniform consumed per draw.
    double next_normal();

    // +1 or -1 with equal probability; one word consumed, keeping stream
    // alignment identical to next_normal.
    double next_rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

private:
    std::uint64_t state_;
};

}  // namespace twoway
