#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace glidesnn {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a over a tag string, used to name sub-streams.
constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Derives independent random streams from a master seed.
///
/// Each consumer asks for the stream keyed by (tag, index); the result depends
/// only on (master seed, tag, index), so adding draws in one module never shifts
/// the draws seen by another.
class StreamFactory {
public:
    explicit StreamFactory(std::uint64_t master_seed) noexcept : master_(master_seed) {}

    [[nodiscard]] Rng stream(std::string_view tag, std::uint64_t index = 0) const {
        std::uint64_t s = mix64(master_ ^ mix64(tag_hash(tag)));
        s = mix64(s ^ mix64(index + 0x632be59bd9b4e019ULL));
        std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(master_)};
        return Rng(seq);
    }

    [[nodiscard]] std::uint64_t master_seed() const noexcept { return master_; }

private:
    std::uint64_t master_;
};

}  // namespace glidesnn
