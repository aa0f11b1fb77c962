#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace surrogate {

/// Incremental 64-bit FNV-1a. Stable across platforms and builds, used for
/// dataset fingerprints and config hashes stored in checkpoints.
class Fnv1a64 {
public:
    static constexpr std::uint64_t offset_basis = 0xcbf29ce484222325ULL;
    static constexpr std::uint64_t prime = 0x100000001b3ULL;

    void update(std::span<const std::uint8_t> bytes) {
        for (auto b : bytes) {
            state_ ^= b;
            state_ *= prime;
        }
    }
    void update(std::string_view text) {
        for (char c : text) {
            state_ ^= static_cast<std::uint8_t>(c);
            state_ *= prime;
        }
    }
    std::uint64_t digest() const { return state_; }

private:
    std::uint64_t state_ = offset_basis;
};

inline std::uint64_t fnv1a64(std::string_view text) {
    Fnv1a64 h;
    h.update(text);
    return h.digest();
}

/// SplitMix64 finalizer; derives independent generator seeds from one seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace surrogate
