#pragma once

// Shared plumbing: error taxonomy, deterministic rng, stable hashing.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sncres {

// Bad user input (malformed polynomial, wrong mode, inconsistent degrees).
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A retry or size cap was exhausted, or the local model is out of scope.
struct cap_error : std::runtime_error {
    explicit cap_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A certificate check failed (verification mismatch, SNC violation).
struct certificate_error : std::runtime_error {
    explicit certificate_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal invariant broken; indicates a bug, not bad input.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

// FNV-1a 64-bit, used to stamp the input text into the log header.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// splitmix64: tiny, seedable, identical across platforms.  All randomized
// choices in the pipeline flow through one Rng instance so a logged seed
// replays the run byte for byte.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi], inclusive.  Modulo bias is negligible here:
    // ranges are single digits against 2^64.
    long long next_int(long long lo, long long hi) {
        if (lo > hi) throw internal_error("rng: empty range");
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long long>(next_u64() % span);
    }
};

}  // namespace sncres
