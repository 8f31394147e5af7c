#pragma once

// Counter-based random streams.
//
// Every random draw in the library comes from Philox4x32-10 keyed by a 64-bit
// seed. The 128-bit counter is split into (stream id, block index), so two
// different stream ids under the same key never touch the same counter value:
// W and B^H of one path, and the sub-streams of one replication, are disjoint
// by construction. Replication seeds are derived from a keyed hash of
// (master seed, cell, replication).

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace mixou {

/// Philox4x32 with 10 rounds (Salmon et al., Random123). Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Well-known sub-stream ids used when one seed drives several independent noises.
enum class Substream : std::uint64_t { Brownian = 0, Fractional = 1, Aux = 2 };

/// Sequential generator over one (key, stream) pair. Satisfies UniformRandomBitGenerator.
class StreamRng {
public:
    using result_type = std::uint32_t;

    StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept;
    StreamRng(std::uint64_t seed, Substream stream) noexcept
        : StreamRng(seed, static_cast<std::uint64_t>(stream)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// 53-bit uniform in the open interval (0, 1).
    double uniform() noexcept;

    /// Standard normal via Box-Muller; values are produced in pairs and cached.
    double normal() noexcept;

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    unsigned used_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Keyed hash of a tuple of integers, used to derive replication seeds.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts) noexcept;

}  // namespace mixou
