#pragma once

#include <array>
#include <cstdint>

namespace adjtrace {

/// Counter-based uniform stream (Philox4x32-10) keyed by (seed, pixel, sample).
///
/// The n-th value of a stream depends only on the key and n, so streams can be
/// created anywhere, in any order, on any worker, and replay identically.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t pixel, std::uint64_t sample);

    /// Uniform in [0, 1) with 53 random bits.
    double next();
    /// Uniform in the open interval (0, 1).
    double next_open();

    std::uint64_t draws() const { return counter_; }

private:
    std::uint64_t next_bits();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t pixel_;
    std::uint64_t sample_;
    std::uint64_t counter_ = 0;
};

/// One Philox4x32 block with 10 rounds.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

}  // namespace adjtrace
