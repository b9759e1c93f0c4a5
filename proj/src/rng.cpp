#include "adjtrace/rng.h"

namespace adjtrace {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi, std::uint32_t &lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// splitmix64 finalizer, used to spread the 64-bit seed into the Philox key.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t pixel, std::uint64_t sample)
    : pixel_(pixel), sample_(sample) {
    const std::uint64_t k = mix64(seed);
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

std::uint64_t RngStream::next_bits() {
    // Counter words: (draw index, sample, pixel lo, pixel hi ^ sample hi).
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(counter_),
        static_cast<std::uint32_t>(sample_) ^ static_cast<std::uint32_t>(counter_ >> 32),
        static_cast<std::uint32_t>(pixel_),
        static_cast<std::uint32_t>(pixel_ >> 32) ^ static_cast<std::uint32_t>(sample_ >> 32)};
    ++counter_;
    const auto out = philox4x32(ctr, key_);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double RngStream::next() { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }

double RngStream::next_open() {
    return (static_cast<double>(next_bits() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace adjtrace
