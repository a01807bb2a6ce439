#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace skelhedge {

// Philox4x32-10 (Salmon et al. 2011).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t(M0) * ctr[0];
        const std::uint64_t p1 = std::uint64_t(M1) * ctr[2];
        ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
               std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
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

// Hashes a tuple of indices into a stream id.
template <class... Ts>
std::uint64_t stream_id(Ts... parts) {
    std::uint64_t h = 0x243F6A8885A308D3ull;
    ((h = splitmix64(h ^ static_cast<std::uint64_t>(parts))), ...);
    return h;
}

// Stream roles used when keying continuation randomness.
enum class StreamRole : std::uint64_t {
    Prefix = 1,
    Continuation = 2,
    Residual = 3,
    ResidualAlt = 4,
    Physical = 5,
    Test = 99,
};

// Counter-based stream: key = master seed, counter = (stream id, position).
// Satisfies UniformRandomBitGenerator.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream() = default;
    RandomStream(std::uint64_t seed, std::uint64_t stream)
        : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)}, stream_(stream) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (slot_ == 2) refill();
        const auto& b = block_;
        const std::uint64_t v = slot_ == 0 ? (std::uint64_t(b[0]) << 32 | b[1])
                                           : (std::uint64_t(b[2]) << 32 | b[3]);
        ++slot_;
        return v;
    }

    // Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() { return (double((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    int sign() { return ((*this)() >> 63) ? 1 : -1; }

    std::uint64_t position() const { return position_; }

private:
    void refill() {
        block_ = philox4x32({std::uint32_t(stream_), std::uint32_t(stream_ >> 32),
                             std::uint32_t(position_), std::uint32_t(position_ >> 32)},
                            key_);
        ++position_;
        slot_ = 0;
    }

    std::array<std::uint32_t, 2> key_{};
    std::uint64_t stream_ = 0;
    std::uint64_t position_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int slot_ = 2;
};

// Standard normal by the polar method; discards the second variate so the
// stream state depends only on the number of calls.
double standard_normal(RandomStream& rng);

// Gamma(shape, 1) by Marsaglia-Tsang, shape >= 1.
double standard_gamma(double shape, RandomStream& rng);

}  // namespace skelhedge
