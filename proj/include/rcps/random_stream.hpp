// random_stream.hpp
// Keyed, splittable random streams for reproducible Monte-Carlo runs.
//
// A stream is identified by a 64-bit key. Child streams are derived from the
// parent key and an index, never from the parent's consumed state, so the
// segment-j stream of trial t is the same whether trials/segments run
// sequentially or in parallel.

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace rcps {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
}

constexpr std::uint64_t mix_key(std::uint64_t key, std::uint64_t index) noexcept {
    std::uint64_t s = key ^ (index * 0xD1B54A32D192ED03ULL);
    splitmix64(s);
    return splitmix64(s);
}

}  // namespace detail

// xoshiro256** seeded from a key; satisfies UniformRandomBitGenerator.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t key) noexcept : key_(key) {
        std::uint64_t sm = key;
        for (auto& w : state_) w = detail::splitmix64(sm);
    }

    // Stream keyed by a master seed followed by a path of indices,
    // e.g. keyed(seed, {K, N, trial}).
    static RandomStream keyed(std::uint64_t master_seed,
                              std::initializer_list<std::uint64_t> path) noexcept {
        std::uint64_t k = detail::mix_key(master_seed, 0);
        for (auto i : path) k = detail::mix_key(k, i + 1);
        return RandomStream(k);
    }

    [[nodiscard]] RandomStream substream(std::uint64_t index) const noexcept {
        return RandomStream(detail::mix_key(key_, index + 1));
    }

    [[nodiscard]] std::uint64_t key() const noexcept { return key_; }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
        const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform01() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace rcps
