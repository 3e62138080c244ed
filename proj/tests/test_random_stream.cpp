#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "rcps/random_stream.hpp"

namespace {

std::vector<std::uint64_t> draw(rcps::RandomStream s, int n) {
    std::vector<std::uint64_t> out;
    for (int i = 0; i < n; ++i) out.push_back(s());
    return out;
}

}  // namespace

TEST(RandomStream, SameKeySameSequence) {
    EXPECT_EQ(draw(rcps::RandomStream::keyed(7, {1, 2, 3}), 100),
              draw(rcps::RandomStream::keyed(7, {1, 2, 3}), 100));
}

TEST(RandomStream, KeyPathsAreDistinct) {
    std::set<std::uint64_t> first;
    for (std::uint64_t seed : {0ULL, 1ULL}) {
        for (std::uint64_t a = 0; a < 4; ++a) {
            for (std::uint64_t b = 0; b < 4; ++b) {
                first.insert(rcps::RandomStream::keyed(seed, {a, b})());
            }
        }
    }
    EXPECT_EQ(first.size(), 32U);
    EXPECT_NE(rcps::RandomStream::keyed(1, {2, 3})(), rcps::RandomStream::keyed(1, {3, 2})());
}

TEST(RandomStream, SubstreamIgnoresConsumedState) {
    auto parent = rcps::RandomStream::keyed(42, {});
    const auto child_before = draw(parent.substream(5), 10);
    for (int i = 0; i < 1000; ++i) parent();
    EXPECT_EQ(draw(parent.substream(5), 10), child_before);
    EXPECT_NE(draw(parent.substream(6), 10), child_before);
}

TEST(RandomStream, Uniform01RangeAndMean) {
    auto s = rcps::RandomStream::keyed(3, {});
    double sum = 0.0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    // sd of the mean: sqrt(1/12 / n)
    EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}
