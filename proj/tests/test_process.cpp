#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "oracles.hpp"
#include "rcps/process.hpp"

using rcps::ComplexAmplitude;
using rcps::UnitaryParams;

namespace {
constexpr double pi = std::numbers::pi;

double uniform(rcps::RandomStream& s, double lo, double hi) { return lo + (hi - lo) * s.uniform01(); }
}  // namespace

TEST(UnitaryParams, RangeChecked) {
    EXPECT_THROW(UnitaryParams(0, 0, 3.5, 0), std::invalid_argument);
    EXPECT_THROW(UnitaryParams(0, 0, 0, -3.5), std::invalid_argument);
    EXPECT_NO_THROW(UnitaryParams(10.0, -20.0, pi, -pi));
}

TEST(BuildUnitary, IdentityAndRotation) {
    const auto id = rcps::build_unitary(UnitaryParams(0, 0, 0, 0));
    EXPECT_NEAR(std::abs(id(0, 0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(id(0, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(id(1, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(id(1, 1) - 1.0), 0.0, 1e-15);

    const auto y = rcps::build_unitary(UnitaryParams(0, 0, pi, 0));
    EXPECT_NEAR(std::abs(y(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(y(0, 1) + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(y(1, 0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(y(1, 1)), 0.0, 1e-15);
}

TEST(BuildUnitary, ReferenceParametersAreUnitary) {
    const auto m = rcps::build_unitary(UnitaryParams(pi / 10, pi / 5, 3 * pi / 10, 2 * pi / 5));
    EXPECT_LT(m.unitarity_defect(), 1e-12);
}

TEST(BuildUnitary, RandomDrawsAreUnitary) {
    auto s = rcps::RandomStream::keyed(1, {});
    for (int i = 0; i < 10000; ++i) {
        const UnitaryParams p(uniform(s, -10, 10), uniform(s, -10, 10), uniform(s, -pi, pi), uniform(s, -pi, pi));
        ASSERT_LT(rcps::build_unitary(p).unitarity_defect(), 1e-12);
    }
}

TEST(ApplyProcess, Examples) {
    const auto out = rcps::apply_process(rcps::build_unitary(UnitaryParams(0, 0, 0, 0)),
                                         rcps::PureStateRealization{0.6, 0.8});
    EXPECT_NEAR(std::abs(out[0] - 0.6), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out[1] - 0.8), 0.0, 1e-15);

    const auto flip = rcps::apply_process(rcps::build_unitary(UnitaryParams(0, 0, pi, 0)),
                                          rcps::PureStateRealization{1.0, 0.0});
    EXPECT_NEAR(std::abs(flip[0]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(flip[1] - 1.0), 0.0, 1e-15);
}

TEST(ApplyProcess, DimensionMismatch) {
    const auto m = rcps::build_unitary(UnitaryParams(0, 0, 0, 0));
    const rcps::PureStateRealization three{1.0, 0.0, 0.0};
    EXPECT_THROW(rcps::apply_process(m, three), std::invalid_argument);
}

TEST(ApplyProcess, PreservesNorm) {
    auto s = rcps::RandomStream::keyed(2, {});
    const rcps::QubitInputDistribution dist(0.0, 1.0, pi);
    for (int i = 0; i < 5000; ++i) {
        const UnitaryParams p(uniform(s, -pi, pi), uniform(s, -pi, pi), uniform(s, -pi, pi), uniform(s, -pi, pi));
        const auto in = rcps::sample_input_realization(dist, s);
        const auto out = rcps::apply_process(rcps::build_unitary(p), in.state);
        ASSERT_NEAR(std::norm(out[0]) + std::norm(out[1]), 1.0, 1e-12);
    }
}

TEST(P0ClosedForm, Examples) {
    EXPECT_NEAR(rcps::p0_closed_form(0.0, 1.234, 0.7, -0.3), 0.49, 1e-15);
    EXPECT_NEAR(rcps::p0_closed_form(3 * pi / 10, 0.5, 1.0, 0.2), (1.0 + std::cos(3 * pi / 10)) / 2.0, 1e-15);
    EXPECT_NEAR(rcps::p0_closed_form(3 * pi / 10, 0.5, 1.0, 0.2), 0.793893, 1e-6);
    EXPECT_THROW(rcps::p0_closed_form(0.0, 0.0, 1.5, 0.0), std::invalid_argument);
}

TEST(P0ClosedForm, MatchesMatrixRouteAtReferencePoint) {
    const UnitaryParams p(pi / 10, pi / 5, 3 * pi / 10, 2 * pi / 5);
    const rcps::QubitInputDistribution dist(0.0, 1.0, pi / 4);
    const auto in = rcps::input_from_quantiles(dist, 0.5, 0.5);
    const auto out = rcps::apply_process(rcps::build_unitary(p), in.state);
    EXPECT_NEAR(rcps::p0_closed_form(p.phi3, p.phi4, 0.5, 0.0), rcps::probabilities(out)[0], 1e-12);
}

// Closed form vs. the matrix route and vs. a direct amplitude oracle, for
// arbitrary phi1, phi2 (neither may change P0).
TEST(P0ClosedForm, OracleEquivalenceProperty) {
    auto s = rcps::RandomStream::keyed(3, {});
    const rcps::QubitInputDistribution full(0.0, 1.0, pi);
    for (int i = 0; i < 10000; ++i) {
        const UnitaryParams p(uniform(s, -pi, pi), uniform(s, -pi, pi), uniform(s, -pi, pi), uniform(s, -pi, pi));
        const auto in = rcps::sample_input_realization(full, s);
        const double closed = rcps::p0_closed_form(p.phi3, p.phi4, in.r, in.phi);
        const auto out = rcps::apply_process(rcps::build_unitary(p), in.state);
        const auto probs = rcps::probabilities(out);
        ASSERT_NEAR(closed, probs[0], 1e-12);
        ASSERT_NEAR(1.0 - closed, probs[1], 1e-12);
        ASSERT_NEAR(closed, rcps::oracle::p0_by_amplitude(p.phi1, p.phi2, p.phi3, p.phi4, in.r, in.phi), 1e-12);
        ASSERT_GE(closed, 0.0);
        ASSERT_LE(closed, 1.0);
    }
}
