#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "rcps/state.hpp"

using rcps::ComplexAmplitude;
using rcps::PureStateRealization;
using rcps::QubitInputDistribution;

namespace {
constexpr double pi = std::numbers::pi;
const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
}  // namespace

TEST(PureState, RejectsInvalid) {
    EXPECT_THROW(PureStateRealization({ComplexAmplitude{1.0, 0.0}}), std::invalid_argument);
    EXPECT_THROW(PureStateRealization({ComplexAmplitude{1.0, 0.0}, ComplexAmplitude{0.1, 0.0}}),
                 std::invalid_argument);
    EXPECT_THROW(PureStateRealization({ComplexAmplitude{NAN, 0.0}, ComplexAmplitude{1.0, 0.0}}),
                 std::invalid_argument);
}

TEST(InputDistribution, RejectsInvalidBounds) {
    EXPECT_THROW(QubitInputDistribution(1.0, 1.0, pi / 4), std::invalid_argument);
    EXPECT_THROW(QubitInputDistribution(0.5, 0.2, pi / 4), std::invalid_argument);
    EXPECT_THROW(QubitInputDistribution(-0.1, 0.5, pi / 4), std::invalid_argument);
    EXPECT_THROW(QubitInputDistribution(0.0, 1.1, pi / 4), std::invalid_argument);
    EXPECT_THROW(QubitInputDistribution(0.0, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(QubitInputDistribution(0.0, 1.0, 3.5), std::invalid_argument);
    EXPECT_NO_THROW(QubitInputDistribution(0.0, 1.0, pi));
}

TEST(Sampler, MidpointQuantiles) {
    const QubitInputDistribution dist(0.0, 1.0, pi / 4);
    const auto in = rcps::input_from_quantiles(dist, 0.5, 0.5);
    EXPECT_DOUBLE_EQ(in.r, 0.5);
    EXPECT_DOUBLE_EQ(in.phi, 0.0);
    EXPECT_DOUBLE_EQ(in.state[0].real(), 0.5);
    EXPECT_NEAR(std::abs(in.state[1] - ComplexAmplitude{std::sqrt(0.75), 0.0}), 0.0, 1e-15);
}

TEST(Sampler, RealizationsNormalizedWithRealNonNegativeFirstAmplitude) {
    const QubitInputDistribution dist(0.1, 0.9, pi / 3);
    auto rng = rcps::RandomStream::keyed(11, {});
    for (int i = 0; i < 10000; ++i) {
        const auto in = rcps::sample_input_realization(dist, rng);
        EXPECT_NEAR(std::norm(in.state[0]) + std::norm(in.state[1]), 1.0, 1e-12);
        EXPECT_EQ(in.state[0].imag(), 0.0);
        EXPECT_GE(in.state[0].real(), 0.0);
        EXPECT_GE(in.r, 0.1);
        EXPECT_LE(in.r, 0.9);
        EXPECT_LE(std::abs(in.phi), pi / 3);
    }
}

TEST(Sampler, DeterministicForSeed) {
    const QubitInputDistribution dist(0.0, 1.0, pi / 4);
    auto a = rcps::RandomStream::keyed(5, {1});
    auto b = rcps::RandomStream::keyed(5, {1});
    for (int i = 0; i < 1000; ++i) {
        const auto x = rcps::sample_input_realization(dist, a);
        const auto y = rcps::sample_input_realization(dist, b);
        ASSERT_EQ(x.r, y.r);
        ASSERT_EQ(x.phi, y.phi);
    }
}

// E{r^2} = (a^2 + ab + b^2)/3 = 1/3 on [0, 1]; Var(r^2) = E{r^4} - 1/9 = 4/45.
TEST(Sampler, MeanOfRSquaredMatchesLaw) {
    const QubitInputDistribution dist(0.0, 1.0, pi / 4);
    auto rng = rcps::RandomStream::keyed(2024, {});
    constexpr int n = 1000000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto p = rcps::sample_input_parameters(dist, rng);
        sum += p.r * p.r;
    }
    EXPECT_NEAR(sum / n, 1.0 / 3.0, 3.0 * std::sqrt(4.0 / 45.0 / n));
}

TEST(Probabilities, BasisAndSuperpositions) {
    EXPECT_EQ(rcps::probabilities(PureStateRealization{1.0, 0.0}).p, (std::vector<double>{1.0, 0.0}));
    const auto eq = rcps::probabilities(PureStateRealization{inv_sqrt2, ComplexAmplitude{0.0, inv_sqrt2}});
    EXPECT_NEAR(eq[0], 0.5, 1e-15);
    EXPECT_NEAR(eq[1], 0.5, 1e-15);
    const auto p345 = rcps::probabilities(PureStateRealization{0.6, ComplexAmplitude{0.0, 0.8}});
    EXPECT_NEAR(p345[0], 0.36, 1e-15);
    EXPECT_NEAR(p345[1], 0.64, 1e-15);
}

TEST(RealizationDensity, Examples) {
    const auto r0 = rcps::realization_density(PureStateRealization{1.0, 0.0});
    EXPECT_EQ(r0(0, 0), ComplexAmplitude(1.0, 0.0));
    EXPECT_EQ(r0(0, 1), ComplexAmplitude(0.0, 0.0));
    EXPECT_EQ(r0(1, 1), ComplexAmplitude(0.0, 0.0));

    const auto rp = rcps::realization_density(PureStateRealization{inv_sqrt2, inv_sqrt2});
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) EXPECT_NEAR(std::abs(rp(k, l) - 0.5), 0.0, 1e-15);
}

TEST(RealizationDensity, PureProjectorPropertiesAndDiagonalIdentity) {
    const QubitInputDistribution dist(0.0, 1.0, pi);
    auto rng = rcps::RandomStream::keyed(9, {});
    for (int i = 0; i < 2000; ++i) {
        const auto s = rcps::sample_input_realization(dist, rng).state;
        const auto rho = rcps::realization_density(s);
        const auto p = rcps::probabilities(s);
        EXPECT_EQ(rho(0, 0).real(), p[0]);
        EXPECT_EQ(rho(1, 1).real(), p[1]);
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
        const auto det = rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0);
        EXPECT_NEAR(std::abs(det), 0.0, 1e-12);
        EXPECT_TRUE(rho.is_hermitian());
        EXPECT_GE(rho.eigenvalues_2x2().first, -1e-10);
    }
}

TEST(MeanDensity, Examples) {
    const std::vector<PureStateRealization> one{PureStateRealization{1.0, 0.0}};
    const auto r1 = rcps::mean_density(one);
    EXPECT_EQ(r1(0, 0), ComplexAmplitude(1.0, 0.0));
    EXPECT_EQ(r1(1, 1), ComplexAmplitude(0.0, 0.0));

    const std::vector<PureStateRealization> mix{PureStateRealization{1.0, 0.0}, PureStateRealization{0.0, 1.0}};
    const auto r2 = rcps::mean_density(mix);
    EXPECT_EQ(r2(0, 0), ComplexAmplitude(0.5, 0.0));
    EXPECT_EQ(r2(1, 1), ComplexAmplitude(0.5, 0.0));
    EXPECT_EQ(r2(0, 1), ComplexAmplitude(0.0, 0.0));

    EXPECT_THROW(rcps::mean_density(std::vector<PureStateRealization>{}), std::invalid_argument);
}

// rho_00 = E{P0} = E{r^2} = 1/3; sd of r^2 is sqrt(4/45).
TEST(MeanDensity, SampledInputMatchesLaw) {
    const QubitInputDistribution dist(0.0, 1.0, pi / 4);
    auto rng = rcps::RandomStream::keyed(17, {});
    std::vector<PureStateRealization> states;
    constexpr int n = 100000;
    states.reserve(n);
    for (int i = 0; i < n; ++i) states.push_back(rcps::sample_input_realization(dist, rng).state);
    const auto rho = rcps::mean_density(states);
    EXPECT_NEAR(rho(0, 0).real(), 1.0 / 3.0, 3.0 * std::sqrt(4.0 / 45.0 / n));
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_EQ(rho(0, 1), std::conj(rho(1, 0)));
    EXPECT_EQ(rho(0, 0).imag(), 0.0);
    EXPECT_GE(rho.eigenvalues_2x2().first, -1e-10);
}
