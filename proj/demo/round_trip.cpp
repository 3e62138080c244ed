// Simulates one multiple-preparation run with the reference test settings and
// prints every sign-branch candidate recovered from the two moment estimates.

#include <cstdio>
#include <numbers>

#include "rcps/rcps.hpp"

int main() {
    constexpr double pi = std::numbers::pi;
    const rcps::UnitaryParams truth(pi / 10, 2 * pi / 10, 3 * pi / 10, 4 * pi / 10);
    const rcps::QubitInputDistribution dist(0.0, 1.0, pi / 4);

    const auto stream = rcps::RandomStream::keyed(2024, {0});
    const auto record = rcps::run_multiple_preparation(dist, truth, 10000, 10000, stream);
    const auto m = rcps::estimate_moments(record);
    std::printf("m1_hat = %.6f  m2_hat = %.6f  (K = %zu, N = %llu)\n", m.m1_hat, m.m2_hat, m.k_used,
                static_cast<unsigned long long>(m.n_used));

    const auto set = rcps::blind_estimate(m.m1_hat, m.m2_hat, dist);
    std::printf("truth: phi3 = %.6f  phi4 = %.6f\n", truth.phi3, truth.phi4);
    for (const auto& c : set.candidates) {
        std::printf("  eps=(%+d,%+d,%+d)  phi3 = %+.6f  phi4 = %+.6f  residual = %.2e\n",
                    static_cast<int>(c.signs.eps1), static_cast<int>(c.signs.eps2),
                    static_cast<int>(c.signs.eps3), c.phi3_hat, c.phi4_hat, c.residual);
    }
    for (const auto& f : set.failures) {
        std::printf("  eps=(%+d,%+d,%+d)  failed: %s\n", static_cast<int>(f.signs.eps1),
                    static_cast<int>(f.signs.eps2), static_cast<int>(f.signs.eps3), f.reason.c_str());
    }

    const auto baseline = rcps::baseline_identifiability_report(m.m1_hat, dist);
    std::printf("Tr(rho A) = %.6f", baseline.trace_value);
    if (baseline.witness) {
        const auto& [a, b] = *baseline.witness;
        std::printf("  is also produced by (%.4f, %.4f) and (%.4f, %.4f)\n", a.phi3, a.phi4, b.phi3, b.phi4);
    } else {
        std::printf("  (%s)\n", baseline.reason.c_str());
    }
}
