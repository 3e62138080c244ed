// analytic_moments.hpp
// Closed-form moments of the uniform input law and the forward model
// (phi3, phi4) -> (E{P0}, E{P0^2}).

#pragma once

#include <cmath>
#include <stdexcept>

#include "rcps/state.hpp"

namespace rcps {

// Input-law moments consumed by the moment-matching equations.
struct InputMomentSet {
    double m_r2 = 0.0;   // E{r^2}
    double m_r4 = 0.0;   // E{r^4}
    double m_rs = 0.0;   // E{r sqrt(1 - r^2)}
    double m_r3s = 0.0;  // E{r^3 sqrt(1 - r^2)}
    double m_c1 = 0.0;   // E{cos phi}
    double m_c2 = 0.0;   // E{cos 2 phi}
};

// E{P0^2} = c2 cos^2(phi3) + c1 cos(phi3) + c0, once phi4 has been
// eliminated through E{P0}.
struct QuadraticCoefficients {
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;

    [[nodiscard]] double evaluate(double cos_phi3) const noexcept {
        return (c2 * cos_phi3 + c1) * cos_phi3 + c0;
    }
};

inline InputMomentSet input_moments(const QubitInputDistribution& dist) {
    const double a = dist.r_min();
    const double b = dist.r_max();
    const double w = b - a;
    const double pm = dist.phi_bound();

    const double a2 = a * a;
    const double b2 = b * b;
    const double qa = 1.0 - a2;
    const double qb = 1.0 - b2;
    const double qa32 = qa * std::sqrt(qa);
    const double qb32 = qb * std::sqrt(qb);
    const double qa52 = qa * qa32;
    const double qb52 = qb * qb32;

    InputMomentSet m;
    m.m_r2 = (a2 + a * b + b2) / 3.0;
    m.m_r4 = (a2 * a2 + a2 * a * b + a2 * b2 + a * b2 * b + b2 * b2) / 5.0;
    m.m_rs = -(qb32 - qa32) / (3.0 * w);
    m.m_r3s = (-(qb32 - qa32) / 3.0 + (qb52 - qa52) / 5.0) / w;
    m.m_c1 = std::sin(pm) / pm;
    m.m_c2 = std::sin(2.0 * pm) / (2.0 * pm);
    return m;
}

// E{P0} = cos(phi3) E{r^2} + (1 - cos phi3)/2 - cos(phi4) sin(phi3) E{cos phi} E{r sqrt(1-r^2)}
inline double expected_p0(double phi3, double phi4, const InputMomentSet& mom) noexcept {
    const double c3 = std::cos(phi3);
    return c3 * mom.m_r2 + 0.5 * (1.0 - c3) -
           std::cos(phi4) * std::sin(phi3) * mom.m_c1 * mom.m_rs;
}

// mean_p0 stands for E{P0}: the analytic value for forward evaluation, or
// the estimate m1_hat when solving.
inline QuadraticCoefficients quadratic_coefficients(const InputMomentSet& mom, double mean_p0) {
    if (std::abs(mom.m_rs) < 1e-14 || std::abs(mom.m_c1) < 1e-14) {
        throw std::domain_error("degenerate input distribution for moment matching");
    }
    const double spread = mom.m_r2 - mom.m_r4;  // E{r^2} - E{r^4}
    const double u = mom.m_r2 - 0.5;
    const double den = mom.m_c1 * mom.m_rs;

    QuadraticCoefficients q;
    q.e1 = 0.5 - mom.m_r3s / mom.m_rs;
    q.e2 = mom.m_c2 * spread / (den * den);
    q.c2 = 0.25 + 0.5 * spread * (mom.m_c2 - 3.0) + 2.0 * q.e1 * u + q.e2 * u * u;
    q.c1 = (1.0 - 2.0 * mean_p0) * (q.e1 + q.e2 * u);
    q.c0 = mean_p0 - 0.25 + q.e2 * (mean_p0 - 0.5) * (mean_p0 - 0.5) +
           0.5 * (1.0 - mom.m_c2) * spread;
    return q;
}

inline double expected_p0_squared(double phi3, double phi4, const InputMomentSet& mom) {
    const auto q = quadratic_coefficients(mom, expected_p0(phi3, phi4, mom));
    return q.evaluate(std::cos(phi3));
}

}  // namespace rcps
