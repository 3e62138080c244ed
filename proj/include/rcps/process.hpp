// process.hpp
// General single-qubit unitary parameterized by four angles, its action on
// states, and the closed-form probability of outcome |0>.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rcps/state.hpp"

namespace rcps {

// phi1: global phase. phi2: phase not seen by computational-basis
// measurements. phi3, phi4: the identifiable angles, each in [-pi, pi].
struct UnitaryParams {
    double phi1 = 0.0;
    double phi2 = 0.0;
    double phi3 = 0.0;
    double phi4 = 0.0;

    UnitaryParams() = default;
    UnitaryParams(double p1, double p2, double p3, double p4)
        : phi1(p1), phi2(p2), phi3(p3), phi4(p4) {
        constexpr double pi = std::numbers::pi;
        if (!std::isfinite(p1) || !std::isfinite(p2)) {
            throw std::invalid_argument("phi1 and phi2 must be finite");
        }
        if (!(p3 >= -pi && p3 <= pi) || !(p4 >= -pi && p4 <= pi)) {
            throw std::invalid_argument("phi3 and phi4 must lie in [-pi, pi]");
        }
    }

    friend bool operator==(const UnitaryParams&, const UnitaryParams&) = default;
};

// 2x2 unitary, row-major: {m00, m01, m10, m11}.
class ProcessMatrix {
public:
    explicit ProcessMatrix(std::array<ComplexAmplitude, 4> entries) : m_(entries) {}

    [[nodiscard]] const ComplexAmplitude& operator()(std::size_t row, std::size_t col) const {
        return m_[row * 2 + col];
    }

    // max |(M M^dagger - I)_{kl}|
    [[nodiscard]] double unitarity_defect() const noexcept {
        double worst = 0.0;
        for (std::size_t k = 0; k < 2; ++k) {
            for (std::size_t l = 0; l < 2; ++l) {
                ComplexAmplitude s = m_[k * 2] * std::conj(m_[l * 2]) +
                                     m_[k * 2 + 1] * std::conj(m_[l * 2 + 1]);
                if (k == l) s -= 1.0;
                worst = std::max(worst, std::abs(s));
            }
        }
        return worst;
    }

private:
    std::array<ComplexAmplitude, 4> m_;
};

inline ProcessMatrix build_unitary(const UnitaryParams& p) {
    const ComplexAmplitude global = std::polar(1.0, p.phi1);
    const double c = std::cos(0.5 * p.phi3);
    const double s = std::sin(0.5 * p.phi3);
    const double a = 0.5 * p.phi2;
    const double b = 0.5 * p.phi4;
    return ProcessMatrix({
        global * std::polar(c, -a - b),
        -global * std::polar(s, -a + b),
        global * std::polar(s, a - b),
        global * std::polar(c, a + b),
    });
}

inline PureStateRealization apply_process(const ProcessMatrix& m,
                                          const PureStateRealization& input) {
    if (input.dim() != 2) {
        throw std::invalid_argument("process acts on a single qubit (dimension 2), got dimension " +
                                    std::to_string(input.dim()));
    }
    const auto c = input.amplitudes();
    return PureStateRealization{m(0, 0) * c[0] + m(0, 1) * c[1],
                                m(1, 0) * c[0] + m(1, 1) * c[1]};
}

// P0 for the input [r, sqrt(1-r^2) e^{i phi}] after the unitary:
//   cos(phi3) r^2 + (1 - cos phi3)/2 - cos(phi4 + phi) sin(phi3) r sqrt(1 - r^2).
// Independent of phi1 and phi2. P1 = 1 - P0.
inline double p0_closed_form(double phi3, double phi4, double r, double phi) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("modulus r must lie in [0, 1]");
    const double c3 = std::cos(phi3);
    const double p0 = c3 * r * r + 0.5 * (1.0 - c3) -
                      std::cos(phi4 + phi) * std::sin(phi3) * r * std::sqrt(1.0 - r * r);
    if (p0 < -1e-9 || p0 > 1.0 + 1e-9) throw std::domain_error("formula inconsistency");
    return std::clamp(p0, 0.0, 1.0);
}

}  // namespace rcps
