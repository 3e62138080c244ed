// state.hpp
// Random-coefficient pure states: single realizations, their outcome
// probabilities, and per-realization / mean density matrices.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rcps/random_stream.hpp"

namespace rcps {

using ComplexAmplitude = std::complex<double>;

// Normalization / Hermiticity / trace tolerance shared by the value types.
inline constexpr double kNormTolerance = 1e-12;

// One deterministic-coefficient ket |Psi(omega)>, amplitudes in
// computational-basis order k = 0..d-1.
class PureStateRealization {
public:
    explicit PureStateRealization(std::vector<ComplexAmplitude> amplitudes)
        : amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() < 2) {
            throw std::invalid_argument("state dimension must be at least 2");
        }
        double norm = 0.0;
        for (const auto& c : amplitudes_) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                throw std::invalid_argument("non-finite amplitude");
            }
            norm += std::norm(c);
        }
        if (std::abs(norm - 1.0) > kNormTolerance) {
            throw std::invalid_argument("state is not normalized (sum |c_k|^2 = " +
                                        std::to_string(norm) + ")");
        }
    }

    PureStateRealization(std::initializer_list<ComplexAmplitude> amplitudes)
        : PureStateRealization(std::vector<ComplexAmplitude>(amplitudes)) {}

    [[nodiscard]] std::size_t dim() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] std::span<const ComplexAmplitude> amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] const ComplexAmplitude& operator[](std::size_t k) const {
        return amplitudes_.at(k);
    }

private:
    std::vector<ComplexAmplitude> amplitudes_;
};

// Law of the process input: r ~ U[r_min, r_max], phi ~ U[-phi_bound, phi_bound],
// independent.
class QubitInputDistribution {
public:
    QubitInputDistribution(double r_min, double r_max, double phi_bound)
        : r_min_(r_min), r_max_(r_max), phi_bound_(phi_bound) {
        if (!(0.0 <= r_min && r_min < r_max && r_max <= 1.0)) {
            throw std::invalid_argument("modulus bounds must satisfy 0 <= r_min < r_max <= 1");
        }
        if (!(0.0 < phi_bound && phi_bound <= std::numbers::pi)) {
            throw std::invalid_argument("phase bound must satisfy 0 < phi_bound <= pi");
        }
    }

    [[nodiscard]] double r_min() const noexcept { return r_min_; }
    [[nodiscard]] double r_max() const noexcept { return r_max_; }
    [[nodiscard]] double phi_bound() const noexcept { return phi_bound_; }

    friend bool operator==(const QubitInputDistribution&, const QubitInputDistribution&) = default;

private:
    double r_min_;
    double r_max_;
    double phi_bound_;
};

struct OutcomeProbabilities {
    std::vector<double> p;

    [[nodiscard]] std::size_t dim() const noexcept { return p.size(); }
    [[nodiscard]] double operator[](std::size_t k) const { return p.at(k); }
};

// Square complex matrix, row-major.
class DensityMatrix {
public:
    explicit DensityMatrix(std::size_t dim)
        : dim_(dim), entries_(dim * dim, ComplexAmplitude{0.0, 0.0}) {}

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] ComplexAmplitude& operator()(std::size_t k, std::size_t l) {
        return entries_[k * dim_ + l];
    }
    [[nodiscard]] const ComplexAmplitude& operator()(std::size_t k, std::size_t l) const {
        return entries_[k * dim_ + l];
    }

    [[nodiscard]] ComplexAmplitude trace() const noexcept {
        ComplexAmplitude t{0.0, 0.0};
        for (std::size_t k = 0; k < dim_; ++k) t += entries_[k * dim_ + k];
        return t;
    }

    [[nodiscard]] bool is_hermitian(double tol = kNormTolerance) const noexcept {
        for (std::size_t k = 0; k < dim_; ++k) {
            for (std::size_t l = k; l < dim_; ++l) {
                if (std::abs((*this)(k, l) - std::conj((*this)(l, k))) > tol) return false;
            }
        }
        return true;
    }

    // Eigenvalues of a 2x2 Hermitian matrix, ascending.
    [[nodiscard]] std::pair<double, double> eigenvalues_2x2() const {
        if (dim_ != 2) throw std::invalid_argument("eigenvalues_2x2 needs a 2x2 matrix");
        const double a = (*this)(0, 0).real();
        const double d = (*this)(1, 1).real();
        const double b = std::abs((*this)(0, 1));
        const double mid = 0.5 * (a + d);
        const double rad = std::hypot(0.5 * (a - d), b);
        return {mid - rad, mid + rad};
    }

private:
    std::size_t dim_;
    std::vector<ComplexAmplitude> entries_;
};

// Draw of the single-qubit input RCPS together with its (r, phi) parameters.
struct InputRealization {
    double r;
    double phi;
    PureStateRealization state;
};

struct InputParameters {
    double r;
    double phi;
};

// Maps quantiles (u_r, u_phi) in [0,1] to (r, phi) under the distribution.
inline InputParameters input_parameters_from_quantiles(const QubitInputDistribution& dist,
                                                       double u_r, double u_phi) noexcept {
    return {dist.r_min() + (dist.r_max() - dist.r_min()) * u_r,
            dist.phi_bound() * (2.0 * u_phi - 1.0)};
}

// r is drawn before phi from the same stream.
inline InputParameters sample_input_parameters(const QubitInputDistribution& dist,
                                               RandomStream& rng) noexcept {
    const double u_r = rng.uniform01();
    const double u_phi = rng.uniform01();
    return input_parameters_from_quantiles(dist, u_r, u_phi);
}

// Deterministic part of the sampler: maps quantiles (u_r, u_phi) in [0,1] to
// r = r_min + (r_max - r_min) u_r, phi = -phi_bound + 2 phi_bound u_phi and
// the state [r, sqrt(1 - r^2) e^{i phi}].
inline InputRealization input_from_quantiles(const QubitInputDistribution& dist,
                                             double u_r, double u_phi) {
    const auto [r, phi] = input_parameters_from_quantiles(dist, u_r, u_phi);
    const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
    return {r, phi, PureStateRealization{ComplexAmplitude{r, 0.0}, std::polar(s, phi)}};
}

inline InputRealization sample_input_realization(const QubitInputDistribution& dist,
                                                 RandomStream& rng) {
    const double u_r = rng.uniform01();
    const double u_phi = rng.uniform01();
    return input_from_quantiles(dist, u_r, u_phi);
}

inline OutcomeProbabilities probabilities(const PureStateRealization& state) {
    OutcomeProbabilities out;
    out.p.reserve(state.dim());
    for (const auto& c : state.amplitudes()) {
        out.p.push_back(c.real() * c.real() + c.imag() * c.imag());
    }
    return out;
}

// rho(omega)_{kl} = c_k conj(c_l).
inline DensityMatrix realization_density(const PureStateRealization& state) {
    const auto c = state.amplitudes();
    DensityMatrix rho(state.dim());
    for (std::size_t k = 0; k < c.size(); ++k) {
        rho(k, k) = ComplexAmplitude{c[k].real() * c[k].real() + c[k].imag() * c[k].imag(), 0.0};
        for (std::size_t l = k + 1; l < c.size(); ++l) {
            rho(k, l) = c[k] * std::conj(c[l]);
            rho(l, k) = std::conj(rho(k, l));
        }
    }
    return rho;
}

// Entrywise mean of realization densities; the lower triangle is written as
// the conjugate of the upper one so the result is exactly Hermitian.
inline DensityMatrix mean_density(std::span<const PureStateRealization> states) {
    if (states.empty()) throw std::invalid_argument("no realizations");
    const std::size_t d = states.front().dim();
    DensityMatrix acc(d);
    for (const auto& s : states) {
        if (s.dim() != d) throw std::invalid_argument("realizations differ in dimension");
        const auto c = s.amplitudes();
        for (std::size_t k = 0; k < d; ++k) {
            acc(k, k) += c[k].real() * c[k].real() + c[k].imag() * c[k].imag();
            for (std::size_t l = k + 1; l < d; ++l) acc(k, l) += c[k] * std::conj(c[l]);
        }
    }
    const double inv = 1.0 / static_cast<double>(states.size());
    for (std::size_t k = 0; k < d; ++k) {
        acc(k, k) = ComplexAmplitude{acc(k, k).real() * inv, 0.0};
        for (std::size_t l = k + 1; l < d; ++l) {
            acc(k, l) *= inv;
            acc(l, k) = std::conj(acc(k, l));
        }
    }
    return acc;
}

}  // namespace rcps
