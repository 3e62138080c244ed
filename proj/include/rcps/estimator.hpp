// estimator.hpp
// Moment-matching recovery of (phi3, phi4), plus the density-operator
// baseline Tr(rho A) that cannot identify them.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "rcps/analytic_moments.hpp"
#include "rcps/state.hpp"

namespace rcps {

// Arguments of arccos that overshoot [-1, 1] by less than this are clamped.
inline constexpr double kArccosTolerance = 1e-9;

enum class Sign : int { minus = -1, plus = 1 };

constexpr double sign_value(Sign s) noexcept { return static_cast<double>(static_cast<int>(s)); }

// eps1: root of the quadratic in cos(phi3); eps2: sign of phi3; eps3: sign of phi4.
struct SignChoice {
    Sign eps1 = Sign::plus;
    Sign eps2 = Sign::plus;
    Sign eps3 = Sign::plus;

    friend auto operator<=>(const SignChoice&, const SignChoice&) = default;
};

// All eight sign tuples in a fixed order.
inline std::array<SignChoice, 8> all_sign_choices() noexcept {
    std::array<SignChoice, 8> out{};
    std::size_t i = 0;
    for (Sign s1 : {Sign::minus, Sign::plus})
        for (Sign s2 : {Sign::minus, Sign::plus})
            for (Sign s3 : {Sign::minus, Sign::plus}) out[i++] = {s1, s2, s3};
    return out;
}

struct EstimateCandidate {
    double phi3_hat = 0.0;
    double phi4_hat = 0.0;
    SignChoice signs;
    double residual = 0.0;
};

struct BranchFailure {
    SignChoice signs;
    std::string reason;
};

struct EstimateSet {
    std::vector<EstimateCandidate> candidates;  // sorted by (residual, signs)
    std::vector<BranchFailure> failures;
};

namespace detail {

inline double checked_arccos(double arg) {
    if (arg < -1.0 - kArccosTolerance || arg > 1.0 + kArccosTolerance) {
        throw std::domain_error("argument out of range");
    }
    return std::acos(std::clamp(arg, -1.0, 1.0));
}

}  // namespace detail

// phi3 = eps2 * arccos((-c1 + eps1 sqrt(c1^2 - 4 c2 (c0 - m2))) / (2 c2)).
inline double solve_phi3(const QuadraticCoefficients& q, double m2_hat, Sign eps1, Sign eps2) {
    if (!std::isfinite(q.c2) || !std::isfinite(q.c1) || !std::isfinite(q.c0)) {
        throw std::invalid_argument("non-finite quadratic coefficients");
    }
    double cos_phi3 = 0.0;
    if (std::abs(q.c2) < 1e-12) {
        if (std::abs(q.c1) < 1e-12) {
            throw std::domain_error("degenerate quadratic: no dependence on cos(phi3)");
        }
        cos_phi3 = (m2_hat - q.c0) / q.c1;
    } else {
        double disc = q.c1 * q.c1 - 4.0 * q.c2 * (q.c0 - m2_hat);
        if (disc < -kArccosTolerance) {
            throw std::domain_error("no real root: moment estimates inconsistent with model");
        }
        disc = std::max(disc, 0.0);
        cos_phi3 = (-q.c1 + sign_value(eps1) * std::sqrt(disc)) / (2.0 * q.c2);
    }
    return sign_value(eps2) * detail::checked_arccos(cos_phi3);
}

// phi4 = eps3 * arccos((-m1 + cos(phi3) E{r^2} + (1 - cos phi3)/2) /
//                      (sin(phi3) E{cos phi} E{r sqrt(1-r^2)})).
inline double solve_phi4(double phi3, double m1_hat, const InputMomentSet& mom, Sign eps3) {
    const double s3 = std::sin(phi3);
    if (std::abs(s3) < 1e-9) throw std::domain_error("phi4 unidentifiable at phi3 in {0, +-pi}");
    const double c3 = std::cos(phi3);
    const double den = s3 * mom.m_c1 * mom.m_rs;
    if (den == 0.0) throw std::domain_error("degenerate input distribution for moment matching");
    const double arg = (-m1_hat + c3 * mom.m_r2 + 0.5 * (1.0 - c3)) / den;
    return sign_value(eps3) * detail::checked_arccos(arg);
}

// Enumerates every sign branch against the given input moments. Branches
// whose solves fail are reported in `failures` rather than thrown.
inline EstimateSet estimate_from_moments(double m1_hat, double m2_hat, const InputMomentSet& mom) {
    EstimateSet out;
    QuadraticCoefficients q;
    try {
        q = quadratic_coefficients(mom, m1_hat);
    } catch (const std::exception& e) {
        for (const auto& s : all_sign_choices()) out.failures.push_back({s, e.what()});
        return out;
    }
    for (const auto& s : all_sign_choices()) {
        try {
            const double phi3 = solve_phi3(q, m2_hat, s.eps1, s.eps2);
            const double phi4 = solve_phi4(phi3, m1_hat, mom, s.eps3);
            const double residual = std::abs(q.evaluate(std::cos(phi3)) - m2_hat);
            out.candidates.push_back({phi3, phi4, s, residual});
        } catch (const std::exception& e) {
            out.failures.push_back({s, e.what()});
        }
    }
    std::sort(out.candidates.begin(), out.candidates.end(), [](const auto& a, const auto& b) {
        return std::tie(a.residual, a.signs) < std::tie(b.residual, b.signs);
    });
    return out;
}

// Blind: only the law of the input is known.
inline EstimateSet blind_estimate(double m1_hat, double m2_hat, const QubitInputDistribution& dist) {
    if (!(m1_hat >= 0.0 && m1_hat <= 1.0 && m2_hat >= 0.0 && m2_hat <= 1.0)) {
        throw std::invalid_argument("moment estimates must lie in [0, 1]");
    }
    return estimate_from_moments(m1_hat, m2_hat, input_moments(dist));
}

struct InputSample {
    double r;
    double phi;
};

// Sample moments of measured input realizations, replacing the analytic set.
inline InputMomentSet sample_input_moments(std::span<const InputSample> samples) {
    if (samples.size() < 2) throw std::invalid_argument("non-blind estimation needs at least 2 input samples");
    InputMomentSet m;
    for (const auto& s : samples) {
        const double r2 = s.r * s.r;
        const double rs = s.r * std::sqrt(std::max(0.0, 1.0 - r2));
        m.m_r2 += r2;
        m.m_r4 += r2 * r2;
        m.m_rs += rs;
        m.m_r3s += r2 * rs;
        m.m_c1 += std::cos(s.phi);
        m.m_c2 += std::cos(2.0 * s.phi);
    }
    const double inv = 1.0 / static_cast<double>(samples.size());
    m.m_r2 *= inv;
    m.m_r4 *= inv;
    m.m_rs *= inv;
    m.m_r3s *= inv;
    m.m_c1 *= inv;
    m.m_c2 *= inv;
    return m;
}

inline EstimateSet nonblind_estimate(std::span<const InputSample> samples, double m1_hat,
                                     double m2_hat) {
    const auto mom = sample_input_moments(samples);
    if (std::abs(mom.m_rs) < 1e-14 || std::abs(mom.m_c1) < 1e-14) {
        throw std::domain_error("degenerate input distribution for moment matching");
    }
    return estimate_from_moments(m1_hat, m2_hat, mom);
}

// Hermitian observable in the computational basis, row-major.
class ObservableMatrix {
public:
    ObservableMatrix(std::size_t dim, std::vector<ComplexAmplitude> entries)
        : dim_(dim), entries_(std::move(entries)) {
        if (entries_.size() != dim_ * dim_) throw std::invalid_argument("observable is not square");
        for (std::size_t k = 0; k < dim_; ++k) {
            for (std::size_t l = k; l < dim_; ++l) {
                if (std::abs((*this)(k, l) - std::conj((*this)(l, k))) > kNormTolerance) {
                    throw std::invalid_argument("observable is not Hermitian");
                }
            }
        }
    }

    static ObservableMatrix diagonal(std::span<const double> eigenvalues) {
        const std::size_t d = eigenvalues.size();
        std::vector<ComplexAmplitude> e(d * d, ComplexAmplitude{0.0, 0.0});
        for (std::size_t k = 0; k < d; ++k) e[k * d + k] = eigenvalues[k];
        return ObservableMatrix(d, std::move(e));
    }

    // diag(1/2, -1/2): the observable whose mean is E{P0} - 1/2.
    static ObservableMatrix half_z() {
        const std::array<double, 2> ev{0.5, -0.5};
        return diagonal(ev);
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] const ComplexAmplitude& operator()(std::size_t k, std::size_t l) const {
        return entries_[k * dim_ + l];
    }

private:
    std::size_t dim_;
    std::vector<ComplexAmplitude> entries_;
};

// Re Tr(rho A); the imaginary part must vanish.
inline double mean_observable(const DensityMatrix& rho, const ObservableMatrix& a) {
    if (rho.dim() != a.dim()) throw std::invalid_argument("dimension mismatch");
    ComplexAmplitude tr{0.0, 0.0};
    for (std::size_t k = 0; k < rho.dim(); ++k) {
        for (std::size_t l = 0; l < rho.dim(); ++l) tr += rho(k, l) * a(l, k);
    }
    if (std::abs(tr.imag()) >= 1e-10) throw std::domain_error("non-Hermitian inputs");
    return tr.real();
}

struct EigenvalueImage {
    double eigenvalue;
    double g_value;
};

// E{g(A)} = sum_k g(a_k) E{P_k} for A diagonal in the computational basis.
inline double mean_function_of_observable(std::span<const EigenvalueImage> g_on_eigenvalues,
                                          std::span<const double> mean_probs) {
    if (g_on_eigenvalues.size() != mean_probs.size()) throw std::invalid_argument("length mismatch");
    double total = 0.0;
    for (double p : mean_probs) total += p;
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("mean probabilities must sum to 1");
    double acc = 0.0;
    for (std::size_t k = 0; k < mean_probs.size(); ++k) acc += g_on_eigenvalues[k].g_value * mean_probs[k];
    return acc;
}

struct AnglePair {
    double phi3 = 0.0;
    double phi4 = 0.0;
};

struct BaselineReport {
    double trace_value = 0.0;  // Tr(rho A) = m1_hat - 1/2
    std::optional<std::pair<AnglePair, AnglePair>> witness;
    std::string reason;  // set when no witness was found
};

namespace detail {

// Roots in phi3 of expected_p0(phi3, phi4) = level over [-pi, pi].
inline std::vector<double> level_set_roots(double phi4, double level, const InputMomentSet& mom) {
    constexpr int kGrid = 512;
    constexpr double pi = std::numbers::pi;
    auto f = [&](double phi3) { return expected_p0(phi3, phi4, mom) - level; };
    std::vector<double> roots;
    double x0 = -pi;
    double f0 = f(x0);
    for (int i = 1; i <= kGrid; ++i) {
        const double x1 = -pi + 2.0 * pi * i / kGrid;
        const double f1 = f(x1);
        if (f0 == 0.0) {
            roots.push_back(x0);
        } else if (f0 * f1 < 0.0) {
            std::uintmax_t iters = 200;
            auto tol = boost::math::tools::eps_tolerance<double>(52);
            const auto [lo, hi] = boost::math::tools::toms748_solve(f, x0, x1, f0, f1, tol, iters);
            roots.push_back(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

}  // namespace detail

// Tr(rho A) from m1_hat, plus two distinct (phi3, phi4) pairs sharing the
// same E{P0} (hence the same Tr(rho A)): one equation cannot fix two unknowns.
inline BaselineReport baseline_identifiability_report(double m1_hat, const QubitInputDistribution& dist) {
    constexpr double pi = std::numbers::pi;
    BaselineReport report;
    report.trace_value = m1_hat - 0.5;
    const auto mom = input_moments(dist);

    std::vector<AnglePair> points;
    for (double phi4 : {pi / 2, 0.0, pi / 4, 3 * pi / 4, -pi / 3, pi}) {
        for (double phi3 : detail::level_set_roots(phi4, m1_hat, mom)) {
            if (std::abs(expected_p0(phi3, phi4, mom) - m1_hat) > 1e-12) continue;
            for (const auto& p : points) {
                if (std::abs(p.phi3 - phi3) >= 1e-3) {
                    report.witness = std::make_pair(p, AnglePair{phi3, phi4});
                    return report;
                }
            }
            points.push_back({phi3, phi4});
        }
    }
    report.reason = "no witness found";
    return report;
}

struct ResidualSelection {};
struct OracleSelection {
    double phi3_truth;
    double phi4_truth;
};
using CandidateSelector = std::variant<ResidualSelection, OracleSelection>;

// Oracle mode scores candidates by max relative error to the truth (absolute
// error for a zero truth component).
inline EstimateCandidate select_candidate(std::span<const EstimateCandidate> candidates,
                                          const CandidateSelector& mode) {
    if (candidates.empty()) throw std::domain_error("estimation failed");
    if (std::holds_alternative<ResidualSelection>(mode)) {
        return *std::min_element(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
            return std::tie(a.residual, a.signs) < std::tie(b.residual, b.signs);
        });
    }
    const auto truth = std::get<OracleSelection>(mode);
    auto rel = [](double est, double t) { return std::abs(est - t) / (t == 0.0 ? 1.0 : std::abs(t)); };
    auto score = [&](const EstimateCandidate& c) {
        return std::max(rel(c.phi3_hat, truth.phi3_truth), rel(c.phi4_hat, truth.phi4_truth));
    };
    return *std::min_element(candidates.begin(), candidates.end(), [&](const auto& a, const auto& b) {
        return score(a) < score(b);
    });
}

}  // namespace rcps
