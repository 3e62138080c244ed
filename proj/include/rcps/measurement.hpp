// measurement.hpp
// Two-level multiple-preparation procedure: K drawn state realizations, N
// measured copies of each, data kept segmented per realization.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rcps/process.hpp"
#include "rcps/random_stream.hpp"
#include "rcps/state.hpp"

namespace rcps {

enum class BiasCorrection : bool { off = false, on = true };

struct Segment {
    std::uint64_t n_shots = 0;
    std::uint64_t count0 = 0;
};

// Ground truth behind one segment. Diagnostics only; never an estimator input.
struct SegmentTruth {
    double r = 0.0;
    double phi = 0.0;
    double p0 = 0.0;
};

class SegmentedRecord {
public:
    SegmentedRecord(std::vector<Segment> segments,
                    std::optional<std::vector<SegmentTruth>> truth = std::nullopt)
        : segments_(std::move(segments)), truth_(std::move(truth)) {
        if (segments_.empty()) throw std::invalid_argument("record needs at least one segment");
        const auto n = segments_.front().n_shots;
        if (n < 1) throw std::invalid_argument("segments need at least one shot");
        for (const auto& s : segments_) {
            if (s.n_shots != n) throw std::invalid_argument("segments must share one shot count");
            if (s.count0 > s.n_shots) throw std::invalid_argument("count0 exceeds n_shots");
        }
        if (truth_ && truth_->size() != segments_.size()) {
            throw std::invalid_argument("truth table size differs from segment count");
        }
    }

    [[nodiscard]] std::span<const Segment> segments() const noexcept { return segments_; }
    [[nodiscard]] std::size_t k() const noexcept { return segments_.size(); }
    [[nodiscard]] std::uint64_t n_shots() const noexcept { return segments_.front().n_shots; }
    [[nodiscard]] const std::optional<std::vector<SegmentTruth>>& diagnostics() const noexcept {
        return truth_;
    }

    friend bool operator==(const SegmentedRecord& a, const SegmentedRecord& b) {
        if (a.segments_.size() != b.segments_.size()) return false;
        for (std::size_t j = 0; j < a.segments_.size(); ++j) {
            if (a.segments_[j].n_shots != b.segments_[j].n_shots ||
                a.segments_[j].count0 != b.segments_[j].count0) {
                return false;
            }
        }
        return true;
    }

private:
    std::vector<Segment> segments_;
    std::optional<std::vector<SegmentTruth>> truth_;
};

// n_used == 0 marks moments computed from exact probabilities (N = infinity).
struct MomentEstimates {
    double m1_hat = 0.0;
    double m2_hat = 0.0;
    std::size_t k_used = 0;
    std::uint64_t n_used = 0;
};

// Number of outcome-0 results among n_shots measurements, ~ Binomial(n_shots, p0).
inline std::uint64_t simulate_segment(double p0, std::uint64_t n_shots, RandomStream& rng) {
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("p0 must lie in [0, 1]");
    if (n_shots < 1) throw std::invalid_argument("n_shots must be at least 1");
    if (p0 == 0.0) return 0;
    if (p0 == 1.0) return n_shots;
    if (n_shots <= 64) {
        std::uint64_t count = 0;
        for (std::uint64_t i = 0; i < n_shots; ++i) count += rng.uniform01() < p0 ? 1 : 0;
        return count;
    }
    std::binomial_distribution<std::uint64_t> binom(n_shots, p0);
    return binom(rng);
}

inline double estimate_segment_probability(std::uint64_t count0, std::uint64_t n_shots) {
    if (n_shots < 1 || count0 > n_shots) {
        throw std::invalid_argument("need 0 <= count0 <= n_shots and n_shots >= 1");
    }
    return static_cast<double>(count0) / static_cast<double>(n_shots);
}

// Segment j consumes only rng.substream(j): it draws (r, phi) then its shots.
inline SegmentedRecord run_multiple_preparation(const QubitInputDistribution& dist,
                                                const UnitaryParams& params, std::size_t k,
                                                std::uint64_t n, const RandomStream& rng,
                                                bool keep_truth = false) {
    if (k < 1 || n < 1) throw std::invalid_argument("K and N must be at least 1");
    std::vector<Segment> segments;
    segments.reserve(k);
    std::vector<SegmentTruth> truth;
    if (keep_truth) truth.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        RandomStream seg_rng = rng.substream(j);
        const auto [r, phi] = sample_input_parameters(dist, seg_rng);
        const double p0 = p0_closed_form(params.phi3, params.phi4, r, phi);
        segments.push_back({n, simulate_segment(p0, n, seg_rng)});
        if (keep_truth) truth.push_back({r, phi, p0});
    }
    if (keep_truth) return SegmentedRecord(std::move(segments), std::move(truth));
    return SegmentedRecord(std::move(segments));
}

inline std::vector<double> segment_estimates(const SegmentedRecord& record) {
    std::vector<double> p;
    p.reserve(record.k());
    for (const auto& s : record.segments()) {
        p.push_back(estimate_segment_probability(s.count0, s.n_shots));
    }
    return p;
}

// Moments from per-segment probability estimates obtained with n_shots
// measurements each (n_shots == 0: the values are exact probabilities).
// With correction, p^2 is replaced by its unbiased binomial estimate
// p^2 - p(1-p)/(N-1) = count0 (count0 - 1) / (N (N - 1)).
inline MomentEstimates moments_from_probabilities(std::span<const double> p_hat,
                                                  std::uint64_t n_shots,
                                                  BiasCorrection bias = BiasCorrection::off) {
    if (p_hat.empty()) throw std::invalid_argument("no segments");
    const bool correct = bias == BiasCorrection::on && n_shots != 0;
    if (correct && n_shots < 2) throw std::invalid_argument("bias correction needs N >= 2");
    const double nm1 = static_cast<double>(n_shots) - 1.0;
    double s1 = 0.0;
    double s2 = 0.0;
    for (double p : p_hat) {
        s1 += p;
        s2 += correct ? p * p - p * (1.0 - p) / nm1 : p * p;
    }
    const double inv = 1.0 / static_cast<double>(p_hat.size());
    return {s1 * inv, s2 * inv, p_hat.size(), n_shots};
}

inline MomentEstimates estimate_moments(const SegmentedRecord& record,
                                        BiasCorrection bias = BiasCorrection::off) {
    if (bias == BiasCorrection::on && record.n_shots() < 2) {
        throw std::invalid_argument("bias correction needs N >= 2");
    }
    const auto p = segment_estimates(record);
    return moments_from_probabilities(p, record.n_shots(), bias);
}

// Mean over segments of g(p_hat_j).
inline double generalized_moment(const SegmentedRecord& record,
                                 const std::function<double(double)>& g) {
    double acc = 0.0;
    for (const auto& s : record.segments()) acc += g(estimate_segment_probability(s.count0, s.n_shots));
    return acc / static_cast<double>(record.k());
}

struct ExponentTerm {
    std::size_t index;
    unsigned power;
};

// Mean over segments of prod_k p_hat_{k,j}^{m_k}. Empty exponent list gives 1.
inline double joint_moment(std::span<const OutcomeProbabilities> prob_estimates,
                           std::span<const ExponentTerm> exponents) {
    if (prob_estimates.empty()) throw std::invalid_argument("no segments");
    for (std::size_t a = 0; a < exponents.size(); ++a) {
        for (std::size_t b = a + 1; b < exponents.size(); ++b) {
            if (exponents[a].index == exponents[b].index) {
                throw std::invalid_argument("exponent indices must be distinct");
            }
        }
    }
    double acc = 0.0;
    for (const auto& probs : prob_estimates) {
        double term = 1.0;
        for (const auto& e : exponents) {
            if (e.index >= probs.dim()) throw std::invalid_argument("exponent index out of range");
            for (unsigned i = 0; i < e.power; ++i) term *= probs.p[e.index];
        }
        acc += term;
    }
    return acc / static_cast<double>(prob_estimates.size());
}

// CSV export: segment_index,n_shots,count0,p_hat with 17 significant digits.
inline void write_record_csv(std::ostream& os, const SegmentedRecord& record) {
    const auto old_flags = os.flags();
    const auto old_precision = os.precision();
    os << "segment_index,n_shots,count0,p_hat\n" << std::setprecision(17);
    std::size_t j = 0;
    for (const auto& s : record.segments()) {
        os << j++ << ',' << s.n_shots << ',' << s.count0 << ','
           << estimate_segment_probability(s.count0, s.n_shots) << '\n';
    }
    os.flags(old_flags);
    os.precision(old_precision);
}

}  // namespace rcps
