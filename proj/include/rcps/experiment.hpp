// experiment.hpp
// Repeated-trial harness: simulate, estimate, and score (phi3, phi4) by NRMSE
// over a grid of (K, N) cells.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rcps/analytic_moments.hpp"
#include "rcps/estimator.hpp"
#include "rcps/measurement.hpp"
#include "rcps/process.hpp"
#include "rcps/random_stream.hpp"
#include "rcps/state.hpp"

namespace rcps {

enum class SelectionMode { residual, oracle };

// Defaults reproduce the reference test configuration: phi_k = k pi / 10,
// r ~ U[0, 1], phi ~ U[-pi/4, pi/4], 100 trials per cell.
struct ExperimentConfig {
    UnitaryParams truth{std::numbers::pi / 10, 2 * std::numbers::pi / 10,
                        3 * std::numbers::pi / 10, 4 * std::numbers::pi / 10};
    QubitInputDistribution dist{0.0, 1.0, std::numbers::pi / 4};
    std::vector<std::size_t> k_values{1000};
    std::vector<std::uint64_t> n_values{10000};
    std::size_t trials = 100;
    std::uint64_t master_seed = 1;
    SelectionMode selection = SelectionMode::oracle;
    BiasCorrection bias_correct = BiasCorrection::off;
    // N = infinity: segments carry P0 itself, isolating the K-sampling error.
    bool exact_probabilities = false;
    // Skip sampling altogether and feed the analytic (E{P0}, E{P0^2}).
    bool analytic_moments = false;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const {
        if (trials < 1) throw std::invalid_argument("trials must be at least 1");
        if (k_values.empty() || n_values.empty()) throw std::invalid_argument("K and N lists must be non-empty");
        for (auto k : k_values) {
            if (k < 1) throw std::invalid_argument("every K must be at least 1");
        }
        for (auto n : n_values) {
            if (n < 1) throw std::invalid_argument("every N must be at least 1");
        }
    }
};

// Sentinel N of exact-probability cells.
inline constexpr std::uint64_t kInfiniteShots = 0;

struct TrialResult {
    std::size_t k = 0;
    std::uint64_t n = 0;  // kInfiniteShots for exact-probability trials
    std::size_t trial_index = 0;
    std::optional<EstimateCandidate> estimate;  // absent when failed
    std::string failure;

    [[nodiscard]] bool failed() const noexcept { return !estimate.has_value(); }
};

// Segmented data of one sampled trial (finite N), truth retained.
inline SegmentedRecord trial_record(const ExperimentConfig& cfg, std::size_t k, std::uint64_t n,
                                    std::size_t trial_index) {
    if (n == kInfiniteShots) throw std::invalid_argument("no segmented record at N = infinity");
    const RandomStream stream = RandomStream::keyed(cfg.master_seed, {k, n, trial_index});
    return run_multiple_preparation(cfg.dist, cfg.truth, k, n, stream, true);
}

inline MomentEstimates trial_moments(const ExperimentConfig& cfg, std::size_t k, std::uint64_t n,
                                     std::size_t trial_index) {
    const auto& t = cfg.truth;
    if (cfg.analytic_moments) {
        const auto mom = input_moments(cfg.dist);
        return {expected_p0(t.phi3, t.phi4, mom), expected_p0_squared(t.phi3, t.phi4, mom), k, n};
    }
    const RandomStream stream = RandomStream::keyed(cfg.master_seed, {k, n, trial_index});
    if (cfg.exact_probabilities || n == kInfiniteShots) {
        std::vector<double> p0(k);
        for (std::size_t j = 0; j < k; ++j) {
            RandomStream seg = stream.substream(j);
            const auto [r, phi] = sample_input_parameters(cfg.dist, seg);
            p0[j] = p0_closed_form(t.phi3, t.phi4, r, phi);
        }
        return moments_from_probabilities(p0, kInfiniteShots);
    }
    const auto record = run_multiple_preparation(cfg.dist, t, k, n, stream);
    return estimate_moments(record, cfg.bias_correct);
}

// Full pipeline for one trial, keyed by (master_seed, K, N, trial_index).
// Estimation failures are recorded, not thrown.
inline TrialResult run_trial(const ExperimentConfig& cfg, std::size_t k, std::uint64_t n,
                             std::size_t trial_index) {
    if (cfg.exact_probabilities) n = kInfiniteShots;
    TrialResult result{k, n, trial_index, std::nullopt, {}};
    try {
        const auto m = trial_moments(cfg, k, n, trial_index);
        const auto set = blind_estimate(m.m1_hat, m.m2_hat, cfg.dist);
        if (set.candidates.empty()) {
            result.failure = set.failures.empty() ? "estimation failed" : set.failures.front().reason;
            return result;
        }
        const CandidateSelector selector =
            cfg.selection == SelectionMode::oracle
                ? CandidateSelector{OracleSelection{cfg.truth.phi3, cfg.truth.phi4}}
                : CandidateSelector{ResidualSelection{}};
        result.estimate = select_candidate(set.candidates, selector);
    } catch (const std::exception& e) {
        result.failure = e.what();
    }
    return result;
}

// sqrt(mean((est - truth)^2)) / |truth|, accumulated in list order.
inline double nrmse(std::span<const double> estimates, double truth) {
    if (estimates.empty()) throw std::invalid_argument("NRMSE of an empty estimate list");
    if (truth == 0.0) throw std::domain_error("NRMSE undefined at zero truth");
    double ss = 0.0;
    for (double e : estimates) ss += (e - truth) * (e - truth);
    return std::sqrt(ss / static_cast<double>(estimates.size())) / std::abs(truth);
}

struct CellReport {
    std::size_t k = 0;
    std::uint64_t n = 0;  // kInfiniteShots in exact-probability mode
    double nrmse_phi3 = std::numeric_limits<double>::quiet_NaN();
    double nrmse_phi4 = std::numeric_limits<double>::quiet_NaN();
    std::size_t n_failed = 0;
    std::size_t trials = 0;
    std::size_t n_near_endpoint = 0;  // successes with phi3_hat within 1e-2 of {0, +-pi}

    [[nodiscard]] bool all_failed() const noexcept { return n_failed == trials; }
};

struct NrmseReport {
    std::vector<CellReport> cells;

    [[nodiscard]] bool any_cell_all_failed() const noexcept {
        return std::any_of(cells.begin(), cells.end(), [](const auto& c) { return c.all_failed(); });
    }
};

inline std::vector<TrialResult> run_cell_trials(const ExperimentConfig& cfg, std::size_t k,
                                                std::uint64_t n) {
    std::vector<TrialResult> results(cfg.trials);
    unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.trials));
    if (workers <= 1) {
        for (std::size_t i = 0; i < cfg.trials; ++i) results[i] = run_trial(cfg, k, n, i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < cfg.trials; i = next++) results[i] = run_trial(cfg, k, n, i);
            });
        }
    }
    return results;
}

// phi4 is poorly determined when phi3_hat is this close to {0, +-pi}.
inline constexpr double kEndpointWarning = 1e-2;

inline CellReport summarize_cell(const ExperimentConfig& cfg, std::size_t k, std::uint64_t n,
                                 std::span<const TrialResult> results) {
    CellReport cell{k, n, std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN(), 0, results.size(), 0};
    std::vector<double> phi3;
    std::vector<double> phi4;
    for (const auto& r : results) {
        if (r.failed()) {
            ++cell.n_failed;
            continue;
        }
        const double a3 = std::abs(r.estimate->phi3_hat);
        if (a3 < kEndpointWarning || std::numbers::pi - a3 < kEndpointWarning) ++cell.n_near_endpoint;
        phi3.push_back(r.estimate->phi3_hat);
        phi4.push_back(r.estimate->phi4_hat);
    }
    if (!phi3.empty()) {
        if (cfg.truth.phi3 != 0.0) cell.nrmse_phi3 = nrmse(phi3, cfg.truth.phi3);
        if (cfg.truth.phi4 != 0.0) cell.nrmse_phi4 = nrmse(phi4, cfg.truth.phi4);
    }
    return cell;
}

// Cells in K-major order; a single N = infinity cell per K in
// exact-probability mode.
inline NrmseReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    NrmseReport report;
    const std::vector<std::uint64_t> n_grid =
        cfg.exact_probabilities ? std::vector<std::uint64_t>{kInfiniteShots} : cfg.n_values;
    for (auto k : cfg.k_values) {
        for (auto n : n_grid) {
            const auto results = run_cell_trials(cfg, k, n);
            report.cells.push_back(summarize_cell(cfg, k, n, results));
        }
    }
    return report;
}

// Rows (K, N, param, nrmse, n_failed, trials); 17 significant digits.
inline void write_nrmse_csv(std::ostream& os, const NrmseReport& report) {
    const auto old_flags = os.flags();
    const auto old_precision = os.precision();
    os << "K,N,param,nrmse,n_failed,trials\n" << std::setprecision(17);
    auto put = [&](const CellReport& c, const char* param, double value) {
        os << c.k << ',';
        if (c.n == kInfiniteShots) {
            os << "inf";
        } else {
            os << c.n;
        }
        os << ',' << param << ',';
        if (std::isnan(value)) {
            os << "nan";
        } else {
            os << value;
        }
        os << ',' << c.n_failed << ',' << c.trials << '\n';
    };
    for (const auto& c : report.cells) {
        put(c, "phi3", c.nrmse_phi3);
        put(c, "phi4", c.nrmse_phi4);
    }
    os.flags(old_flags);
    os.precision(old_precision);
}

}  // namespace rcps
