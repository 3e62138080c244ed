// config.hpp
// Flat key-value experiment configuration.
//
//   rcps-config v1
//   # comment
//   phi3 = 3pi/10
//   k = 1000, 2000
//
// Keys: phi1 phi2 phi3 phi4 r_min r_max phi_bound k n trials seed selection
// bias_correct exact_prob analytic_moments threads. Angles accept plain
// numbers or multiples of pi ("pi/4", "0.3pi", "3*pi/10", "-2pi/5").

#pragma once

#include <cctype>
#include <cstdint>
#include <istream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rcps/experiment.hpp"

namespace rcps {

inline constexpr std::string_view kConfigHeader = "rcps-config v1";

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline double parse_real(const std::string& text, const std::string& key) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("bad number for '" + key + "': " + text);
    }
    if (used != text.size()) throw ConfigError("bad number for '" + key + "': " + text);
    return v;
}

inline std::uint64_t parse_count(const std::string& text, const std::string& key) {
    std::size_t used = 0;
    unsigned long long v = 0;
    if (text.empty() || text.front() == '-') throw ConfigError("bad count for '" + key + "': " + text);
    try {
        v = std::stoull(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("bad count for '" + key + "': " + text);
    }
    if (used != text.size()) throw ConfigError("bad count for '" + key + "': " + text);
    return v;
}

inline bool parse_flag(const std::string& text, const std::string& key) {
    if (text == "1" || text == "true" || text == "on" || text == "yes") return true;
    if (text == "0" || text == "false" || text == "off" || text == "no") return false;
    throw ConfigError("bad flag for '" + key + "': " + text);
}

}  // namespace detail

// "<a>", "<a>pi", "<a>*pi", "pi", "-pi", each optionally followed by "/<b>".
inline double parse_angle(const std::string& raw, const std::string& key = "angle") {
    std::string text;
    for (char c : raw) {
        if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
    }
    double den = 1.0;
    if (const auto slash = text.find('/'); slash != std::string::npos) {
        den = detail::parse_real(text.substr(slash + 1), key);
        if (den == 0.0) throw ConfigError("zero denominator for '" + key + "'");
        text.resize(slash);
    }
    double value = 0.0;
    if (const auto p = text.find("pi"); p != std::string::npos) {
        if (p + 2 != text.size()) throw ConfigError("bad angle for '" + key + "': " + raw);
        std::string coef = text.substr(0, p);
        if (!coef.empty() && coef.back() == '*') coef.pop_back();
        double c = 1.0;
        if (coef == "-") {
            c = -1.0;
        } else if (!coef.empty() && coef != "+") {
            c = detail::parse_real(coef, key);
        }
        value = c * std::numbers::pi;
    } else {
        value = detail::parse_real(text, key);
    }
    return value / den;
}

inline std::vector<std::uint64_t> parse_count_list(const std::string& text, const std::string& key) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(detail::parse_count(detail::trim(item), key));
    if (out.empty()) throw ConfigError("empty list for '" + key + "'");
    return out;
}

inline SelectionMode parse_selection(const std::string& text) {
    if (text == "oracle") return SelectionMode::oracle;
    if (text == "residual") return SelectionMode::residual;
    throw ConfigError("selection must be 'oracle' or 'residual', got: " + text);
}

// Accumulates key = value assignments on top of the defaults; angle and
// distribution invariants are checked once everything is applied.
class ConfigBuilder {
public:
    void set(const std::string& key, const std::string& value) {
        using detail::parse_count;
        using detail::parse_flag;
        if (key == "phi1") {
            phi_[0] = parse_angle(value, key);
        } else if (key == "phi2") {
            phi_[1] = parse_angle(value, key);
        } else if (key == "phi3") {
            phi_[2] = parse_angle(value, key);
        } else if (key == "phi4") {
            phi_[3] = parse_angle(value, key);
        } else if (key == "r_min") {
            r_min_ = detail::parse_real(value, key);
        } else if (key == "r_max") {
            r_max_ = detail::parse_real(value, key);
        } else if (key == "phi_bound") {
            phi_bound_ = parse_angle(value, key);
        } else if (key == "k") {
            const auto ks = parse_count_list(value, key);
            k_values_.assign(ks.begin(), ks.end());
        } else if (key == "n") {
            n_values_ = parse_count_list(value, key);
        } else if (key == "trials") {
            trials_ = parse_count(value, key);
        } else if (key == "seed") {
            seed_ = parse_count(value, key);
        } else if (key == "selection") {
            selection_ = parse_selection(value);
        } else if (key == "bias_correct") {
            bias_ = parse_flag(value, key) ? BiasCorrection::on : BiasCorrection::off;
        } else if (key == "exact_prob") {
            exact_ = parse_flag(value, key);
        } else if (key == "analytic_moments") {
            analytic_ = parse_flag(value, key);
        } else if (key == "threads") {
            threads_ = static_cast<unsigned>(parse_count(value, key));
        } else {
            throw ConfigError("unknown key: " + key);
        }
    }

    [[nodiscard]] ExperimentConfig build() const {
        ExperimentConfig cfg;
        try {
            cfg.truth = UnitaryParams(phi_[0], phi_[1], phi_[2], phi_[3]);
            cfg.dist = QubitInputDistribution(r_min_, r_max_, phi_bound_);
            cfg.k_values = k_values_;
            cfg.n_values = n_values_;
            cfg.trials = trials_;
            cfg.master_seed = seed_;
            cfg.selection = selection_;
            cfg.bias_correct = bias_;
            cfg.exact_probabilities = exact_;
            cfg.analytic_moments = analytic_;
            cfg.threads = threads_;
            cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        return cfg;
    }

private:
    ExperimentConfig defaults_{};
    double phi_[4] = {defaults_.truth.phi1, defaults_.truth.phi2, defaults_.truth.phi3,
                      defaults_.truth.phi4};
    double r_min_ = defaults_.dist.r_min();
    double r_max_ = defaults_.dist.r_max();
    double phi_bound_ = defaults_.dist.phi_bound();
    std::vector<std::size_t> k_values_ = defaults_.k_values;
    std::vector<std::uint64_t> n_values_ = defaults_.n_values;
    std::size_t trials_ = defaults_.trials;
    std::uint64_t seed_ = defaults_.master_seed;
    SelectionMode selection_ = defaults_.selection;
    BiasCorrection bias_ = defaults_.bias_correct;
    bool exact_ = defaults_.exact_probabilities;
    bool analytic_ = defaults_.analytic_moments;
    unsigned threads_ = defaults_.threads;
};

// Applies a config stream to `builder`. The first non-blank line must be
// the version header.
inline void read_config(std::istream& in, ConfigBuilder& builder) {
    std::string line;
    bool header_seen = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (!header_seen) {
            if (t != kConfigHeader) {
                throw ConfigError("missing '" + std::string(kConfigHeader) + "' header");
            }
            header_seen = true;
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        builder.set(detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
    if (!header_seen) throw ConfigError("missing '" + std::string(kConfigHeader) + "' header");
}

inline ExperimentConfig parse_config(std::istream& in) {
    ConfigBuilder b;
    read_config(in, b);
    return b.build();
}

}  // namespace rcps
