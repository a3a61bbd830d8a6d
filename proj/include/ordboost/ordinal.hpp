#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordboost/link.hpp"

namespace ordboost {

// Floor applied to every class probability before logs/divisions, so the
// loss and gradients stay finite when the CDF saturates.
inline constexpr double kProbabilityFloor = 1e-15;

// Interior cut-points theta_1..theta_{M-1}; theta_0 = -inf and theta_M = +inf
// are implicit and never stored.
struct Thresholds {
    std::vector<double> cuts;
    int num_classes = 2;

    void validate() const {
        if (num_classes < 2) throw std::invalid_argument("Thresholds: num_classes must be >= 2");
        if (cuts.size() != static_cast<std::size_t>(num_classes - 1))
            throw std::invalid_argument("Thresholds: expected " + std::to_string(num_classes - 1) +
                                        " cuts, got " + std::to_string(cuts.size()));
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            if (!std::isfinite(cuts[i])) throw std::invalid_argument("Thresholds: cuts must be finite");
            if (i > 0 && !(cuts[i - 1] < cuts[i]))
                throw std::invalid_argument("Thresholds: cuts must be strictly increasing");
        }
    }

    // lower/upper bound of class m's latent interval.
    double lower(int m) const {
        return m == 0 ? -std::numeric_limits<double>::infinity() : cuts[static_cast<std::size_t>(m) - 1];
    }
    double upper(int m) const {
        return m == num_classes - 1 ? std::numeric_limits<double>::infinity()
                                    : cuts[static_cast<std::size_t>(m)];
    }
};

inline bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i - 1] < v[i])) return false;
    return true;
}

namespace detail {

inline void check_lengths(const std::vector<double>& g, const std::vector<int>& y) {
    if (g.size() != y.size())
        throw std::invalid_argument("latent vector and label vector lengths differ (" +
                                    std::to_string(g.size()) + " vs " + std::to_string(y.size()) + ")");
}

inline void check_labels(const std::vector<int>& y, int num_classes) {
    for (int v : y)
        if (v < 0 || v >= num_classes)
            throw std::invalid_argument("label " + std::to_string(v) + " out of range [0, " +
                                        std::to_string(num_classes) + ")");
}

// Raw (unclamped) probability of class y at latent value g.
inline double raw_class_probability(double g, int y, const Thresholds& th, LinkKind link) {
    return cdf(link, th.upper(y) - g) - cdf(link, th.lower(y) - g);
}

}  // namespace detail

// P(y = m | g) for m = 0..M-1, each floored at kProbabilityFloor.
inline std::vector<double> class_probabilities(double g, const Thresholds& thresholds, LinkKind link) {
    thresholds.validate();
    const int m_classes = thresholds.num_classes;
    std::vector<double> p(static_cast<std::size_t>(m_classes));
    double prev = 0.0;  // cdf(lower(0) - g) = cdf(-inf) = 0
    for (int m = 0; m < m_classes; ++m) {
        double cur = cdf(link, thresholds.upper(m) - g);
        double raw = cur - prev;
        p[static_cast<std::size_t>(m)] = raw < kProbabilityFloor ? kProbabilityFloor : raw;
        prev = cur;
    }
    return p;
}

// -sum_n ln P(y_n | g_n), on clamped probabilities.
inline double negative_log_likelihood(const std::vector<double>& g, const std::vector<int>& y,
                                      const Thresholds& thresholds, LinkKind link) {
    thresholds.validate();
    detail::check_lengths(g, y);
    detail::check_labels(y, thresholds.num_classes);
    double loss = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) {
        double raw = detail::raw_class_probability(g[n], y[n], thresholds, link);
        loss -= std::log(raw < kProbabilityFloor ? kProbabilityFloor : raw);
    }
    return loss;
}

// Negative gradient of the per-observation loss w.r.t. g(x_n); the regression
// target of each boosting iteration. Where the probability floor is active
// the implemented loss is locally flat, so the entry is 0.
inline std::vector<double> pseudo_residuals(const std::vector<double>& g, const std::vector<int>& y,
                                            const Thresholds& thresholds, LinkKind link) {
    thresholds.validate();
    detail::check_lengths(g, y);
    detail::check_labels(y, thresholds.num_classes);
    std::vector<double> r(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        double raw = detail::raw_class_probability(g[n], y[n], thresholds, link);
        if (raw < kProbabilityFloor) {
            r[n] = 0.0;
            continue;
        }
        double up = pdf(link, thresholds.upper(y[n]) - g[n]);
        double lo = pdf(link, thresholds.lower(y[n]) - g[n]);
        r[n] = -(up - lo) / raw;
    }
    return r;
}

// dL/d theta_m for m = 1..M-1. Observation n touches theta_{y_n} (its lower
// bound, contribution +pdf/D) and theta_{y_n+1} (its upper bound,
// contribution -pdf/D). Accumulated in fixed index order.
inline std::vector<double> threshold_gradient(const std::vector<double>& g, const std::vector<int>& y,
                                              const Thresholds& thresholds, LinkKind link) {
    thresholds.validate();
    detail::check_lengths(g, y);
    detail::check_labels(y, thresholds.num_classes);
    const int m_classes = thresholds.num_classes;
    std::vector<double> grad(static_cast<std::size_t>(m_classes - 1), 0.0);
    for (std::size_t n = 0; n < g.size(); ++n) {
        double raw = detail::raw_class_probability(g[n], y[n], thresholds, link);
        if (raw < kProbabilityFloor) continue;
        int yn = y[n];
        if (yn >= 1) grad[static_cast<std::size_t>(yn - 1)] += pdf(link, thresholds.lower(yn) - g[n]) / raw;
        if (yn + 1 <= m_classes - 1)
            grad[static_cast<std::size_t>(yn)] -= pdf(link, thresholds.upper(yn) - g[n]) / raw;
    }
    return grad;
}

// Thresholds matching smoothed empirical class frequencies at g == 0:
// theta_{m+1} = inverse_cdf(cumulative smoothed proportion). Add-one-half
// pseudo-counts keep the cumulative sums strictly increasing even when a
// class is absent.
inline Thresholds initialize_thresholds(const std::vector<long long>& class_counts, LinkKind link) {
    const int m_classes = static_cast<int>(class_counts.size());
    if (m_classes < 2) throw std::invalid_argument("initialize_thresholds: need at least 2 classes");
    long long total = 0;
    for (long long c : class_counts) {
        if (c < 0) throw std::invalid_argument("initialize_thresholds: negative class count");
        total += c;
    }
    if (total <= 0) throw std::invalid_argument("initialize_thresholds: total count must be positive");

    const double denom = static_cast<double>(total) + static_cast<double>(m_classes) / 2.0;
    Thresholds th;
    th.num_classes = m_classes;
    th.cuts.resize(static_cast<std::size_t>(m_classes - 1));
    double cum = 0.0;
    for (int m = 0; m < m_classes - 1; ++m) {
        cum += (static_cast<double>(class_counts[static_cast<std::size_t>(m)]) + 0.5) / denom;
        th.cuts[static_cast<std::size_t>(m)] = inverse_cdf(link, cum);
    }
    th.validate();
    return th;
}

// Smoothed proportions used by initialize_thresholds, exposed for tests and
// the initialization-fidelity check.
inline std::vector<double> smoothed_proportions(const std::vector<long long>& class_counts) {
    const double m_classes = static_cast<double>(class_counts.size());
    long long total = 0;
    for (long long c : class_counts) total += c;
    const double denom = static_cast<double>(total) + m_classes / 2.0;
    std::vector<double> p(class_counts.size());
    for (std::size_t m = 0; m < class_counts.size(); ++m)
        p[m] = (static_cast<double>(class_counts[m]) + 0.5) / denom;
    return p;
}

}  // namespace ordboost
