#pragma once

// Independent oracles used by the unit and acceptance suites. These must not
// reuse the implementation paths they check: the normal CDF comes from
// quadrature, quantiles from bisection, gradients from finite differences,
// the c-index from an O(N^2) double loop, and tree splits from brute force.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "ordboost/matrix.hpp"
#include "ordboost/ordinal.hpp"

namespace oracles {

// Standard normal density, written out directly.
inline double normal_pdf(double t) {
    return std::exp(-0.5 * t * t) / std::sqrt(2.0 * 3.14159265358979323846);
}

// Phi(t) by composite Simpson quadrature of the density from -12 (where the
// tail mass is ~2e-33) up to t.
inline double normal_cdf_quadrature(double t) {
    if (t <= -12.0) return 0.0;
    if (t >= 12.0) return 1.0;
    const double a = -12.0;
    const int n = 20000;  // even
    const double h = (t - a) / n;
    double sum = normal_pdf(a) + normal_pdf(t);
    for (int i = 1; i < n; ++i) sum += normal_pdf(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Quantile by bisection against a cdf oracle.
inline double quantile_bisection(const std::function<double(double)>& cdf, double p,
                                 double lo = -50.0, double hi = 50.0) {
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Central finite differences of the negative log-likelihood w.r.t. each g_n.
inline std::vector<double> fd_latent_gradient(const std::vector<double>& g, const std::vector<int>& y,
                                              const ordboost::Thresholds& th, ordboost::LinkKind link,
                                              double h = 1e-5) {
    std::vector<double> grad(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        auto gp = g, gm = g;
        gp[n] += h;
        gm[n] -= h;
        grad[n] = (ordboost::negative_log_likelihood(gp, y, th, link) -
                   ordboost::negative_log_likelihood(gm, y, th, link)) /
                  (2.0 * h);
    }
    return grad;
}

// Central finite differences of the NLL w.r.t. each cut.
inline std::vector<double> fd_threshold_gradient(const std::vector<double>& g, const std::vector<int>& y,
                                                 const ordboost::Thresholds& th, ordboost::LinkKind link,
                                                 double h = 1e-5) {
    std::vector<double> grad(th.cuts.size());
    for (std::size_t m = 0; m < th.cuts.size(); ++m) {
        auto tp = th, tm = th;
        tp.cuts[m] += h;
        tm.cuts[m] -= h;
        grad[m] = (ordboost::negative_log_likelihood(g, y, tp, link) -
                   ordboost::negative_log_likelihood(g, y, tm, link)) /
                  (2.0 * h);
    }
    return grad;
}

struct BruteConcordance {
    double concordant = 0.0;
    long long comparable = 0;
    long long tied = 0;
    double value = 0.0;
};

// O(N^2) c-index with the Harrell tie convention.
inline BruteConcordance brute_concordance(const std::vector<int>& y, const std::vector<double>& s) {
    BruteConcordance r;
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = i + 1; j < y.size(); ++j) {
            if (y[i] == y[j]) continue;
            r.comparable++;
            double ds = s[i] - s[j];
            int dy = y[i] - y[j];
            if (ds == 0.0) {
                r.concordant += 0.5;
                r.tied++;
            } else if ((ds > 0.0) == (dy > 0)) {
                r.concordant += 1.0;
            }
        }
    if (r.comparable > 0) r.value = r.concordant / static_cast<double>(r.comparable);
    return r;
}

// Minimum SSE over every candidate split of every feature (midpoints of
// consecutive distinct values), with no leaf-size constraints.
inline double brute_best_split_sse(const ordboost::Matrix& x, const std::vector<double>& targets) {
    auto sse_of = [&](const std::vector<double>& vals) {
        if (vals.empty()) return 0.0;
        double sum = 0.0, sq = 0.0;
        for (double v : vals) {
            sum += v;
            sq += v * v;
        }
        return sq - sum * sum / static_cast<double>(vals.size());
    };
    double best = sse_of(targets);
    for (std::size_t f = 0; f < x.cols; ++f) {
        std::vector<double> values;
        for (std::size_t r = 0; r < x.rows; ++r) values.push_back(x.at(r, f));
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t i = 0; i + 1 < values.size(); ++i) {
            double cut = 0.5 * (values[i] + values[i + 1]);
            std::vector<double> left, right;
            for (std::size_t r = 0; r < x.rows; ++r)
                (x.at(r, f) <= cut ? left : right).push_back(targets[r]);
            best = std::min(best, sse_of(left) + sse_of(right));
        }
    }
    return best;
}

}  // namespace oracles
