#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ordboost {

struct ConcordanceResult {
    double value = 0.0;              // concordant / comparable_pairs
    long long comparable_pairs = 0;  // pairs with differing true labels
    double concordant = 0.0;         // tied scores credited 0.5
    long long tied_pairs = 0;        // comparable pairs with exactly tied scores
};

namespace detail {

// Fenwick tree over label values, used for pair counting.
class Fenwick {
public:
    explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
    void add(std::size_t i) {
        for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i]++;
    }
    long long prefix(std::size_t count) const {  // sum of first `count` entries
        long long s = 0;
        for (std::size_t i = count; i > 0; i -= i & (~i + 1)) s += tree_[i];
        return s;
    }

private:
    std::vector<long long> tree_;
};

}  // namespace detail

// Harrell-style c-index over all pairs with differing true labels:
// concordant when the score ordering matches the label ordering, half credit
// for exactly tied scores. O(N log N) pair counting; exact integer
// arithmetic (concordant is a multiple of 0.5).
inline ConcordanceResult concordance_index(const std::vector<int>& y_true,
                                           const std::vector<double>& scores) {
    if (y_true.size() != scores.size())
        throw std::invalid_argument("concordance_index: label/score lengths differ");
    const std::size_t n = y_true.size();

    int max_label = 0;
    for (int y : y_true) {
        if (y < 0) throw std::invalid_argument("concordance_index: negative label");
        max_label = std::max(max_label, y);
    }
    std::vector<long long> label_counts(static_cast<std::size_t>(max_label) + 1, 0);
    for (int y : y_true) label_counts[static_cast<std::size_t>(y)]++;

    auto pairs2 = [](long long m) { return m * (m - 1) / 2; };
    long long comparable = pairs2(static_cast<long long>(n));
    for (long long c : label_counts) comparable -= pairs2(c);
    if (comparable == 0) throw std::domain_error("concordance_index: no comparable pairs (all labels equal)");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    detail::Fenwick seen(static_cast<std::size_t>(max_label) + 1);
    long long twice_concordant = 0;  // 2x to keep half credits integral
    long long tied = 0;
    std::size_t i = 0;
    std::vector<long long> block_counts(static_cast<std::size_t>(max_label) + 1, 0);
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        // Cross-label pairs inside this equal-score block are ties (0.5 each).
        long long block_pairs = pairs2(static_cast<long long>(j - i));
        for (std::size_t k = i; k < j; ++k) block_counts[static_cast<std::size_t>(y_true[order[k]])]++;
        for (std::size_t k = i; k < j; ++k) {
            auto& c = block_counts[static_cast<std::size_t>(y_true[order[k]])];
            if (c) {
                block_pairs -= pairs2(c);
                c = 0;
            }
        }
        tied += block_pairs;
        twice_concordant += block_pairs;
        // Against strictly smaller scores: concordant when the earlier label
        // is also strictly smaller.
        for (std::size_t k = i; k < j; ++k)
            twice_concordant += 2 * seen.prefix(static_cast<std::size_t>(y_true[order[k]]));
        for (std::size_t k = i; k < j; ++k) seen.add(static_cast<std::size_t>(y_true[order[k]]));
        i = j;
    }

    ConcordanceResult result;
    result.comparable_pairs = comparable;
    result.tied_pairs = tied;
    result.concordant = static_cast<double>(twice_concordant) / 2.0;
    result.value = result.concordant / static_cast<double>(comparable);
    return result;
}

}  // namespace ordboost
