#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordboost/matrix.hpp"
#include "ordboost/rng.hpp"

namespace ordboost {

enum class LearnerKind { Tree, Constant };

inline std::string to_string(LearnerKind k) {
    return k == LearnerKind::Tree ? "tree" : "constant";
}

inline LearnerKind learner_kind_from_string(const std::string& s) {
    if (s == "tree") return LearnerKind::Tree;
    if (s == "constant") return LearnerKind::Constant;
    throw std::invalid_argument("unknown base learner kind: '" + s + "'");
}

// Base-learner specification. max_depth absent means unlimited depth.
struct RegressorSpec {
    LearnerKind kind = LearnerKind::Tree;
    std::optional<int> max_depth;
    int min_samples_leaf = 1;
    int min_samples_split = 2;

    void validate() const {
        if (max_depth && *max_depth < 1) throw std::invalid_argument("RegressorSpec: max_depth must be >= 1");
        if (min_samples_leaf < 1) throw std::invalid_argument("RegressorSpec: min_samples_leaf must be >= 1");
        if (min_samples_split < 2) throw std::invalid_argument("RegressorSpec: min_samples_split must be >= 2");
    }

    bool operator==(const RegressorSpec&) const = default;
};

// Flat binary-tree node. left < 0 marks a leaf; internal nodes route rows by
// feature value <= threshold (left) else right.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const { return left < 0; }
};

namespace detail {

struct BestSplit {
    bool found = false;
    std::size_t feature = 0;
    double value = 0.0;
    double children_sse = 0.0;
};

// Exhaustive best SSE split over midpoints between consecutive distinct
// sorted feature values. Ties resolve to the lowest feature index, then the
// lowest split value (scan order).
inline BestSplit find_best_split(const Matrix& x, const std::vector<double>& targets,
                                 const std::vector<std::size_t>& idx, double node_sse,
                                 int min_samples_leaf) {
    BestSplit best;
    best.children_sse = node_sse;
    const std::size_t n = idx.size();
    std::vector<std::pair<double, double>> vt(n);  // (feature value, target)
    for (std::size_t f = 0; f < x.cols; ++f) {
        for (std::size_t i = 0; i < n; ++i) vt[i] = {x.at(idx[i], f), targets[idx[i]]};
        std::sort(vt.begin(), vt.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        double sum_left = 0.0, sq_left = 0.0;
        double sum_total = 0.0, sq_total = 0.0;
        for (const auto& [v, t] : vt) {
            sum_total += t;
            sq_total += t * t;
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            sum_left += vt[i].second;
            sq_left += vt[i].second * vt[i].second;
            if (vt[i].first == vt[i + 1].first) continue;
            const std::size_t n_left = i + 1, n_right = n - n_left;
            if (n_left < static_cast<std::size_t>(min_samples_leaf) ||
                n_right < static_cast<std::size_t>(min_samples_leaf))
                continue;
            double sse_left = sq_left - sum_left * sum_left / static_cast<double>(n_left);
            double sum_right = sum_total - sum_left;
            double sse_right = (sq_total - sq_left) - sum_right * sum_right / static_cast<double>(n_right);
            double sse = sse_left + sse_right;
            if (sse < best.children_sse) {
                best.found = true;
                best.feature = f;
                best.value = vt[i].first + 0.5 * (vt[i + 1].first - vt[i].first);
                best.children_sse = sse;
            }
        }
    }
    return best;
}

}  // namespace detail

// A fitted base learner. Constant learners are stored as a single leaf.
class FittedRegressor {
public:
    FittedRegressor() = default;
    FittedRegressor(RegressorSpec spec, std::vector<TreeNode> nodes, std::size_t n_features)
        : spec_(std::move(spec)), nodes_(std::move(nodes)), n_features_(n_features) {
        validate_tree();
    }

    const RegressorSpec& spec() const { return spec_; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::size_t n_features() const { return n_features_; }

    double predict_row(const double* row) const {
        int node = 0;
        while (!nodes_[static_cast<std::size_t>(node)].is_leaf()) {
            const TreeNode& nd = nodes_[static_cast<std::size_t>(node)];
            node = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
        }
        return nodes_[static_cast<std::size_t>(node)].value;
    }

    std::vector<double> predict(const Matrix& features) const {
        if (features.cols != n_features_)
            throw std::invalid_argument("predict: expected " + std::to_string(n_features_) +
                                        " features, got " + std::to_string(features.cols));
        std::vector<double> out(features.rows);
        for (std::size_t r = 0; r < features.rows; ++r) out[r] = predict_row(features.row(r));
        return out;
    }

private:
    void validate_tree() const {
        if (nodes_.empty()) throw std::invalid_argument("FittedRegressor: empty node array");
        for (const TreeNode& nd : nodes_) {
            if (nd.is_leaf()) {
                if (!std::isfinite(nd.value))
                    throw std::invalid_argument("FittedRegressor: non-finite leaf prediction");
            } else if (nd.left < 0 || nd.right < 0 ||
                       nd.left >= static_cast<int>(nodes_.size()) ||
                       nd.right >= static_cast<int>(nodes_.size()) || nd.feature < 0 ||
                       nd.feature >= static_cast<int>(n_features_)) {
                throw std::invalid_argument("FittedRegressor: invalid internal node");
            }
        }
    }

    RegressorSpec spec_;
    std::vector<TreeNode> nodes_;
    std::size_t n_features_ = 0;
};

// Greedy top-down least-squares fit. Leaves predict the mean target of their
// samples; splitting stops at max_depth, below min_samples_split, or when no
// split strictly reduces SSE.
inline FittedRegressor fit_regressor(const RegressorSpec& spec, const Matrix& features,
                                     const std::vector<double>& targets) {
    spec.validate();
    if (features.rows == 0) throw std::invalid_argument("fit_regressor: empty data");
    if (features.rows != targets.size())
        throw std::invalid_argument("fit_regressor: feature/target row counts differ");
    for (double v : features.data)
        if (!std::isfinite(v)) throw std::invalid_argument("fit_regressor: non-finite feature value");
    for (double t : targets)
        if (!std::isfinite(t)) throw std::invalid_argument("fit_regressor: non-finite target value");

    std::vector<TreeNode> nodes;

    if (spec.kind == LearnerKind::Constant) {
        double mean = 0.0;
        for (double t : targets) mean += t;
        mean /= static_cast<double>(targets.size());
        nodes.push_back(TreeNode{.value = mean});
        return FittedRegressor(spec, std::move(nodes), features.cols);
    }

    struct Work {
        int node;
        std::vector<std::size_t> idx;
        int depth;
    };
    std::vector<std::size_t> all(features.rows);
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    nodes.push_back(TreeNode{});
    std::vector<Work> stack;
    stack.push_back({0, std::move(all), 0});

    while (!stack.empty()) {
        Work w = std::move(stack.back());
        stack.pop_back();
        const std::size_t n = w.idx.size();
        double sum = 0.0, sq = 0.0;
        for (std::size_t i : w.idx) {
            sum += targets[i];
            sq += targets[i] * targets[i];
        }
        const double mean = sum / static_cast<double>(n);
        const double node_sse = sq - sum * sum / static_cast<double>(n);

        TreeNode& nd = nodes[static_cast<std::size_t>(w.node)];
        nd.value = mean;

        const bool depth_capped = spec.max_depth && w.depth >= *spec.max_depth;
        if (depth_capped || n < static_cast<std::size_t>(spec.min_samples_split) || node_sse <= 0.0)
            continue;

        auto best = detail::find_best_split(features, targets, w.idx, node_sse, spec.min_samples_leaf);
        if (!best.found) continue;

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : w.idx)
            (features.at(i, best.feature) <= best.value ? left_idx : right_idx).push_back(i);

        const int left_node = static_cast<int>(nodes.size());
        const int right_node = left_node + 1;
        {
            TreeNode& parent = nodes[static_cast<std::size_t>(w.node)];
            parent.feature = static_cast<int>(best.feature);
            parent.threshold = best.value;
            parent.left = left_node;
            parent.right = right_node;
        }
        nodes.push_back(TreeNode{});
        nodes.push_back(TreeNode{});
        stack.push_back({right_node, std::move(right_idx), w.depth + 1});
        stack.push_back({left_node, std::move(left_idx), w.depth + 1});
    }
    return FittedRegressor(spec, std::move(nodes), features.cols);
}

// One RegressorSpec per boosting iteration.
using LearnerSchedule = std::vector<RegressorSpec>;

// Per-template sampling rules: each non-empty candidate list replaces the
// template's value with a uniform draw from the list. Finite candidate lists
// only.
struct OverrideRule {
    std::vector<std::optional<int>> max_depth;
    std::vector<int> min_samples_leaf;
    std::vector<int> min_samples_split;
};

inline LearnerSchedule generate_heterogeneous_learners(
    const std::vector<RegressorSpec>& templates, const std::vector<OverrideRule>& overrides,
    int total_samples, const std::optional<std::vector<double>>& template_probs, std::uint64_t seed) {
    if (templates.empty()) throw std::invalid_argument("generate_heterogeneous_learners: no templates");
    if (templates.size() != overrides.size())
        throw std::invalid_argument("generate_heterogeneous_learners: templates/overrides length mismatch");
    if (total_samples < 1)
        throw std::invalid_argument("generate_heterogeneous_learners: total_samples must be >= 1");
    for (const auto& t : templates) t.validate();
    if (template_probs) {
        if (template_probs->size() != templates.size())
            throw std::invalid_argument("generate_heterogeneous_learners: template_probs length mismatch");
        double sum = 0.0;
        for (double p : *template_probs) {
            if (p < 0.0) throw std::invalid_argument("generate_heterogeneous_learners: negative probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("generate_heterogeneous_learners: template_probs must sum to 1");
    }

    Rng rng(seed);
    LearnerSchedule schedule;
    schedule.reserve(static_cast<std::size_t>(total_samples));
    for (int s = 0; s < total_samples; ++s) {
        std::size_t t = template_probs ? rng.next_weighted_index(*template_probs)
                                       : rng.next_index(templates.size());
        RegressorSpec spec = templates[t];
        const OverrideRule& rule = overrides[t];
        if (!rule.max_depth.empty()) spec.max_depth = rule.max_depth[rng.next_index(rule.max_depth.size())];
        if (!rule.min_samples_leaf.empty())
            spec.min_samples_leaf = rule.min_samples_leaf[rng.next_index(rule.min_samples_leaf.size())];
        if (!rule.min_samples_split.empty())
            spec.min_samples_split = rule.min_samples_split[rng.next_index(rule.min_samples_split.size())];
        spec.validate();
        schedule.push_back(spec);
    }
    return schedule;
}

}  // namespace ordboost
