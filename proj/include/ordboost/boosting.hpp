#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordboost/dataset.hpp"
#include "ordboost/learners.hpp"
#include "ordboost/line_search.hpp"
#include "ordboost/metrics.hpp"
#include "ordboost/ordinal.hpp"

namespace ordboost {

struct BoostConfig {
    int n_estimators = 100;
    double learning_rate_g = 0.1;  // eta_g, shrinkage on each learner's predictions
    LinkKind link = LinkKind::Probit;
    // A single spec is broadcast to every iteration; a longer schedule must
    // cover at least n_estimators entries.
    LearnerSchedule schedule = {RegressorSpec{}};
    std::optional<int> n_iter_no_change;        // patience; absent = no early stopping
    double validation_fraction = 0.1;           // holdout size when patience set and no CV
    std::optional<int> cv_early_stopping_splits;
    double tol = 1e-4;                          // minimum loss improvement counted as progress
    LineSearchConfig line_search;
    std::uint64_t seed = 0;
    std::optional<int> num_classes;             // explicit M; else 1 + max(y)

    void validate() const {
        if (n_estimators < 1) throw std::invalid_argument("BoostConfig: n_estimators must be >= 1");
        if (!(learning_rate_g > 0.0)) throw std::invalid_argument("BoostConfig: learning_rate_g must be > 0");
        if (schedule.empty()) throw std::invalid_argument("BoostConfig: empty learner schedule");
        if (schedule.size() > 1 && schedule.size() < static_cast<std::size_t>(n_estimators))
            throw std::invalid_argument("BoostConfig: learner schedule shorter than n_estimators");
        if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
            throw std::invalid_argument("BoostConfig: validation_fraction must be in (0,1)");
        if (cv_early_stopping_splits) {
            if (*cv_early_stopping_splits < 2)
                throw std::invalid_argument("BoostConfig: cv_early_stopping_splits must be >= 2");
            if (!n_iter_no_change)
                throw std::invalid_argument("BoostConfig: cv_early_stopping_splits requires n_iter_no_change");
        }
        if (n_iter_no_change && *n_iter_no_change < 1)
            throw std::invalid_argument("BoostConfig: n_iter_no_change must be >= 1");
        line_search.validate();
        if (num_classes && *num_classes < 2)
            throw std::invalid_argument("BoostConfig: num_classes must be >= 2");
    }

    const RegressorSpec& spec_for_iteration(int t) const {  // t is 1-based
        return schedule.size() == 1 ? schedule[0] : schedule[static_cast<std::size_t>(t - 1)];
    }
};

struct OrdinalBoostModel {
    double g0 = 0.0;
    std::vector<FittedRegressor> learners;
    double learning_rate_g = 0.1;
    Thresholds thresholds;
    LinkKind link = LinkKind::Probit;
    int num_classes = 2;
    int n_fitted = 0;
    std::size_t n_features = 0;
};

struct TraceRecord {
    int iteration = 0;  // 1-based
    double train_loss = 0.0;
    std::optional<double> validation_loss;
    double delta_g = 0.0;      // loss change from the g-update (signed)
    double delta_theta = 0.0;  // loss change from the theta-update (<= 0)
};

struct LossTrace {
    double initial_train_loss = 0.0;
    std::vector<TraceRecord> records;
};

struct FitResult {
    OrdinalBoostModel model;
    LossTrace trace;
};

namespace detail {

inline void check_feature_count(const OrdinalBoostModel& model, const Matrix& features) {
    if (features.cols != model.n_features)
        throw std::invalid_argument("expected " + std::to_string(model.n_features) + " features, got " +
                                    std::to_string(features.cols));
}

// One coordinate-descent training state: latent values, thresholds, fitted
// learners, and (optionally) latent values tracked on a validation set.
class Booster {
public:
    Booster(const OrdinalDataset& train, int num_classes, const BoostConfig& cfg,
            const OrdinalDataset* validation = nullptr)
        : train_(train), validation_(validation), cfg_(cfg) {
        std::vector<long long> counts(static_cast<std::size_t>(num_classes), 0);
        for (int y : train.labels) counts[static_cast<std::size_t>(y)]++;
        theta_ = initialize_thresholds(counts, cfg.link);
        g_.assign(train.size(), 0.0);
        if (validation_) g_val_.assign(validation_->size(), 0.0);
        eta_theta_ = cfg.line_search.initial_eta;
        current_loss_ = negative_log_likelihood(g_, train_.labels, theta_, cfg_.link);
        theta_history_.push_back(theta_);
    }

    double current_loss() const { return current_loss_; }

    double validation_loss() const {
        return negative_log_likelihood(g_val_, validation_->labels, theta_, cfg_.link);
    }

    // One boosting iteration: g-step (fit to pseudo-residuals, shrunk
    // update), then theta-step (line-searched gradient update).
    TraceRecord step(int iteration, const RegressorSpec& spec) {
        TraceRecord rec;
        rec.iteration = iteration;
        const double loss_before = current_loss_;

        auto residuals = pseudo_residuals(g_, train_.labels, theta_, cfg_.link);
        FittedRegressor learner = fit_regressor(spec, train_.features, residuals);
        auto preds = learner.predict(train_.features);
        for (std::size_t n = 0; n < g_.size(); ++n) g_[n] += cfg_.learning_rate_g * preds[n];
        if (validation_) {
            auto val_preds = learner.predict(validation_->features);
            for (std::size_t n = 0; n < g_val_.size(); ++n)
                g_val_[n] += cfg_.learning_rate_g * val_preds[n];
        }
        learners_.push_back(std::move(learner));

        const double loss_after_g = negative_log_likelihood(g_, train_.labels, theta_, cfg_.link);
        rec.delta_g = loss_after_g - loss_before;

        auto grad = threshold_gradient(g_, train_.labels, theta_, cfg_.link);
        LineSearchConfig ls = cfg_.line_search;
        ls.initial_eta = eta_theta_;  // warm start across iterations
        auto result = line_search_update(theta_, grad, ls, [&](const Thresholds& th) {
            return negative_log_likelihood(g_, train_.labels, th, cfg_.link);
        });
        eta_theta_ = result.final_eta;
        if (result.accepted) {
            theta_ = result.updated;
            rec.delta_theta = result.loss_after - loss_after_g;
            current_loss_ = result.loss_after;
        } else {
            rec.delta_theta = 0.0;
            current_loss_ = loss_after_g;
        }
        theta_history_.push_back(theta_);

        rec.train_loss = current_loss_;
        if (validation_) rec.validation_loss = validation_loss();
        return rec;
    }

    // Model truncated to the first n_fitted iterations, with the thresholds
    // as they stood at that iteration.
    OrdinalBoostModel to_model(int n_fitted) const {
        OrdinalBoostModel model;
        model.g0 = 0.0;
        model.learners.assign(learners_.begin(), learners_.begin() + n_fitted);
        model.learning_rate_g = cfg_.learning_rate_g;
        model.thresholds = theta_history_[static_cast<std::size_t>(n_fitted)];
        model.link = cfg_.link;
        model.num_classes = theta_.num_classes;
        model.n_fitted = n_fitted;
        model.n_features = train_.features.cols;
        return model;
    }

private:
    const OrdinalDataset& train_;
    const OrdinalDataset* validation_;
    const BoostConfig& cfg_;
    std::vector<double> g_, g_val_;
    Thresholds theta_;
    std::vector<Thresholds> theta_history_;
    std::vector<FittedRegressor> learners_;
    double eta_theta_ = 0.0;
    double current_loss_ = 0.0;
};

// Patience tracker: iteration 0 is the pre-boosting monitored loss, so the
// argmin can legitimately be 0. "No improvement" means monitored loss
// > best_so_far - tol.
class EarlyStopping {
public:
    EarlyStopping(int patience, double tol) : patience_(patience), tol_(tol) {}

    void observe(int iteration, double monitored) {
        if (monitored > best_loss_ - tol_)
            ++stall_;
        else
            stall_ = 0;
        if (monitored < best_loss_) {
            best_loss_ = monitored;
            best_iteration_ = iteration;
        }
    }

    bool should_stop() const { return stall_ >= patience_; }
    int best_iteration() const { return best_iteration_; }
    double best_loss() const { return best_loss_; }

private:
    int patience_;
    double tol_;
    double best_loss_ = std::numeric_limits<double>::infinity();
    int best_iteration_ = 0;
    int stall_ = 0;
};

inline void validate_dataset(const OrdinalDataset& data, int num_classes) {
    if (data.size() == 0) throw std::invalid_argument("fit: empty dataset");
    if (data.features.rows != data.size())
        throw std::invalid_argument("fit: feature/label row counts differ");
    check_labels(data.labels, num_classes);
    int distinct = 0;
    std::vector<bool> seen(static_cast<std::size_t>(num_classes), false);
    for (int y : data.labels)
        if (!seen[static_cast<std::size_t>(y)]) {
            seen[static_cast<std::size_t>(y)] = true;
            ++distinct;
        }
    if (distinct < 2) throw std::invalid_argument("fit: dataset contains a single class");
}

}  // namespace detail

// Coordinate-descent training: functional gradient descent on g alternating
// with line-searched threshold updates, with optional holdout or
// cross-validated early stopping.
inline FitResult fit(const OrdinalDataset& dataset, const BoostConfig& config) {
    config.validate();
    const int num_classes = config.num_classes
                                ? *config.num_classes
                                : 1 + *std::max_element(dataset.labels.begin(), dataset.labels.end());
    detail::validate_dataset(dataset, num_classes);

    OrdinalDataset scoped = dataset;
    scoped.num_classes = num_classes;

    FitResult out;

    if (!config.n_iter_no_change) {
        // Plain run, no early stopping.
        detail::Booster booster(scoped, num_classes, config);
        out.trace.initial_train_loss = booster.current_loss();
        for (int t = 1; t <= config.n_estimators; ++t)
            out.trace.records.push_back(booster.step(t, config.spec_for_iteration(t)));
        out.model = booster.to_model(config.n_estimators);
        return out;
    }

    const int patience = *config.n_iter_no_change;

    if (config.cv_early_stopping_splits) {
        // CV mode: K fold models trained iteration-synchronously; the mean
        // fold validation loss drives patience; the returned model is a
        // fresh fit on the full dataset for exactly the best iteration.
        const int k = *config.cv_early_stopping_splits;
        auto fold_of = stratified_kfold(scoped.labels, num_classes, k, config.seed);
        std::vector<OrdinalDataset> fold_train, fold_val;
        std::vector<detail::Booster> boosters;
        fold_train.reserve(static_cast<std::size_t>(k));
        fold_val.reserve(static_cast<std::size_t>(k));
        for (int f = 0; f < k; ++f) {
            std::vector<std::size_t> tr, va;
            for (std::size_t i = 0; i < fold_of.size(); ++i)
                (fold_of[i] == f ? va : tr).push_back(i);
            if (va.empty() || tr.empty())
                throw std::invalid_argument("fit: cv_early_stopping_splits too large for dataset");
            fold_train.push_back(scoped.subset(tr));
            fold_val.push_back(scoped.subset(va));
        }
        boosters.reserve(static_cast<std::size_t>(k));
        for (int f = 0; f < k; ++f)
            boosters.emplace_back(fold_train[static_cast<std::size_t>(f)], num_classes, config,
                                  &fold_val[static_cast<std::size_t>(f)]);

        detail::EarlyStopping stopper(patience, config.tol);
        double mean0 = 0.0;
        for (auto& b : boosters) mean0 += b.validation_loss();
        stopper.observe(0, mean0 / k);

        std::vector<double> mean_val_loss;  // index t-1
        for (int t = 1; t <= config.n_estimators && !stopper.should_stop(); ++t) {
            double mean = 0.0;
            for (auto& b : boosters) {
                auto rec = b.step(t, config.spec_for_iteration(t));
                mean += *rec.validation_loss;
            }
            mean /= k;
            mean_val_loss.push_back(mean);
            stopper.observe(t, mean);
        }

        const int best = stopper.best_iteration();
        detail::Booster full(scoped, num_classes, config);
        out.trace.initial_train_loss = full.current_loss();
        for (int t = 1; t <= best; ++t) {
            auto rec = full.step(t, config.spec_for_iteration(t));
            rec.validation_loss = mean_val_loss[static_cast<std::size_t>(t - 1)];
            out.trace.records.push_back(rec);
        }
        out.model = full.to_model(best);
        return out;
    }

    // Holdout mode: stratified validation split; the returned model is the
    // one trained on the remaining data, truncated to the best iteration.
    auto [train, validation] = stratified_split(scoped, config.validation_fraction, config.seed);
    if (train.size() == 0 || validation.size() == 0)
        throw std::invalid_argument("fit: validation_fraction leaves an empty split");
    detail::Booster booster(train, num_classes, config, &validation);
    out.trace.initial_train_loss = booster.current_loss();
    detail::EarlyStopping stopper(patience, config.tol);
    stopper.observe(0, booster.validation_loss());
    for (int t = 1; t <= config.n_estimators && !stopper.should_stop(); ++t) {
        auto rec = booster.step(t, config.spec_for_iteration(t));
        stopper.observe(t, *rec.validation_loss);
        out.trace.records.push_back(rec);
    }
    out.model = booster.to_model(stopper.best_iteration());
    return out;
}

// g(x) = g0 + eta_g * sum of the first n_fitted learners.
inline std::vector<double> decision_function(const OrdinalBoostModel& model, const Matrix& features) {
    detail::check_feature_count(model, features);
    std::vector<double> g(features.rows, model.g0);
    for (int t = 0; t < model.n_fitted; ++t) {
        const auto& learner = model.learners[static_cast<std::size_t>(t)];
        for (std::size_t r = 0; r < features.rows; ++r)
            g[r] += model.learning_rate_g * learner.predict_row(features.row(r));
    }
    return g;
}

// Element t uses only the first t learners; element 0 is g0 everywhere.
inline std::vector<std::vector<double>> staged_decision_function(const OrdinalBoostModel& model,
                                                                 const Matrix& features) {
    detail::check_feature_count(model, features);
    std::vector<std::vector<double>> stages;
    stages.reserve(static_cast<std::size_t>(model.n_fitted) + 1);
    std::vector<double> g(features.rows, model.g0);
    stages.push_back(g);
    for (int t = 0; t < model.n_fitted; ++t) {
        const auto& learner = model.learners[static_cast<std::size_t>(t)];
        for (std::size_t r = 0; r < features.rows; ++r)
            g[r] += model.learning_rate_g * learner.predict_row(features.row(r));
        stages.push_back(g);
    }
    return stages;
}

inline Matrix predict_proba(const OrdinalBoostModel& model, const Matrix& features) {
    auto g = decision_function(model, features);
    Matrix proba(features.rows, static_cast<std::size_t>(model.num_classes));
    for (std::size_t r = 0; r < features.rows; ++r) {
        auto p = class_probabilities(g[r], model.thresholds, model.link);
        for (std::size_t m = 0; m < p.size(); ++m) proba.at(r, m) = p[m];
    }
    return proba;
}

// Per-row argmax of predict_proba; ties break toward the lower class index.
inline std::vector<int> predict(const OrdinalBoostModel& model, const Matrix& features) {
    Matrix proba = predict_proba(model, features);
    std::vector<int> labels(proba.rows);
    for (std::size_t r = 0; r < proba.rows; ++r) {
        int best = 0;
        for (std::size_t m = 1; m < proba.cols; ++m)
            if (proba.at(r, m) > proba.at(r, static_cast<std::size_t>(best))) best = static_cast<int>(m);
        labels[r] = best;
    }
    return labels;
}

// Concordance index over latent scores (default) or predicted class labels.
inline double score(const OrdinalBoostModel& model, const Matrix& features, const std::vector<int>& y,
                    const std::string& pred_type = "latent") {
    std::vector<double> preds;
    if (pred_type == "latent") {
        preds = decision_function(model, features);
    } else if (pred_type == "labels") {
        auto labels = predict(model, features);
        preds.assign(labels.begin(), labels.end());
    } else {
        throw std::invalid_argument("score: unknown pred_type '" + pred_type +
                                    "' (expected 'latent' or 'labels')");
    }
    return concordance_index(y, preds).value;
}

}  // namespace ordboost
