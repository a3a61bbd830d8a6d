#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ordboost/ordinal.hpp"

namespace ordboost {

struct LineSearchConfig {
    double initial_eta = 0.01;       // eta_theta starting value
    double alpha = 0.5;              // shrink factor in (0,1); 1/alpha is the growth factor
    int max_doublings = 30;
    int max_halvings = 30;
    double gradient_tolerance = 1e-12;  // max-norm below which the step is skipped

    void validate() const {
        if (!(initial_eta > 0.0)) throw std::invalid_argument("LineSearchConfig: initial_eta must be > 0");
        if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("LineSearchConfig: alpha must be in (0,1)");
        if (max_doublings < 1 || max_halvings < 1)
            throw std::invalid_argument("LineSearchConfig: iteration caps must be >= 1");
    }
};

struct LineSearchResult {
    Thresholds updated;
    double final_eta = 0.0;
    bool accepted = false;
    double loss_before = 0.0;
    double loss_after = 0.0;
};

// Adaptive doubling/halving step on the threshold vector. Proposes
// theta' = theta - eta * gradient. If the first proposal lowers the loss and
// stays strictly ordered, the step is repeatedly enlarged by 1/alpha while
// the enlarged proposal still beats the ORIGINAL loss and stays ordered;
// otherwise it is repeatedly shrunk by alpha. Rejected outcomes return the
// input thresholds unchanged.
template <typename LossFn>
LineSearchResult line_search_update(const Thresholds& thresholds, const std::vector<double>& gradient,
                                    const LineSearchConfig& config, LossFn&& loss_at) {
    config.validate();
    thresholds.validate();
    if (gradient.size() != thresholds.cuts.size())
        throw std::invalid_argument("line_search_update: gradient length does not match cuts length");

    double max_norm = 0.0;
    for (double gi : gradient) max_norm = std::max(max_norm, std::abs(gi));

    LineSearchResult result;
    result.updated = thresholds;
    result.final_eta = config.initial_eta;

    if (max_norm < config.gradient_tolerance) {
        double loss = loss_at(thresholds);
        result.loss_before = result.loss_after = loss;
        return result;
    }

    const double loss0 = loss_at(thresholds);
    result.loss_before = result.loss_after = loss0;

    auto propose = [&](double eta) {
        Thresholds t = thresholds;
        for (std::size_t i = 0; i < t.cuts.size(); ++i) t.cuts[i] -= eta * gradient[i];
        return t;
    };

    double eta = config.initial_eta;
    Thresholds cand = propose(eta);
    if (strictly_increasing(cand.cuts)) {
        double loss1 = loss_at(cand);
        if (loss1 < loss0) {
            // Acceptable; try to enlarge, always comparing against loss0.
            result.updated = cand;
            result.final_eta = eta;
            result.accepted = true;
            result.loss_after = loss1;
            for (int d = 0; d < config.max_doublings; ++d) {
                double bigger = eta / config.alpha;
                Thresholds next = propose(bigger);
                if (!strictly_increasing(next.cuts)) break;
                double loss_next = loss_at(next);
                if (!(loss_next < loss0)) break;
                eta = bigger;
                result.updated = next;
                result.final_eta = eta;
                result.loss_after = loss_next;
            }
            return result;
        }
    }

    // First proposal unacceptable; shrink until acceptable or give up.
    for (int h = 0; h < config.max_halvings; ++h) {
        eta *= config.alpha;
        cand = propose(eta);
        if (!strictly_increasing(cand.cuts)) continue;
        double loss = loss_at(cand);
        if (loss < loss0) {
            result.updated = cand;
            result.final_eta = eta;
            result.accepted = true;
            result.loss_after = loss;
            return result;
        }
    }
    result.final_eta = eta;
    return result;
}

}  // namespace ordboost
