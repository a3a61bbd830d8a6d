#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ordboost/line_search.hpp"

using namespace ordboost;
using Catch::Approx;

namespace {

Thresholds make_thresholds(std::vector<double> cuts) {
    Thresholds th;
    th.num_classes = static_cast<int>(cuts.size()) + 1;
    th.cuts = std::move(cuts);
    return th;
}

}  // namespace

TEST_CASE("zero gradient short-circuits") {
    auto th = make_thresholds({-1.0, 1.0});
    int evals = 0;
    auto result = line_search_update(th, {0.0, 0.0}, LineSearchConfig{}, [&](const Thresholds& t) {
        ++evals;
        return t.cuts[0] * t.cuts[0];
    });
    CHECK_FALSE(result.accepted);
    CHECK(result.updated.cuts == th.cuts);
    CHECK(result.loss_after == result.loss_before);
    CHECK(evals == 1);
}

TEST_CASE("quadratic hand-trace, doubling against the original loss") {
    // L(theta) = (theta - 1)^2 at theta = 0, gradient -2, eta 0.25, alpha 0.5:
    // proposals 0.5 (ok), 1.0 (ok, loss 0), 2.0 (loss 1, not < 1) -> 1.0.
    auto th = make_thresholds({0.0});
    LineSearchConfig cfg;
    cfg.initial_eta = 0.25;
    cfg.alpha = 0.5;
    auto result = line_search_update(th, {-2.0}, cfg, [](const Thresholds& t) {
        return (t.cuts[0] - 1.0) * (t.cuts[0] - 1.0);
    });
    CHECK(result.accepted);
    CHECK(result.updated.cuts[0] == Approx(1.0).margin(1e-15));
    CHECK(result.final_eta == Approx(0.5).margin(1e-15));
    CHECK(result.loss_before == Approx(1.0));
    CHECK(result.loss_after == Approx(0.0).margin(1e-15));
}

TEST_CASE("halving until ordering is preserved") {
    // Full step would reorder the cuts; halving must recover ordering.
    auto th = make_thresholds({0.0, 0.1});
    LineSearchConfig cfg;
    cfg.initial_eta = 1.0;
    auto result = line_search_update(th, {-1.0, 1.0}, cfg, [](const Thresholds& t) {
        return (t.cuts[0] - 0.02) * (t.cuts[0] - 0.02) + (t.cuts[1] - 0.08) * (t.cuts[1] - 0.08);
    });
    CHECK(result.accepted);
    CHECK(strictly_increasing(result.updated.cuts));
    CHECK(result.loss_after < result.loss_before);
}

TEST_CASE("rejects when no step helps") {
    // Already at the minimum: every proposal raises the loss.
    auto th = make_thresholds({0.0});
    auto result = line_search_update(th, {1.0}, LineSearchConfig{}, [](const Thresholds& t) {
        return t.cuts[0] * t.cuts[0];
    });
    CHECK_FALSE(result.accepted);
    CHECK(result.updated.cuts == th.cuts);
    CHECK(result.loss_after == result.loss_before);
}

TEST_CASE("gradient length mismatch is rejected") {
    auto th = make_thresholds({0.0, 1.0});
    CHECK_THROWS_AS(
        line_search_update(th, {1.0}, LineSearchConfig{}, [](const Thresholds&) { return 0.0; }),
        std::invalid_argument);
}

TEST_CASE("config validation") {
    LineSearchConfig bad;
    bad.alpha = 1.5;
    auto th = make_thresholds({0.0});
    CHECK_THROWS_AS(line_search_update(th, {1.0}, bad, [](const Thresholds&) { return 0.0; }),
                    std::invalid_argument);
}

TEST_CASE("fuzz: safety, progress, boundedness, determinism") {
    std::mt19937_64 eng(99);
    auto unit = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    LineSearchConfig cfg;
    cfg.max_doublings = 12;
    cfg.max_halvings = 12;
    for (int i = 0; i < 1000; ++i) {
        int m = 1 + static_cast<int>(eng() % 4);
        std::vector<double> cuts(static_cast<std::size_t>(m));
        double base = (unit() - 0.5) * 2.0;
        for (auto& c : cuts) {
            c = base;
            base += 0.01 + unit();
        }
        auto th = make_thresholds(cuts);
        std::vector<double> grad(cuts.size()), target(cuts.size());
        for (auto& g : grad) g = (unit() - 0.5) * 4.0;
        for (std::size_t k = 0; k < cuts.size(); ++k) target[k] = cuts[k] + (unit() - 0.5) * 2.0;
        cfg.initial_eta = 0.001 + unit();

        int evals = 0;
        auto loss = [&](const Thresholds& t) {
            ++evals;
            double s = 0.0;
            for (std::size_t k = 0; k < t.cuts.size(); ++k)
                s += (t.cuts[k] - target[k]) * (t.cuts[k] - target[k]);
            return s;
        };
        auto r1 = line_search_update(th, grad, cfg, loss);
        CHECK(strictly_increasing(r1.updated.cuts));
        CHECK(evals <= 2 + std::max(cfg.max_doublings, cfg.max_halvings));
        if (r1.accepted) {
            CHECK(r1.loss_after < r1.loss_before);
        } else {
            CHECK(r1.updated.cuts == th.cuts);
            CHECK(r1.loss_after == r1.loss_before);
        }
        auto r2 = line_search_update(th, grad, cfg, loss);
        CHECK(r1.updated.cuts == r2.updated.cuts);
        CHECK(r1.final_eta == r2.final_eta);
        CHECK(r1.accepted == r2.accepted);
    }
}
