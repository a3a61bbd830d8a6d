// Acceptance driver. Runs one named check per criterion and prints a single
// PASS/FAIL line for each. `acceptance core` covers the property-based
// checks; `acceptance wine` covers the wine-quality benchmarks and exits
// with code 77 (skip) when the dataset is not cached locally.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ordboost/ordboost.hpp"
#include "ordboost/wine.hpp"
#include "oracles.hpp"

using namespace ordboost;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

int g_failures = 0;

void run(const std::string& name, const std::function<Outcome()>& check) {
    Outcome outcome{false, ""};
    try {
        outcome = check();
    } catch (const std::exception& e) {
        outcome = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (outcome.passed ? "PASS" : "FAIL") << " " << name;
    if (!outcome.detail.empty()) std::cout << " (" << outcome.detail << ")";
    std::cout << "\n";
    if (!outcome.passed) ++g_failures;
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(4);
    ss << v;
    return ss.str();
}

const LinkKind kLinks[] = {LinkKind::Probit, LinkKind::Logit, LinkKind::Cloglog};

struct RandomInstance {
    std::vector<double> g;
    std::vector<int> y;
    Thresholds th;
};

RandomInstance random_instance(std::mt19937_64& eng) {
    auto unit = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    RandomInstance inst;
    int n = 1 + static_cast<int>(eng() % 10);
    int m = 2 + static_cast<int>(eng() % 4);
    std::vector<double> cuts(static_cast<std::size_t>(m - 1));
    for (auto& c : cuts) c = (unit() - 0.5) * 4.0;
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 1; i < cuts.size(); ++i)
        if (cuts[i] - cuts[i - 1] < 0.05) cuts[i] = cuts[i - 1] + 0.05;
    inst.th.num_classes = m;
    inst.th.cuts = cuts;
    for (int i = 0; i < n; ++i) {
        inst.g.push_back((unit() - 0.5) * 4.0);
        inst.y.push_back(static_cast<int>(eng() % static_cast<std::uint64_t>(m)));
    }
    return inst;
}

OrdinalDataset random_dataset(std::size_t n, int num_classes, std::uint64_t seed) {
    OrdinalDataset ds;
    ds.features = Matrix(n, 2);
    ds.labels.resize(n);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        double v = rng.next_unit() * num_classes;
        ds.features.at(i, 0) = v + 0.5 * (rng.next_unit() - 0.5);
        ds.features.at(i, 1) = rng.next_unit();
        ds.labels[i] = std::min(num_classes - 1, static_cast<int>(v));
    }
    ds.num_classes = num_classes;
    return ds;
}

bool close_rel(double a, double b, double rel, double abs_floor = 1e-8) {
    return std::abs(a - b) <= std::max(abs_floor, rel * std::abs(b));
}

// --- core criteria -------------------------------------------------------

Outcome gradient_correctness() {
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 eng(1001);
    for (int i = 0; i < 100; ++i) {
        auto inst = random_instance(eng);
        LinkKind link = kLinks[eng() % 3];
        // Keep class probabilities away from the clamping floor; the loss has
        // a kink there that finite differences cannot resolve.
        for (std::size_t n = 0; n < inst.g.size(); ++n) {
            auto p = class_probabilities(inst.g[n], inst.th, link);
            std::vector<int> safe;
            for (std::size_t m = 0; m < p.size(); ++m)
                if (p[m] >= 1e-5) safe.push_back(static_cast<int>(m));
            inst.y[n] = safe[eng() % safe.size()];
        }
        auto residuals = pseudo_residuals(inst.g, inst.y, inst.th, link);
        auto fd_g = oracles::fd_latent_gradient(inst.g, inst.y, inst.th, link);
        for (std::size_t n = 0; n < residuals.size(); ++n)
            if (!close_rel(residuals[n], -fd_g[n], 1e-6))
                return {false, "latent gradient mismatch at instance " + std::to_string(i)};
        auto grad = threshold_gradient(inst.g, inst.y, inst.th, link);
        auto fd_t = oracles::fd_threshold_gradient(inst.g, inst.y, inst.th, link);
        for (std::size_t m = 0; m < grad.size(); ++m)
            if (!close_rel(grad[m], fd_t[m], 1e-6))
                return {false, "threshold gradient mismatch at instance " + std::to_string(i)};
    }
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed >= 5.0) return {false, "took " + fmt(elapsed) + "s, budget 5s"};
    return {true, "100 instances, " + fmt(elapsed) + "s"};
}

Outcome probability_normalization() {
    std::mt19937_64 eng(1002);
    auto unit = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < 1000; ++i) {
        auto inst = random_instance(eng);
        auto p = class_probabilities((unit() - 0.5) * 12.0, inst.th, kLinks[eng() % 3]);
        double sum = 0.0;
        for (double v : p) sum += v;
        if (std::abs(sum - 1.0) > 1e-9)
            return {false, "sum " + fmt(sum) + " at input " + std::to_string(i)};
    }
    return {true, "1000 inputs"};
}

Outcome initialization_fidelity() {
    const std::vector<std::vector<long long>> cases = {
        {50, 50}, {25, 50, 25}, {10, 0, 5, 85}, {1, 1, 1, 1, 1}, {999, 1}, {3, 7, 11, 2}};
    for (LinkKind link : kLinks)
        for (const auto& counts : cases) {
            auto th = initialize_thresholds(counts, link);
            auto expected = smoothed_proportions(counts);
            auto actual = class_probabilities(0.0, th, link);
            for (std::size_t m = 0; m < expected.size(); ++m)
                if (std::abs(actual[m] - expected[m]) > 1e-10)
                    return {false, to_string(link) + ": class " + std::to_string(m) +
                                       " off by " + fmt(std::abs(actual[m] - expected[m]))};
        }
    return {true, std::to_string(cases.size()) + " count vectors x 3 links"};
}

Outcome line_search_safety() {
    std::mt19937_64 eng(1004);
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
        Thresholds th;
        th.num_classes = m + 1;
        th.cuts = cuts;
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
        auto r = line_search_update(th, grad, cfg, loss);
        if (!strictly_increasing(r.updated.cuts)) return {false, "ordering violated"};
        if (evals > 2 + std::max(cfg.max_doublings, cfg.max_halvings))
            return {false, "eval count " + std::to_string(evals)};
        if (r.accepted && !(r.loss_after < r.loss_before)) return {false, "accepted without progress"};
        if (!r.accepted && r.updated.cuts != th.cuts) return {false, "rejection modified thresholds"};
    }
    return {true, "1000 triples"};
}

Outcome theta_step_monotonicity() {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto ds = random_dataset(60 + seed * 17, 2 + static_cast<int>(seed % 3), seed + 10);
        BoostConfig cfg;
        cfg.n_estimators = 30;
        RegressorSpec spec;
        spec.max_depth = 2;
        cfg.schedule = {spec};
        cfg.seed = seed;
        auto result = fit(ds, cfg);
        for (const auto& rec : result.trace.records)
            if (rec.delta_theta > 0.0)
                return {false, "delta_theta " + fmt(rec.delta_theta) + " at iteration " +
                                   std::to_string(rec.iteration) + " (seed " + std::to_string(seed) + ")"};
    }
    return {true, "5 training runs, 30 iterations each"};
}

Outcome concordance_oracle() {
    std::mt19937_64 eng(1006);
    auto unit = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 2 + eng() % 49;
        int m = 2 + static_cast<int>(eng() % 4);
        std::vector<int> y(n);
        std::vector<double> s(n);
        bool quantized = trial % 2 == 0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = static_cast<int>(eng() % static_cast<std::uint64_t>(m));
            s[i] = quantized ? std::round(unit() * 3.0) : unit();
        }
        auto brute = oracles::brute_concordance(y, s);
        if (brute.comparable == 0) {
            try {
                concordance_index(y, s);
                return {false, "missing domain error at trial " + std::to_string(trial)};
            } catch (const std::domain_error&) {
                continue;
            }
        }
        auto fast = concordance_index(y, s);
        if (fast.comparable_pairs != brute.comparable || fast.concordant != brute.concordant ||
            fast.tied_pairs != brute.tied || fast.value != brute.value)
            return {false, "mismatch at trial " + std::to_string(trial)};
    }
    return {true, "200 instances incl. heavy ties"};
}

Outcome tree_split_optimality() {
    std::mt19937_64 eng(1007);
    auto unit = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    RegressorSpec spec;
    spec.max_depth = 1;
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 2 + eng() % 7;
        std::size_t f = 1 + eng() % 2;
        Matrix x(n, f);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < f; ++c) x.at(i, c) = std::round(unit() * 8.0);
            y[i] = (unit() - 0.5) * 10.0;
        }
        auto model = fit_regressor(spec, x, y);
        auto preds = model.predict(x);
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) sse += (preds[i] - y[i]) * (preds[i] - y[i]);
        double best = oracles::brute_best_split_sse(x, y);
        if (std::abs(sse - best) > 1e-9)
            return {false, "sse " + fmt(sse) + " vs brute " + fmt(best) + " at trial " +
                               std::to_string(trial)};
    }
    return {true, "200 instances, <= 8 rows"};
}

Outcome round_trips() {
    // Model save/load: decision values bitwise identical.
    auto ds = random_dataset(80, 3, 77);
    BoostConfig cfg;
    cfg.n_estimators = 20;
    RegressorSpec spec;
    spec.max_depth = 2;
    cfg.schedule = {spec};
    auto result = fit(ds, cfg);
    auto path = std::filesystem::temp_directory_path() /
                ("ordboost-acceptance-" + std::to_string(std::random_device{}()) + ".json");
    save_model(result.model, path);
    auto loaded = load_model(path);
    std::filesystem::remove(path);
    if (decision_function(loaded, ds.features) != decision_function(result.model, ds.features))
        return {false, "decision values changed across save/load"};

    // Link cdf/quantile round-trip.
    for (LinkKind link : kLinks)
        for (double p = 0.001; p < 1.0; p += 0.007) {
            double back = cdf(link, inverse_cdf(link, p));
            if (std::abs(back - p) > 1e-10)
                return {false, to_string(link) + " round-trip off by " + fmt(std::abs(back - p))};
        }
    return {true, "bitwise model round-trip; link round-trip <= 1e-10"};
}

Outcome determinism() {
    auto ds = random_dataset(150, 3, 5);
    BoostConfig cfg;
    cfg.n_estimators = 40;
    RegressorSpec spec;
    spec.max_depth = 2;
    cfg.schedule = {spec};
    cfg.n_iter_no_change = 6;
    cfg.seed = 42;
    auto a = fit(ds, cfg);
    auto b = fit(ds, cfg);
    if (a.model.n_fitted != b.model.n_fitted) return {false, "n_fitted differs"};
    if (a.model.thresholds.cuts != b.model.thresholds.cuts) return {false, "thresholds differ"};
    if (decision_function(a.model, ds.features) != decision_function(b.model, ds.features))
        return {false, "decision values differ"};
    if (a.trace.records.size() != b.trace.records.size()) return {false, "trace lengths differ"};
    for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
        const auto& ra = a.trace.records[i];
        const auto& rb = b.trace.records[i];
        if (ra.train_loss != rb.train_loss || ra.delta_g != rb.delta_g ||
            ra.delta_theta != rb.delta_theta || ra.validation_loss != rb.validation_loss)
            return {false, "trace record " + std::to_string(i) + " differs"};
    }
    // Serialized artifacts are byte-identical too.
    auto dir = std::filesystem::temp_directory_path();
    auto tag = std::to_string(std::random_device{}());
    auto pa = dir / ("ordboost-det-a-" + tag + ".json");
    auto pb = dir / ("ordboost-det-b-" + tag + ".json");
    save_model(a.model, pa);
    save_model(b.model, pb);
    std::ifstream fa(pa), fb(pb);
    std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    std::filesystem::remove(pa);
    std::filesystem::remove(pb);
    if (sa != sb) return {false, "serialized models differ"};
    return {true, "identical models, traces, serialized bytes"};
}

// --- wine criteria -------------------------------------------------------

BoostConfig wine_config(std::optional<int> max_depth = 3) {
    BoostConfig cfg;
    cfg.n_estimators = 250;
    cfg.learning_rate_g = 0.1;
    RegressorSpec spec;
    spec.max_depth = max_depth;
    spec.min_samples_leaf = 5;
    cfg.schedule = {spec};
    return cfg;
}

struct CvStats {
    double mean_concordance;
    int fit_calls;
};

CvStats cv_concordance(const OrdinalDataset& ds, const BoostConfig& cfg, int k, std::uint64_t seed) {
    auto fold = stratified_kfold(ds.labels, ds.num_classes, k, seed);
    double total = 0.0;
    int fits = 0;
    for (int f = 0; f < k; ++f) {
        std::vector<std::size_t> train_idx, val_idx;
        for (std::size_t i = 0; i < fold.size(); ++i)
            (fold[i] == f ? val_idx : train_idx).push_back(i);
        auto train = ds.subset(train_idx);
        auto val = ds.subset(val_idx);
        auto result = fit(train, cfg);
        ++fits;
        total += score(result.model, val.features, val.labels);
    }
    return {total / k, fits};
}

OrdinalDataset g_wine;  // loaded once in main for the wine criteria

Outcome latent_vs_labels() {
    auto start = std::chrono::steady_clock::now();
    auto [train, test] = stratified_split(g_wine, 0.3, 7);
    auto result = fit(train, wine_config());
    double latent = score(result.model, test.features, test.labels, "latent");
    double labels = score(result.model, test.features, test.labels, "labels");
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string detail = "latent " + fmt(latent) + ", labels " + fmt(labels) + ", " + fmt(elapsed) + "s";
    if (elapsed >= 120.0) return {false, detail + "; over the 2 min budget"};
    if (!(latent >= 0.74 && latent <= 0.84)) return {false, detail + "; latent outside [0.74, 0.84]"};
    if (!(latent - labels >= 0.03)) return {false, detail + "; gap below 0.03"};
    return {true, detail};
}

Outcome cv_headline() {
    auto stats = cv_concordance(g_wine, wine_config(), 5, 11);
    std::string detail = "5-fold mean latent concordance " + fmt(stats.mean_concordance);
    if (stats.mean_concordance < 0.79) return {false, detail + "; below 0.79"};
    return {true, detail};
}

Outcome early_stopping_noninferiority() {
    auto [train, test] = stratified_split(g_wine, 0.3, 13);

    auto holdout_cfg = wine_config();
    holdout_cfg.n_iter_no_change = 15;
    holdout_cfg.validation_fraction = 0.2;
    holdout_cfg.seed = 3;
    auto holdout = fit(train, holdout_cfg);
    double holdout_score = score(holdout.model, test.features, test.labels);

    auto cv_cfg = wine_config();
    cv_cfg.n_iter_no_change = 15;
    cv_cfg.cv_early_stopping_splits = 5;
    cv_cfg.seed = 3;
    auto cv = fit(train, cv_cfg);
    double cv_score = score(cv.model, test.features, test.labels);

    std::string detail = "cv " + fmt(cv_score) + " (n_fitted " + std::to_string(cv.model.n_fitted) +
                         "), holdout " + fmt(holdout_score) + " (n_fitted " +
                         std::to_string(holdout.model.n_fitted) + ")";
    if (!(cv_score >= holdout_score - 0.01)) return {false, detail + "; cv more than 0.01 worse"};
    return {true, detail};
}

Outcome heterogeneous_ensemble() {
    const std::vector<std::optional<int>> depths = {3, 6, 9, std::nullopt};
    auto cfg = wine_config();
    cfg.n_estimators = 60;  // desk scale

    double best_fixed = 0.0;
    int fixed_fits = 0;
    for (const auto& d : depths) {
        auto fixed_cfg = cfg;
        fixed_cfg.schedule[0].max_depth = d;
        auto stats = cv_concordance(g_wine, fixed_cfg, 5, 19);
        best_fixed = std::max(best_fixed, stats.mean_concordance);
        fixed_fits += stats.fit_calls;
    }

    RegressorSpec tmpl = cfg.schedule[0];
    OverrideRule rule;
    rule.max_depth = depths;
    auto hetero_cfg = cfg;
    hetero_cfg.schedule = generate_heterogeneous_learners({tmpl}, {rule}, cfg.n_estimators,
                                                          std::nullopt, 23);
    auto hetero = cv_concordance(g_wine, hetero_cfg, 5, 19);

    double ratio = static_cast<double>(hetero.fit_calls) / fixed_fits;
    std::string detail = "hetero " + fmt(hetero.mean_concordance) + " vs best fixed " +
                         fmt(best_fixed) + ", training-count ratio " + fmt(ratio);
    if (std::abs(ratio - 1.0 / static_cast<double>(depths.size())) > 1e-12)
        return {false, detail + "; ratio is not 1/" + std::to_string(depths.size())};
    if (!(hetero.mean_concordance >= best_fixed - 0.02))
        return {false, detail + "; more than 0.02 below the best fixed depth"};
    return {true, detail};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string mode = argc > 1 ? argv[1] : "core";

    if (mode == "core") {
        run("criterion 1: gradients match finite differences", gradient_correctness);
        run("criterion 2: predicted probabilities normalize", probability_normalization);
        run("criterion 3: threshold initialization fidelity", initialization_fidelity);
        run("criterion 4: line-search safety and progress", line_search_safety);
        run("criterion 5: threshold steps never raise the loss", theta_step_monotonicity);
        run("criterion 6: concordance matches brute force", concordance_oracle);
        run("criterion 7: depth-1 splits are SSE-optimal", tree_split_optimality);
        run("criterion 8: model and link round-trips", round_trips);
        run("criterion 9: seeded runs are deterministic", determinism);
    } else if (mode == "wine") {
        auto cache = default_cache_dir();
        auto file = wine_cache_file(WineColor::Red, cache);
        if (!std::filesystem::exists(file)) {
            std::cout << "SKIP wine criteria: " << file.string()
                      << " not cached (run `ordboost fetch-data --color red` with network access)\n";
            return 77;
        }
        g_wine = load_wine_quality(WineColor::Red, cache);
        run("criterion 10: latent scores beat label predictions", latent_vs_labels);
        run("criterion 11: 5-fold CV concordance level", cv_headline);
        run("criterion 12: CV early stopping is non-inferior", early_stopping_noninferiority);
        run("criterion 13: heterogeneous schedule at a quarter of the work", heterogeneous_ensemble);
    } else {
        std::cerr << "usage: acceptance [core|wine]\n";
        return 1;
    }
    return g_failures == 0 ? 0 : 1;
}
