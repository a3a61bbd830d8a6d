// Command-line front end: fetch-data, train, predict, evaluate, loss-curve.
// Exit codes: 0 success, 1 usage error, 2 runtime/data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ordboost/ordboost.hpp"
#include "ordboost/plot.hpp"
#include "ordboost/wine.hpp"

namespace {

using namespace ordboost;

std::filesystem::path trace_path_for(const std::filesystem::path& model_path) {
    auto p = model_path;
    p.replace_extension(".trace");
    return p;
}

// Declarative heterogeneous-schedule config: templates, per-hyperparameter
// candidate lists, optional template probabilities, and a seed.
LearnerSchedule schedule_from_hetero_config(const std::filesystem::path& path, int total_samples) {
    nlohmann::json j = detail::parse_file(path, "hetero-config");
    std::vector<RegressorSpec> templates;
    std::vector<OverrideRule> overrides;
    for (const auto& tj : j.at("templates")) templates.push_back(detail::spec_from_json(tj));
    for (const auto& oj : j.at("overrides")) {
        OverrideRule rule;
        if (oj.contains("max_depth"))
            for (const auto& v : oj.at("max_depth"))
                rule.max_depth.push_back(v.is_null() ? std::nullopt : std::optional<int>(v.get<int>()));
        if (oj.contains("min_samples_leaf"))
            rule.min_samples_leaf = oj.at("min_samples_leaf").get<std::vector<int>>();
        if (oj.contains("min_samples_split"))
            rule.min_samples_split = oj.at("min_samples_split").get<std::vector<int>>();
        overrides.push_back(std::move(rule));
    }
    std::optional<std::vector<double>> probs;
    if (j.contains("template_probs") && !j.at("template_probs").is_null())
        probs = j.at("template_probs").get<std::vector<double>>();
    const auto seed = j.value("seed", std::uint64_t{0});
    return generate_heterogeneous_learners(templates, overrides, total_samples, probs, seed);
}

struct TrainOptions {
    std::string data, label_column, out;
    std::string link = "probit";
    int n_estimators = 100;
    double learning_rate = 0.1;
    std::optional<int> n_iter_no_change;
    double validation_fraction = 0.1;
    std::optional<int> cv_splits;
    std::string base_learner = "tree";
    std::optional<int> max_depth;
    int min_samples_leaf = 1;
    int min_samples_split = 2;
    std::string hetero_config;
    std::uint64_t seed = 0;
    char delimiter = ',';
    double theta_eta = 0.01;
    double theta_alpha = 0.5;
    double tol = 1e-4;
};

int run_train(const TrainOptions& opt) {
    auto dataset = load_csv(opt.data, opt.label_column, opt.delimiter);

    BoostConfig cfg;
    cfg.n_estimators = opt.n_estimators;
    cfg.learning_rate_g = opt.learning_rate;
    cfg.link = link_from_string(opt.link);
    cfg.n_iter_no_change = opt.n_iter_no_change;
    cfg.validation_fraction = opt.validation_fraction;
    cfg.cv_early_stopping_splits = opt.cv_splits;
    cfg.seed = opt.seed;
    cfg.line_search.initial_eta = opt.theta_eta;
    cfg.line_search.alpha = opt.theta_alpha;
    cfg.tol = opt.tol;
    if (!opt.hetero_config.empty()) {
        cfg.schedule = schedule_from_hetero_config(opt.hetero_config, opt.n_estimators);
    } else {
        RegressorSpec spec;
        spec.kind = learner_kind_from_string(opt.base_learner);
        spec.max_depth = opt.max_depth;
        spec.min_samples_leaf = opt.min_samples_leaf;
        spec.min_samples_split = opt.min_samples_split;
        cfg.schedule = {spec};
    }

    auto result = fit(dataset, cfg);
    save_model(result.model, opt.out);
    save_trace(result.trace, trace_path_for(opt.out));

    const double final_train = result.trace.records.empty() ? result.trace.initial_train_loss
                                                            : result.trace.records.back().train_loss;
    std::cout << "final_train_loss: " << final_train << "\n";
    std::cout << "n_fitted: " << result.model.n_fitted << "\n";
    if (cfg.n_iter_no_change) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : result.trace.records)
            if (r.validation_loss) best = std::min(best, *r.validation_loss);
        std::cout << "best_monitored_loss: " << best << "\n";
    }
    return 0;
}

int run_fetch(const std::string& color, const std::filesystem::path& cache_dir) {
    auto ds = load_wine_quality(wine_color_from_string(color), cache_dir);
    std::cout << "rows: " << ds.size() << "\n";
    std::cout << "features: " << ds.features.cols << "\n";
    std::cout << "classes: " << ds.num_classes << "\n";
    return 0;
}

int run_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path, const std::string& type,
                const std::string& label_column, bool original_scale, char delimiter) {
    auto model = load_model(model_path);

    Matrix features;
    long long offset = 0;
    if (!label_column.empty()) {
        auto ds = load_csv(data_path, label_column, delimiter);
        features = std::move(ds.features);
        offset = ds.label_offset;
    } else {
        if (original_scale)
            throw std::runtime_error("--original-scale requires --label-column to recover the label offset");
        features = load_feature_csv(data_path, delimiter);
    }

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write output file: " + out_path);
    out.precision(17);
    if (type == "labels") {
        auto labels = predict(model, features);
        out << "label\n";
        for (int v : labels) out << (original_scale ? v + offset : static_cast<long long>(v)) << "\n";
    } else if (type == "proba") {
        Matrix proba = predict_proba(model, features);
        for (std::size_t m = 0; m < proba.cols; ++m) out << (m ? "," : "") << "p" << m;
        out << "\n";
        for (std::size_t r = 0; r < proba.rows; ++r) {
            for (std::size_t m = 0; m < proba.cols; ++m) out << (m ? "," : "") << proba.at(r, m);
            out << "\n";
        }
    } else if (type == "latent") {
        auto g = decision_function(model, features);
        out << "latent\n";
        for (double v : g) out << v << "\n";
    } else {
        throw std::runtime_error("unknown prediction type '" + type + "'");
    }
    return 0;
}

int run_evaluate(const std::string& model_path, const std::string& data_path,
                 const std::string& label_column, const std::string& pred_type, char delimiter) {
    auto model = load_model(model_path);
    auto ds = load_csv(data_path, label_column, delimiter);

    std::vector<double> scores;
    if (pred_type == "latent") {
        scores = decision_function(model, ds.features);
    } else if (pred_type == "labels") {
        auto labels = predict(model, ds.features);
        scores.assign(labels.begin(), labels.end());
    } else {
        throw std::runtime_error("unknown pred-type '" + pred_type + "'");
    }
    auto result = concordance_index(ds.labels, scores);
    std::cout << "concordance: " << result.value << "\n";
    std::cout << "comparable_pairs: " << result.comparable_pairs << "\n";
    std::cout << "tied_pairs: " << result.tied_pairs << "\n";
    return 0;
}

int run_loss_curve(const std::string& trace_path, const std::string& out_path,
                   const std::string& plot_path) {
    auto trace = load_trace(trace_path);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write output file: " + out_path);
    out.precision(17);
    out << "iteration,train_loss,validation_loss,delta_g,delta_theta\n";
    for (const auto& r : trace.records) {
        out << r.iteration << "," << r.train_loss << ",";
        if (r.validation_loss) out << *r.validation_loss;
        out << "," << r.delta_g << "," << r.delta_theta << "\n";
    }
    if (!plot_path.empty()) render_loss_chart(trace, plot_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ordinal regression via gradient boosting under the cumulative-link model"};
    app.require_subcommand(1);
    std::cout.precision(12);

    // fetch-data
    auto* fetch = app.add_subcommand("fetch-data", "Download and cache a wine-quality dataset");
    std::string fetch_color;
    std::string fetch_cache = default_cache_dir().string();
    fetch->add_option("--color", fetch_color, "red or white")->required();
    fetch->add_option("--cache-dir", fetch_cache, "cache directory");

    // train
    auto* train = app.add_subcommand("train", "Fit a model and save it (trace saved alongside)");
    TrainOptions topt;
    train->add_option("--data", topt.data, "training CSV")->required();
    train->add_option("--label-column", topt.label_column, "name of the label column")->required();
    train->add_option("--out", topt.out, "output model file")->required();
    train->add_option("--link", topt.link, "probit|logit|cloglog");
    train->add_option("--n-estimators", topt.n_estimators, "boosting iterations");
    train->add_option("--learning-rate", topt.learning_rate, "shrinkage on g-updates");
    int patience = 0;
    auto* pat_opt = train->add_option("--n-iter-no-change", patience, "early-stopping patience");
    train->add_option("--validation-fraction", topt.validation_fraction, "holdout fraction");
    int cv_splits = 0;
    auto* cv_opt = train->add_option("--cv-splits", cv_splits, "folds for CV early stopping");
    train->add_option("--base-learner", topt.base_learner, "tree|constant");
    int max_depth = 0;
    auto* depth_opt = train->add_option("--max-depth", max_depth, "tree depth limit (omit for unlimited)");
    train->add_option("--min-samples-leaf", topt.min_samples_leaf);
    train->add_option("--min-samples-split", topt.min_samples_split);
    train->add_option("--hetero-config", topt.hetero_config, "heterogeneous schedule config file");
    train->add_option("--seed", topt.seed, "random seed");
    train->add_option("--delimiter", topt.delimiter, "CSV delimiter");
    train->add_option("--theta-eta", topt.theta_eta, "initial threshold line-search step");
    train->add_option("--theta-alpha", topt.theta_alpha, "line-search shrink factor");
    train->add_option("--tol", topt.tol, "minimum improvement counted as progress");

    // predict
    auto* pred = app.add_subcommand("predict", "Write per-row predictions as CSV");
    std::string p_model, p_data, p_out, p_type = "labels", p_label_column;
    bool p_original = false;
    char p_delim = ',';
    pred->add_option("--model", p_model)->required();
    pred->add_option("--data", p_data)->required();
    pred->add_option("--out", p_out)->required();
    pred->add_option("--type", p_type, "labels|proba|latent");
    pred->add_option("--label-column", p_label_column, "label column to drop from the features");
    pred->add_flag("--original-scale", p_original, "report labels on the original scale");
    pred->add_option("--delimiter", p_delim);

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "Concordance index of a model on a dataset");
    std::string e_model, e_data, e_label_column, e_pred_type = "latent";
    char e_delim = ',';
    eval->add_option("--model", e_model)->required();
    eval->add_option("--data", e_data)->required();
    eval->add_option("--label-column", e_label_column)->required();
    eval->add_option("--pred-type", e_pred_type, "latent|labels");
    eval->add_option("--delimiter", e_delim);

    // loss-curve
    auto* curve = app.add_subcommand("loss-curve", "Export a training trace as CSV (optionally a chart)");
    std::string c_trace, c_out, c_plot;
    curve->add_option("--model-trace", c_trace)->required();
    curve->add_option("--out", c_out)->required();
    curve->add_option("--plot", c_plot, "write a PNG chart");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (*fetch) return run_fetch(fetch_color, fetch_cache);
        if (*train) {
            if (*pat_opt) topt.n_iter_no_change = patience;
            if (*cv_opt) topt.cv_splits = cv_splits;
            if (*depth_opt) topt.max_depth = max_depth;
            return run_train(topt);
        }
        if (*pred) return run_predict(p_model, p_data, p_out, p_type, p_label_column, p_original, p_delim);
        if (*eval) return run_evaluate(e_model, e_data, e_label_column, e_pred_type, e_delim);
        if (*curve) return run_loss_curve(c_trace, c_out, c_plot);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
