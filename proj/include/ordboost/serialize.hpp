#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ordboost/boosting.hpp"

namespace ordboost {

inline constexpr int kModelSchemaVersion = 1;
inline constexpr int kTraceSchemaVersion = 1;

namespace detail {

inline nlohmann::json spec_to_json(const RegressorSpec& spec) {
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    if (spec.max_depth)
        j["max_depth"] = *spec.max_depth;
    else
        j["max_depth"] = nullptr;
    j["min_samples_leaf"] = spec.min_samples_leaf;
    j["min_samples_split"] = spec.min_samples_split;
    return j;
}

inline RegressorSpec spec_from_json(const nlohmann::json& j) {
    RegressorSpec spec;
    spec.kind = learner_kind_from_string(j.at("kind").get<std::string>());
    if (!j.at("max_depth").is_null()) spec.max_depth = j.at("max_depth").get<int>();
    spec.min_samples_leaf = j.at("min_samples_leaf").get<int>();
    spec.min_samples_split = j.at("min_samples_split").get<int>();
    return spec;
}

inline nlohmann::json parse_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(std::string("cannot open ") + what + " file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed ") + what + " file " + path.string() + ": " +
                                 e.what());
    }
    return j;
}

}  // namespace detail

// Versioned JSON model format; trees stored as flat node lists with explicit
// child indices. Doubles round-trip bit-exactly.
inline void save_model(const OrdinalBoostModel& model, const std::filesystem::path& path) {
    nlohmann::json j;
    j["schema_version"] = kModelSchemaVersion;
    j["link"] = to_string(model.link);
    j["num_classes"] = model.num_classes;
    j["g0"] = model.g0;
    j["learning_rate_g"] = model.learning_rate_g;
    j["thresholds"] = model.thresholds.cuts;
    j["n_fitted"] = model.n_fitted;
    j["n_features"] = model.n_features;
    nlohmann::json learners = nlohmann::json::array();
    for (const auto& learner : model.learners) {
        nlohmann::json lj = detail::spec_to_json(learner.spec());
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& nd : learner.nodes())
            nodes.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.value});
        lj["nodes"] = std::move(nodes);
        learners.push_back(std::move(lj));
    }
    j["learners"] = std::move(learners);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing model file: " + path.string());
}

inline OrdinalBoostModel load_model(const std::filesystem::path& path) {
    nlohmann::json j = detail::parse_file(path, "model");
    try {
        const int version = j.at("schema_version").get<int>();
        if (version != kModelSchemaVersion)
            throw std::runtime_error("incompatible model schema version " + std::to_string(version) +
                                     " (expected " + std::to_string(kModelSchemaVersion) + ")");
        OrdinalBoostModel model;
        model.link = link_from_string(j.at("link").get<std::string>());
        model.num_classes = j.at("num_classes").get<int>();
        model.g0 = j.at("g0").get<double>();
        model.learning_rate_g = j.at("learning_rate_g").get<double>();
        model.thresholds.num_classes = model.num_classes;
        model.thresholds.cuts = j.at("thresholds").get<std::vector<double>>();
        model.thresholds.validate();
        model.n_fitted = j.at("n_fitted").get<int>();
        model.n_features = j.at("n_features").get<std::size_t>();
        for (const auto& lj : j.at("learners")) {
            RegressorSpec spec = detail::spec_from_json(lj);
            std::vector<TreeNode> nodes;
            for (const auto& nj : lj.at("nodes")) {
                TreeNode nd;
                nd.feature = nj.at(0).get<int>();
                nd.threshold = nj.at(1).get<double>();
                nd.left = nj.at(2).get<int>();
                nd.right = nj.at(3).get<int>();
                nd.value = nj.at(4).get<double>();
                nodes.push_back(nd);
            }
            model.learners.emplace_back(spec, std::move(nodes), model.n_features);
        }
        if (model.n_fitted > static_cast<int>(model.learners.size()))
            throw std::runtime_error("model file inconsistent: n_fitted exceeds learner count");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed model file " + path.string() + ": " + e.what());
    }
}

inline void save_trace(const LossTrace& trace, const std::filesystem::path& path) {
    nlohmann::json j;
    j["schema_version"] = kTraceSchemaVersion;
    j["initial_train_loss"] = trace.initial_train_loss;
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : trace.records) {
        nlohmann::json rj;
        rj["iteration"] = r.iteration;
        rj["train_loss"] = r.train_loss;
        if (r.validation_loss)
            rj["validation_loss"] = *r.validation_loss;
        else
            rj["validation_loss"] = nullptr;
        rj["delta_g"] = r.delta_g;
        rj["delta_theta"] = r.delta_theta;
        records.push_back(std::move(rj));
    }
    j["records"] = std::move(records);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file: " + path.string());
    out << j.dump(2) << '\n';
}

inline LossTrace load_trace(const std::filesystem::path& path) {
    nlohmann::json j = detail::parse_file(path, "trace");
    try {
        const int version = j.at("schema_version").get<int>();
        if (version != kTraceSchemaVersion)
            throw std::runtime_error("incompatible trace schema version " + std::to_string(version));
        LossTrace trace;
        trace.initial_train_loss = j.at("initial_train_loss").get<double>();
        for (const auto& rj : j.at("records")) {
            TraceRecord r;
            r.iteration = rj.at("iteration").get<int>();
            r.train_loss = rj.at("train_loss").get<double>();
            if (!rj.at("validation_loss").is_null())
                r.validation_loss = rj.at("validation_loss").get<double>();
            r.delta_g = rj.at("delta_g").get<double>();
            r.delta_theta = rj.at("delta_theta").get<double>();
            trace.records.push_back(r);
        }
        return trace;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed trace file " + path.string() + ": " + e.what());
    }
}

}  // namespace ordboost
