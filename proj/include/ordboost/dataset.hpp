#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordboost/matrix.hpp"
#include "ordboost/rng.hpp"

namespace ordboost {

struct OrdinalDataset {
    Matrix features;
    std::vector<int> labels;             // in {0..num_classes-1}
    std::vector<std::string> feature_names;
    int num_classes = 0;
    long long label_offset = 0;          // original label = stored label + offset

    std::size_t size() const { return labels.size(); }

    OrdinalDataset subset(const std::vector<std::size_t>& idx) const {
        OrdinalDataset out;
        out.features = features.take_rows(idx);
        out.labels.reserve(idx.size());
        for (std::size_t i : idx) out.labels.push_back(labels[i]);
        out.feature_names = feature_names;
        out.num_classes = num_classes;
        out.label_offset = label_offset;
        return out;
    }

    std::vector<long long> class_counts() const {
        std::vector<long long> counts(static_cast<std::size_t>(num_classes), 0);
        for (int y : labels) counts[static_cast<std::size_t>(y)]++;
        return counts;
    }
};

namespace detail {

inline std::string strip(std::string s) {
    auto issp = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && issp(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && issp(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

inline std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, delimiter)) cells.push_back(strip(cell));
    if (!line.empty() && line.back() == delimiter) cells.emplace_back();
    return cells;
}

// Locale-independent double parse; throws with the cell location on failure.
inline double parse_cell(const std::string& cell, std::size_t line_no, std::size_t col_no,
                         const std::string& col_name) {
    if (cell.empty())
        throw std::runtime_error("CSV parse error: blank cell at line " + std::to_string(line_no) +
                                 ", column " + std::to_string(col_no + 1) + " ('" + col_name + "')");
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value))
        throw std::runtime_error("CSV parse error: non-numeric cell '" + cell + "' at line " +
                                 std::to_string(line_no) + ", column " + std::to_string(col_no + 1) +
                                 " ('" + col_name + "')");
    return value;
}

}  // namespace detail

// Generic CSV loader: all non-label columns become features, labels are
// shifted so the minimum observed label is 0 (shift recorded in
// label_offset).
inline OrdinalDataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                               char delimiter = ',') {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());

    std::string line;
    if (!std::getline(in, line) || detail::strip(line).empty())
        throw std::runtime_error("CSV parse error: empty file: " + path.string());

    const std::vector<std::string> header = detail::split_line(line, delimiter);
    std::size_t label_col = header.size();
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == label_column) label_col = c;
    if (label_col == header.size())
        throw std::runtime_error("CSV parse error: label column '" + label_column + "' not found in " +
                                 path.string());

    OrdinalDataset ds;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != label_col) ds.feature_names.push_back(header[c]);

    std::vector<double> raw_labels;
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::strip(line).empty()) continue;
        const auto cells = detail::split_line(line, delimiter);
        if (cells.size() != header.size())
            throw std::runtime_error("CSV parse error: line " + std::to_string(line_no) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(header.size()));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            double v = detail::parse_cell(cells[c], line_no, c, header[c]);
            if (c == label_col) {
                if (std::abs(v - std::round(v)) > 1e-9)
                    throw std::runtime_error("CSV parse error: label value '" + cells[c] + "' at line " +
                                             std::to_string(line_no) + " is not an integer");
                raw_labels.push_back(std::round(v));
            } else {
                values.push_back(v);
            }
        }
    }
    if (raw_labels.empty()) throw std::runtime_error("CSV parse error: no data rows in " + path.string());

    const double min_label = *std::min_element(raw_labels.begin(), raw_labels.end());
    const double max_label = *std::max_element(raw_labels.begin(), raw_labels.end());
    ds.label_offset = static_cast<long long>(min_label);
    ds.num_classes = static_cast<int>(max_label - min_label) + 1;
    ds.labels.reserve(raw_labels.size());
    for (double v : raw_labels) ds.labels.push_back(static_cast<int>(v - min_label));

    ds.features.rows = raw_labels.size();
    ds.features.cols = header.size() - 1;
    ds.features.data = std::move(values);
    return ds;
}

// Feature-only CSV: every column is parsed as a real-valued feature.
inline Matrix load_feature_csv(const std::filesystem::path& path, char delimiter = ',') {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || detail::strip(line).empty())
        throw std::runtime_error("CSV parse error: empty file: " + path.string());
    const std::vector<std::string> header = detail::split_line(line, delimiter);

    Matrix features;
    features.cols = header.size();
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::strip(line).empty()) continue;
        const auto cells = detail::split_line(line, delimiter);
        if (cells.size() != header.size())
            throw std::runtime_error("CSV parse error: line " + std::to_string(line_no) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(header.size()));
        for (std::size_t c = 0; c < cells.size(); ++c)
            features.data.push_back(detail::parse_cell(cells[c], line_no, c, header[c]));
        ++features.rows;
    }
    if (features.rows == 0) throw std::runtime_error("CSV parse error: no data rows in " + path.string());
    return features;
}

namespace detail {

// Per-class index lists, classes in ascending order, shuffled with `rng`.
inline std::vector<std::vector<std::size_t>> shuffled_class_indices(const std::vector<int>& labels,
                                                                    int num_classes, Rng& rng) {
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(num_classes));
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_class[static_cast<std::size_t>(labels[i])].push_back(i);
    for (auto& v : by_class) rng.shuffle(v);
    return by_class;
}

}  // namespace detail

// Stratified train/test split. Per-class test counts start from
// round(class_count * test_fraction) and are adjusted so the totals match
// round(N * test_fraction); singleton classes always go to train.
inline std::pair<OrdinalDataset, OrdinalDataset> stratified_split(const OrdinalDataset& dataset,
                                                                  double test_fraction,
                                                                  std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("stratified_split: test_fraction must be in (0,1)");
    Rng rng(seed);
    auto by_class = detail::shuffled_class_indices(dataset.labels, dataset.num_classes, rng);

    const auto n = static_cast<double>(dataset.size());
    const long long target_total = std::llround(n * test_fraction);

    struct ClassPlan {
        std::size_t cls;
        long long test_count;
        double remainder;
        std::size_t size;
    };
    std::vector<ClassPlan> plans;
    long long total = 0;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        const auto sz = by_class[c].size();
        if (sz == 0) continue;
        double exact = static_cast<double>(sz) * test_fraction;
        long long cnt = sz <= 1 ? 0 : std::llround(exact);
        cnt = std::min<long long>(cnt, static_cast<long long>(sz) - 1);
        plans.push_back({c, cnt, exact - static_cast<double>(cnt), sz});
        total += cnt;
    }
    // Largest-remainder adjustment toward the target total.
    while (total != target_total) {
        const bool add = total < target_total;
        ClassPlan* pick = nullptr;
        for (auto& p : plans) {
            if (add && (p.size <= 1 || p.test_count >= static_cast<long long>(p.size) - 1)) continue;
            if (!add && p.test_count == 0) continue;
            if (!pick || (add ? p.remainder > pick->remainder : p.remainder < pick->remainder)) pick = &p;
        }
        if (!pick) break;  // cannot adjust further
        pick->test_count += add ? 1 : -1;
        pick->remainder += add ? -1.0 : 1.0;
        total += add ? 1 : -1;
    }

    std::vector<std::size_t> train_idx, test_idx;
    for (const auto& p : plans) {
        const auto& idx = by_class[p.cls];
        for (std::size_t i = 0; i < idx.size(); ++i)
            (i < static_cast<std::size_t>(p.test_count) ? test_idx : train_idx).push_back(idx[i]);
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    return {dataset.subset(train_idx), dataset.subset(test_idx)};
}

// Stratified K-fold assignment: per class, shuffled indices dealt round-robin.
// Returns fold id per row.
inline std::vector<int> stratified_kfold(const std::vector<int>& labels, int num_classes, int k,
                                         std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
    Rng rng(seed);
    auto by_class = detail::shuffled_class_indices(labels, num_classes, rng);
    std::vector<int> fold(labels.size(), 0);
    int next = 0;
    for (const auto& idx : by_class)
        for (std::size_t i : idx) {
            fold[i] = next;
            next = (next + 1) % k;
        }
    return fold;
}

}  // namespace ordboost
