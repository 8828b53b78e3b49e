#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ordtree/csv.hpp"
#include "ordtree/histogram.hpp"
#include "ordtree/rng.hpp"

namespace ordtree {

/// Pooled ordinal dataset: train rows first, then test rows. Labels are
/// normalised to 1..Q preserving the order of the on-disk codes.
struct Dataset {
    std::string name;
    int num_features = 0;
    int num_classes = 0;
    std::vector<double> features;  // row-major, num_rows() x num_features
    std::vector<int> labels;       // 1..num_classes
    std::size_t n_train = 0;       // original file sizes, before reshuffling
    std::size_t n_test = 0;
    std::vector<std::int64_t> label_codes;  // original code for class q at [q-1]

    std::size_t num_rows() const { return labels.size(); }

    double feature(std::size_t row, int k) const {
        return features[row * static_cast<std::size_t>(num_features) + static_cast<std::size_t>(k)];
    }

    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * static_cast<std::size_t>(num_features),
                static_cast<std::size_t>(num_features)};
    }

    ClassHistogram class_histogram() const {
        return ClassHistogram::from_labels(labels, num_classes);
    }
};

struct LoadOptions {
    // When set, on-disk label codes must fit the declared range (1..Q, or
    // 0..Q-1 for 0-based files). When unset, Q is inferred from the distinct
    // codes and sparse codes are collapsed order-preservingly.
    std::optional<int> num_classes;
};

namespace detail {

struct RawFile {
    std::vector<std::vector<double>> rows;   // feature cells per row
    std::vector<std::int64_t> label_codes;   // last column per row
    int num_columns = 0;
};

[[noreturn]] inline void parse_error(const std::string& path, std::size_t line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

inline RawFile read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    RawFile raw;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        const auto cells = csv::split_line(line);
        if (first_content_row) {
            // Optional header: any non-numeric cell in the first row marks it.
            const bool numeric = std::all_of(cells.begin(), cells.end(), [](std::string_view c) {
                return csv::parse_double(c).has_value();
            });
            first_content_row = false;
            if (!numeric) continue;
        }
        if (raw.num_columns == 0) {
            raw.num_columns = static_cast<int>(cells.size());
            if (raw.num_columns < 2)
                parse_error(path, line_no, "need at least one feature column and a label column");
        } else if (static_cast<int>(cells.size()) != raw.num_columns) {
            parse_error(path, line_no, "malformed row: expected " + std::to_string(raw.num_columns) +
                                           " columns, got " + std::to_string(cells.size()));
        }
        std::vector<double> row(cells.size() - 1);
        for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
            const auto value = csv::parse_double(cells[i]);
            if (!value)
                parse_error(path, line_no, "non-numeric feature cell '" + std::string(cells[i]) +
                                               "' in column " + std::to_string(i + 1));
            if (!std::isfinite(*value))
                parse_error(path, line_no, "non-finite feature value in column " + std::to_string(i + 1));
            row[i] = *value;
        }
        const auto code = csv::parse_int(cells.back());
        if (!code)
            parse_error(path, line_no, "label '" + std::string(cells.back()) + "' is not an integer");
        raw.rows.push_back(std::move(row));
        raw.label_codes.push_back(*code);
    }
    if (raw.rows.empty()) throw std::runtime_error(path + ": no data rows");
    return raw;
}

}  // namespace detail

inline Dataset load_dataset(const std::string& train_path, const std::string& test_path,
                            const LoadOptions& options = {}, const std::string& name = "") {
    const auto train = detail::read_csv_file(train_path);
    const auto test = detail::read_csv_file(test_path);
    if (train.num_columns != test.num_columns)
        throw std::runtime_error(test_path + ": column count " + std::to_string(test.num_columns) +
                                 " does not match " + train_path + " (" +
                                 std::to_string(train.num_columns) + ")");

    Dataset d;
    d.name = name;
    d.num_features = train.num_columns - 1;
    d.n_train = train.rows.size();
    d.n_test = test.rows.size();
    d.features.reserve((d.n_train + d.n_test) * static_cast<std::size_t>(d.num_features));
    std::vector<std::int64_t> codes;
    codes.reserve(d.n_train + d.n_test);
    for (const auto* part : {&train, &test}) {
        for (const auto& row : part->rows)
            d.features.insert(d.features.end(), row.begin(), row.end());
        codes.insert(codes.end(), part->label_codes.begin(), part->label_codes.end());
    }

    if (options.num_classes) {
        const int q = *options.num_classes;
        if (q < 2) throw std::runtime_error("declared number of classes must be >= 2");
        const bool zero_based =
            std::any_of(codes.begin(), codes.end(), [](std::int64_t c) { return c == 0; });
        const std::int64_t lo = zero_based ? 0 : 1;
        const std::int64_t hi = zero_based ? q - 1 : q;
        for (std::size_t i = 0; i < codes.size(); ++i) {
            if (codes[i] < lo || codes[i] > hi) {
                const auto& path = i < d.n_train ? train_path : test_path;
                throw std::runtime_error(path + ": label " + std::to_string(codes[i]) +
                                         " out of range [" + std::to_string(lo) + ", " +
                                         std::to_string(hi) + "] for " + std::to_string(q) +
                                         " declared classes");
            }
        }
        d.num_classes = q;
        d.label_codes.resize(static_cast<std::size_t>(q));
        for (int c = 0; c < q; ++c) d.label_codes[static_cast<std::size_t>(c)] = lo + c;
        d.labels.reserve(codes.size());
        for (const auto c : codes) d.labels.push_back(static_cast<int>(c - lo + 1));
    } else {
        // Infer Q from the distinct codes, collapsing gaps order-preservingly.
        std::map<std::int64_t, int> remap;
        for (const auto c : codes) remap.emplace(c, 0);
        if (remap.size() < 2)
            throw std::runtime_error(train_path + ": fewer than 2 classes after pooling");
        int next = 1;
        for (auto& [code, mapped] : remap) mapped = next++;
        d.num_classes = static_cast<int>(remap.size());
        d.label_codes.reserve(remap.size());
        for (const auto& [code, mapped] : remap) d.label_codes.push_back(code);
        d.labels.reserve(codes.size());
        for (const auto c : codes) d.labels.push_back(remap.at(c));
    }
    return d;
}

// Most represented class count over least represented, train+test pooled.
inline double imbalance_ratio(const Dataset& d) {
    const auto hist = d.class_histogram();
    std::int64_t lo = hist.total(), hi = 0;
    for (int q = 1; q <= d.num_classes; ++q) {
        lo = std::min(lo, hist.count(q));
        hi = std::max(hi, hist.count(q));
    }
    if (lo == 0)
        throw std::runtime_error(d.name + ": imbalance ratio undefined, class with zero patterns");
    return static_cast<double>(hi) / static_cast<double>(lo);
}

struct ManifestEntry {
    std::string name;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    int num_classes = 0;
    int num_features = 0;
    double imbalance_ratio = 1.0;
};

inline std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open manifest");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": invalid JSON: " + e.what());
    }
    if (!doc.is_array()) throw std::runtime_error(path + ": manifest must be a JSON array");
    std::vector<ManifestEntry> entries;
    entries.reserve(doc.size());
    for (const auto& item : doc) {
        ManifestEntry e;
        e.name = item.at("name").get<std::string>();
        e.n_train = item.at("n_train").get<std::size_t>();
        e.n_test = item.at("n_test").get<std::size_t>();
        e.num_classes = item.at("Q").get<int>();
        e.num_features = item.at("K").get<int>();
        e.imbalance_ratio = item.at("imbalance_ratio").get<double>();
        if (e.imbalance_ratio < 1.0)
            throw std::runtime_error(path + ": dataset " + e.name + ": imbalance_ratio < 1");
        entries.push_back(std::move(e));
    }
    return entries;
}

inline void validate_manifest(const ManifestEntry& entry, const Dataset& d) {
    std::ostringstream problems;
    if (d.n_train != entry.n_train)
        problems << " n_train=" << d.n_train << " (manifest " << entry.n_train << ")";
    if (d.n_test != entry.n_test)
        problems << " n_test=" << d.n_test << " (manifest " << entry.n_test << ")";
    if (d.num_classes != entry.num_classes)
        problems << " Q=" << d.num_classes << " (manifest " << entry.num_classes << ")";
    if (d.num_features != entry.num_features)
        problems << " K=" << d.num_features << " (manifest " << entry.num_features << ")";
    const double ir = imbalance_ratio(d);
    if (std::abs(ir - entry.imbalance_ratio) > 1e-3 * std::max(1.0, entry.imbalance_ratio))
        problems << " imbalance_ratio=" << ir << " (manifest " << entry.imbalance_ratio << ")";
    const std::string text = problems.str();
    if (!text.empty())
        throw std::runtime_error(entry.name + ": loaded data does not match manifest:" + text);
}

/// Seeded stratified train/test split of the pooled rows.
struct PartitionPlan {
    std::uint64_t seed = 0;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    std::vector<std::string> warnings;
};

inline PartitionPlan make_partition(const Dataset& d, std::size_t n_train, std::uint64_t seed) {
    const std::size_t n = d.num_rows();
    if (n_train == 0 || n_train >= n)
        throw std::invalid_argument(d.name + ": n_train must be in (0, N)");

    const int num_classes = d.num_classes;
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(num_classes));
    for (std::size_t i = 0; i < n; ++i)
        members[static_cast<std::size_t>(d.labels[i] - 1)].push_back(i);
    for (int q = 1; q <= num_classes; ++q) {
        if (members[static_cast<std::size_t>(q - 1)].empty())
            throw std::invalid_argument(d.name + ": class " + std::to_string(q) + " has no patterns");
    }

    // Largest-remainder allocation of per-class train counts.
    std::vector<double> quota(static_cast<std::size_t>(num_classes));
    std::vector<std::size_t> take(static_cast<std::size_t>(num_classes));
    std::size_t assigned = 0;
    for (int q = 0; q < num_classes; ++q) {
        quota[q] = static_cast<double>(n_train) * static_cast<double>(members[q].size()) /
                   static_cast<double>(n);
        take[q] = static_cast<std::size_t>(quota[q]);
        assigned += take[q];
    }
    std::vector<int> order(static_cast<std::size_t>(num_classes));
    for (int q = 0; q < num_classes; ++q) order[q] = q;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return quota[a] - std::floor(quota[a]) > quota[b] - std::floor(quota[b]);
    });
    for (std::size_t i = 0; assigned < n_train; ++i) {
        ++take[static_cast<std::size_t>(order[i % order.size()])];
        ++assigned;
    }

    PartitionPlan plan;
    plan.seed = seed;

    // A class with a single pooled pattern always goes to train.
    std::size_t excess = 0;
    for (int q = 0; q < num_classes; ++q) {
        if (members[q].size() == 1) {
            if (take[q] == 0) {
                take[q] = 1;
                ++excess;
            }
            plan.warnings.push_back("class " + std::to_string(q + 1) +
                                    " has a single pattern; assigned to train");
        }
    }
    while (excess > 0) {
        // Rebalance from the most over-quota class that can spare a pattern
        // without going empty.
        int donor = -1;
        double best_over = -1.0;
        for (int q = 0; q < num_classes; ++q) {
            if (take[q] < 2 || members[q].size() == 1) continue;
            const double over = static_cast<double>(take[q]) - quota[q];
            if (over > best_over) {
                best_over = over;
                donor = q;
            }
        }
        if (donor < 0)
            throw std::invalid_argument(d.name + ": n_train too small for a stratified split");
        --take[static_cast<std::size_t>(donor)];
        --excess;
    }

    for (int q = 0; q < num_classes; ++q) {
        if (take[q] == 0 && members[q].size() >= 2)
            throw std::invalid_argument(d.name + ": n_train=" + std::to_string(n_train) +
                                        " leaves class " + std::to_string(q + 1) +
                                        " empty in train");
    }

    Rng rng(mix64(fnv1a(d.name), mix64(seed, n_train)));
    for (int q = 0; q < num_classes; ++q) {
        auto pool = members[q];
        rng.shuffle(pool);
        plan.train_indices.insert(plan.train_indices.end(), pool.begin(), pool.begin() + take[q]);
        plan.test_indices.insert(plan.test_indices.end(), pool.begin() + take[q], pool.end());
    }
    std::sort(plan.train_indices.begin(), plan.train_indices.end());
    std::sort(plan.test_indices.begin(), plan.test_indices.end());
    return plan;
}

/// Seeded stratified k-fold split of `indices`; `labels` is the full label
/// vector the indices point into. Folds are disjoint, cover the input, and
/// per-class counts per fold stay within 1 of proportional.
inline std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const std::size_t> indices,
                                                              std::span<const int> labels, int k,
                                                              std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
    if (static_cast<std::size_t>(k) > indices.size())
        throw std::invalid_argument("stratified_kfold: k=" + std::to_string(k) + " exceeds " +
                                    std::to_string(indices.size()) + " indices");

    int num_classes = 0;
    for (const auto i : indices) num_classes = std::max(num_classes, labels[i]);
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(num_classes));
    for (const auto i : indices) members[static_cast<std::size_t>(labels[i] - 1)].push_back(i);

    Rng rng(mix64(seed, 0x6b666f6c64ull));  // domain-separate from make_partition
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    for (auto& pool : members) {
        if (pool.empty()) continue;
        rng.shuffle(pool);
        const std::size_t base = pool.size() / static_cast<std::size_t>(k);
        const std::size_t rem = pool.size() % static_cast<std::size_t>(k);
        // Hand the remainder to the currently smallest folds, so overall fold
        // sizes never spread by more than one.
        std::vector<int> by_size(static_cast<std::size_t>(k));
        for (int f = 0; f < k; ++f) by_size[f] = f;
        std::stable_sort(by_size.begin(), by_size.end(),
                         [&](int a, int b) { return folds[a].size() < folds[b].size(); });
        std::size_t next = 0;
        for (int rank = 0; rank < k; ++rank) {
            const auto f = static_cast<std::size_t>(by_size[static_cast<std::size_t>(rank)]);
            const std::size_t want = base + (static_cast<std::size_t>(rank) < rem ? 1 : 0);
            folds[f].insert(folds[f].end(), pool.begin() + next, pool.begin() + next + want);
            next += want;
        }
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

}  // namespace ordtree
