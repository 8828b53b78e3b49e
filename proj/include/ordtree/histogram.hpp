#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ordtree {

/// Per-class pattern counts at a node. Class indices are 1-based: class q of
/// a Q-class problem lives at counts()[q - 1].
class ClassHistogram {
public:
    ClassHistogram() = default;

    explicit ClassHistogram(int num_classes) : counts_(check_classes(num_classes), 0) {}

    explicit ClassHistogram(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
        check_classes(static_cast<int>(counts_.size()));
        for (const auto c : counts_) {
            if (c < 0) throw std::invalid_argument("ClassHistogram: negative count");
            total_ += c;
        }
    }

    static ClassHistogram from_labels(std::span<const int> labels, int num_classes) {
        ClassHistogram h(num_classes);
        for (const int y : labels) h.add(y);
        return h;
    }

    int num_classes() const { return static_cast<int>(counts_.size()); }
    std::int64_t total() const { return total_; }
    bool empty() const { return total_ == 0; }

    std::int64_t count(int q) const { return counts_[index(q)]; }

    void add(int q, std::int64_t n = 1) {
        counts_[index(q)] += n;
        total_ += n;
    }

    void remove(int q, std::int64_t n = 1) {
        auto& c = counts_[index(q)];
        if (c < n) throw std::invalid_argument("ClassHistogram: count would go negative");
        c -= n;
        total_ -= n;
    }

    // \hat p_{q|m}; only defined on non-empty histograms.
    double relative_frequency(int q) const {
        require_nonempty();
        return static_cast<double>(count(q)) / static_cast<double>(total_);
    }

    // \hat c_{q|m} = sum_{j<=q} \hat p_{j|m}; non-decreasing, ends at 1.
    double cumulative_frequency(int q) const {
        require_nonempty();
        std::int64_t acc = 0;
        for (int j = 1; j <= q; ++j) acc += count(j);
        return static_cast<double>(acc) / static_cast<double>(total_);
    }

    // Mode class; ties resolved to the lowest class index.
    int mode_lowest() const {
        require_nonempty();
        int best = 1;
        for (int q = 2; q <= num_classes(); ++q) {
            if (count(q) > count(best)) best = q;
        }
        return best;
    }

    bool pure() const {
        if (total_ == 0) return false;
        for (const auto c : counts_) {
            if (c == total_) return true;
        }
        return false;
    }

    const std::vector<std::int64_t>& counts() const { return counts_; }

    ClassHistogram& operator+=(const ClassHistogram& other) {
        if (other.num_classes() != num_classes())
            throw std::invalid_argument("ClassHistogram: class count mismatch");
        for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
        total_ += other.total_;
        return *this;
    }

    friend ClassHistogram operator+(ClassHistogram a, const ClassHistogram& b) { return a += b; }

    friend bool operator==(const ClassHistogram&, const ClassHistogram&) = default;

    void require_nonempty() const {
        if (total_ == 0) throw std::invalid_argument("ClassHistogram: empty histogram");
    }

private:
    static int check_classes(int num_classes) {
        if (num_classes < 1) throw std::invalid_argument("ClassHistogram: num_classes must be >= 1");
        return num_classes;
    }

    std::size_t index(int q) const {
        if (q < 1 || q > num_classes())
            throw std::out_of_range("ClassHistogram: class index " + std::to_string(q) +
                                    " outside 1.." + std::to_string(num_classes()));
        return static_cast<std::size_t>(q - 1);
    }

    std::vector<std::int64_t> counts_;
    std::int64_t total_ = 0;
};

/// Strictly increasing numeric scores v(C_q) for the ordered classes.
/// An empty score vector means the default assignment v(C_q) = q.
class ScoreMap {
public:
    ScoreMap() = default;

    explicit ScoreMap(std::vector<double> values) : values_(std::move(values)) {
        for (std::size_t i = 1; i < values_.size(); ++i) {
            if (!(values_[i - 1] < values_[i]))
                throw std::invalid_argument("ScoreMap: scores must be strictly increasing");
        }
    }

    bool is_default() const { return values_.empty(); }

    double operator()(int q) const {
        if (values_.empty()) return static_cast<double>(q);
        if (q < 1 || q > static_cast<int>(values_.size()))
            throw std::out_of_range("ScoreMap: class index out of range");
        return values_[static_cast<std::size_t>(q - 1)];
    }

    friend bool operator==(const ScoreMap&, const ScoreMap&) = default;

private:
    std::vector<double> values_;
};

}  // namespace ordtree
