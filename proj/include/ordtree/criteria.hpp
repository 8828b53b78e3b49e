#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ordtree/histogram.hpp"

namespace ordtree {

enum class CriterionKind { gini, ig, ogini, wig, ri };

inline std::string_view criterion_name(CriterionKind kind) {
    switch (kind) {
        case CriterionKind::gini: return "gini";
        case CriterionKind::ig: return "ig";
        case CriterionKind::ogini: return "ogini";
        case CriterionKind::wig: return "wig";
        case CriterionKind::ri: return "ri";
    }
    throw std::invalid_argument("criterion_name: unknown kind");
}

inline std::optional<CriterionKind> parse_criterion(std::string_view name) {
    if (name == "gini") return CriterionKind::gini;
    if (name == "ig") return CriterionKind::ig;
    if (name == "ogini") return CriterionKind::ogini;
    if (name == "wig") return CriterionKind::wig;
    if (name == "ri") return CriterionKind::ri;
    return std::nullopt;
}

/// Which splitting criterion to use plus its hyperparameters. Gini, IG and
/// OGini are score-free; the score map feeds WIG and RI, and alpha is the
/// weight exponent of WIG only.
struct CriterionSpec {
    CriterionKind kind = CriterionKind::gini;
    double alpha = 1.0;
    ScoreMap scores;
    // Pair weight beta(C_q, C_j) for ranking impurity; empty means the
    // default v(C_q) - v(C_j).
    std::function<double(int, int)> beta;

    double score(int q) const { return scores(q); }

    bool beta_is_default() const { return !beta; }

    double pair_weight(int q, int j) const { return beta ? beta(q, j) : scores(q) - scores(j); }

    static CriterionSpec of(CriterionKind kind, double alpha = 1.0) {
        CriterionSpec spec;
        spec.kind = kind;
        spec.alpha = alpha;
        return spec;
    }
};

inline void validate(const CriterionSpec& spec) {
    if (!(spec.alpha > 0.0)) throw std::invalid_argument("CriterionSpec: alpha must be > 0");
    (void)spec.scores;  // strict monotonicity enforced at construction
}

// G = 1 - sum_q p_q^2, in [0, 1 - 1/Q].
inline double impurity_gini(const ClassHistogram& h) {
    h.require_nonempty();
    double sum_sq = 0.0;
    for (int q = 1; q <= h.num_classes(); ++q) {
        const double p = h.relative_frequency(q);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

// Shannon entropy in bits; 0*log(0) terms contribute 0.
inline double impurity_entropy(const ClassHistogram& h) {
    h.require_nonempty();
    double entropy = 0.0;
    for (int q = 1; q <= h.num_classes(); ++q) {
        const double p = h.relative_frequency(q);
        if (p > 0.0) entropy -= p * std::log2(p);
    }
    return entropy;
}

// OG = sum_q c_q (1 - c_q) over cumulative frequencies; the q = Q term is 0.
inline double impurity_ogini(const ClassHistogram& h) {
    h.require_nonempty();
    double og = 0.0;
    std::int64_t acc = 0;
    const double total = static_cast<double>(h.total());
    for (int q = 1; q <= h.num_classes(); ++q) {
        acc += h.count(q);
        const double c = static_cast<double>(acc) / total;
        og += c * (1.0 - c);
    }
    return og;
}

// w_q = |v(q) - v(mode)|^alpha normalised over all Q classes; the mode's
// weight is 0 and ties go to the lowest class index.
inline std::vector<double> class_weights(const ClassHistogram& h, const CriterionSpec& spec) {
    h.require_nonempty();
    const int mode = h.mode_lowest();
    const int num_classes = h.num_classes();
    std::vector<double> weights(static_cast<std::size_t>(num_classes));
    double denom = 0.0;
    for (int q = 1; q <= num_classes; ++q) {
        const double w = std::pow(std::abs(spec.score(q) - spec.score(mode)), spec.alpha);
        weights[static_cast<std::size_t>(q - 1)] = w;
        denom += w;
    }
    for (auto& w : weights) w /= denom;
    return weights;
}

// H_w = -sum_q w_q p_q log2(p_q), with weights recomputed on h itself.
inline double impurity_weighted_entropy(const ClassHistogram& h, const CriterionSpec& spec) {
    const std::vector<double> weights = class_weights(h, spec);
    double entropy = 0.0;
    for (int q = 1; q <= h.num_classes(); ++q) {
        const double p = h.relative_frequency(q);
        if (p > 0.0) entropy -= weights[static_cast<std::size_t>(q - 1)] * p * std::log2(p);
    }
    return entropy;
}

// RI = sum_{q=1..Q} sum_{j=1..q} beta(C_q, C_j) N_q N_j; unnormalised, so the
// value scales with N^2. An empty histogram has no pairs and returns 0.
inline double impurity_ranking(const ClassHistogram& h, const CriterionSpec& spec) {
    double ri = 0.0;
    for (int q = 1; q <= h.num_classes(); ++q) {
        if (h.count(q) == 0) continue;
        for (int j = 1; j <= q; ++j) {
            if (h.count(j) == 0) continue;
            const double w = spec.pair_weight(q, j);
            if (w != 0.0)
                ri += w * static_cast<double>(h.count(q)) * static_cast<double>(h.count(j));
        }
    }
    return ri;
}

inline double impurity(const CriterionSpec& spec, const ClassHistogram& h) {
    switch (spec.kind) {
        case CriterionKind::gini: return impurity_gini(h);
        case CriterionKind::ig: return impurity_entropy(h);
        case CriterionKind::ogini: return impurity_ogini(h);
        case CriterionKind::wig: return impurity_weighted_entropy(h, spec);
        case CriterionKind::ri: return impurity_ranking(h, spec);
    }
    throw std::invalid_argument("impurity: unknown criterion kind");
}

struct GainResult {
    double gain = 0.0;
    double parent_impurity = 0.0;
    double left_impurity = 0.0;
    double right_impurity = 0.0;
    double p_left = 0.0;
    double p_right = 0.0;
};

/// phi = I(parent) - (p_l I(left) + p_r I(right)), the common form of all
/// five splitting criteria. Requires parent = left + right and both children
/// non-empty.
inline GainResult split_gain(const CriterionSpec& spec, const ClassHistogram& parent,
                             const ClassHistogram& left, const ClassHistogram& right) {
    if (left.num_classes() != parent.num_classes() || right.num_classes() != parent.num_classes())
        throw std::invalid_argument("split_gain: class count mismatch");
    for (int q = 1; q <= parent.num_classes(); ++q) {
        if (parent.count(q) != left.count(q) + right.count(q))
            throw std::invalid_argument("split_gain: parent histogram != left + right");
    }
    if (left.empty() || right.empty()) throw std::invalid_argument("split_gain: empty child node");

    GainResult r;
    r.parent_impurity = impurity(spec, parent);
    r.left_impurity = impurity(spec, left);
    r.right_impurity = impurity(spec, right);
    r.p_left = static_cast<double>(left.total()) / static_cast<double>(parent.total());
    r.p_right = static_cast<double>(right.total()) / static_cast<double>(parent.total());
    r.gain = r.parent_impurity - (r.p_left * r.left_impurity + r.p_right * r.right_impurity);
    return r;
}

}  // namespace ordtree
