#pragma once

// Stratified k-fold cross-validation with pooled confusion matrices, the
// scalar metric set (accuracy, per-class TPR/FNR/PPV/FDR), ROC curves, and
// trapezoidal AUC. Folds are independent work units with derived seeds, so
// serial and parallel execution produce identical results.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adstage/cohort.hpp"
#include "adstage/model.hpp"
#include "adstage/random.hpp"

namespace adstage {

struct FoldPlan {
    std::size_t k = 5;
    std::vector<int> assignments;  // per-row fold index in [0, k)
    std::uint64_t seed = 0;
    bool stratified = true;
};

// Seeded shuffle then round-robin assignment; stratified mode round-robins
// within each class so per-class fold counts differ by at most one.
inline FoldPlan kfold(const std::vector<int>& labels, std::size_t k, std::uint64_t seed,
                      bool stratified) {
    if (k < 2) throw std::invalid_argument("kfold: k must be at least 2");
    if (labels.size() < k) throw std::invalid_argument("kfold: fewer rows than folds");
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.stratified = stratified;
    plan.assignments.assign(labels.size(), 0);

    if (!stratified) {
        std::vector<std::size_t> order(labels.size());
        std::iota(order.begin(), order.end(), 0);
        auto rng = make_rng(seed, 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t pos = 0; pos < order.size(); ++pos)
            plan.assignments[order[pos]] = static_cast<int>(pos % k);
        return plan;
    }

    const int max_label = *std::max_element(labels.begin(), labels.end());
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(max_label) + 1);
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_class[static_cast<std::size_t>(labels[i])].push_back(i);
    std::size_t counter = 0;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& members = by_class[c];
        if (members.empty()) continue;
        if (members.size() < k)
            throw std::invalid_argument("kfold: class " + std::to_string(c) +
                                        " has fewer members than folds");
        auto rng = make_rng(seed, c + 1);
        std::shuffle(members.begin(), members.end(), rng);
        for (auto i : members) plan.assignments[i] = static_cast<int>(counter++ % k);
    }
    return plan;
}

struct ConfusionMatrix {
    std::vector<std::vector<long long>> counts;  // rows true, columns predicted
    std::vector<std::string> class_names;

    static ConfusionMatrix zero(const std::vector<std::string>& names) {
        ConfusionMatrix cm;
        cm.class_names = names;
        cm.counts.assign(names.size(), std::vector<long long>(names.size(), 0));
        return cm;
    }

    void add(int true_class, int predicted_class) {
        counts[static_cast<std::size_t>(true_class)][static_cast<std::size_t>(predicted_class)]++;
    }

    long long total() const {
        long long t = 0;
        for (const auto& row : counts)
            for (auto v : row) t += v;
        return t;
    }

    long long row_sum(std::size_t c) const {
        long long t = 0;
        for (auto v : counts[c]) t += v;
        return t;
    }

    long long col_sum(std::size_t c) const {
        long long t = 0;
        for (const auto& row : counts) t += row[c];
        return t;
    }
};

struct ClassMetrics {
    std::string name;
    std::optional<double> tpr, fnr;  // undefined when the class never occurs
    std::optional<double> ppv, fdr;  // undefined when the class is never predicted
    std::optional<double> auc;       // one-vs-rest, filled when scores are available
};

struct MetricsReport {
    double accuracy = 0.0;
    std::vector<ClassMetrics> per_class;
    std::optional<double> auc;        // binary or designated-class one-vs-rest
    std::optional<double> auc_macro;  // mean of per-class one-vs-rest AUCs
};

// accuracy = trace/total; per-class TPR = diag/rowsum, FNR = 1 - TPR,
// PPV = diag/colsum, FDR = 1 - PPV. Empty rows or columns yield undefined
// markers, never zeros.
inline MetricsReport metrics(const ConfusionMatrix& cm) {
    const long long total = cm.total();
    if (total <= 0) throw std::invalid_argument("metrics: empty confusion matrix");
    MetricsReport rep;
    long long trace = 0;
    for (std::size_t c = 0; c < cm.counts.size(); ++c) trace += cm.counts[c][c];
    rep.accuracy = static_cast<double>(trace) / static_cast<double>(total);
    for (std::size_t c = 0; c < cm.counts.size(); ++c) {
        ClassMetrics m;
        m.name = cm.class_names[c];
        const long long rs = cm.row_sum(c);
        const long long cs = cm.col_sum(c);
        if (rs > 0) {
            m.tpr = static_cast<double>(cm.counts[c][c]) / static_cast<double>(rs);
            m.fnr = 1.0 - *m.tpr;
        }
        if (cs > 0) {
            m.ppv = static_cast<double>(cm.counts[c][c]) / static_cast<double>(cs);
            m.fdr = 1.0 - *m.ppv;
        }
        rep.per_class.push_back(std::move(m));
    }
    return rep;
}

struct RocPoint {
    double threshold;
    double fpr;
    double tpr;
};

struct RocCurve {
    std::vector<RocPoint> points;  // thresholds strictly decreasing, (0,0) to (1,1)
};

// Threshold sweep over descending unique scores with ties grouped.
// `positive` marks each row's membership in the positive class.
inline RocCurve roc(const std::vector<double>& scores, const std::vector<char>& positive) {
    if (scores.size() != positive.size()) throw std::invalid_argument("roc: length mismatch");
    long long n_pos = 0, n_neg = 0;
    for (char p : positive) (p ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("roc: need at least one positive and one negative");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });

    RocCurve curve;
    const double top = scores[order.front()];
    curve.points.push_back(RocPoint{top + 1.0, 0.0, 0.0});
    long long tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            (positive[order[i]] ? tp : fp)++;
            ++i;
        }
        curve.points.push_back(RocPoint{s, static_cast<double>(fp) / static_cast<double>(n_neg),
                                        static_cast<double>(tp) / static_cast<double>(n_pos)});
    }
    return curve;
}

// Trapezoidal area; equals the tie-adjusted Mann-Whitney statistic.
inline double auc(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        area += (b.fpr - a.fpr) * 0.5 * (a.tpr + b.tpr);
    }
    return area;
}

struct CvResult {
    ConfusionMatrix confusion;
    std::vector<std::vector<double>> scores;  // one held-out score vector per row
};

// For each fold: standardize on the training split, fit, score the held-out
// rows; confusion counts pool over folds and every row is scored exactly
// once. Per-fold seeds derive from the model seed, so results do not depend
// on execution order.
inline CvResult cross_validate(const ModelSpec& spec, const LabeledDataset& data,
                               const FoldPlan& plan, bool parallel = false) {
    if (plan.assignments.size() != data.size())
        throw std::invalid_argument("cross_validate: fold plan does not match dataset");
    CvResult result;
    result.confusion = ConfusionMatrix::zero(data.class_names);
    result.scores.assign(data.size(), {});

    std::vector<ConfusionMatrix> fold_cms(plan.k, ConfusionMatrix::zero(data.class_names));
    auto run_fold = [&](std::size_t fold) {
        std::vector<std::vector<double>> train_x;
        std::vector<int> train_y;
        std::vector<std::size_t> held_out;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (plan.assignments[i] == static_cast<int>(fold)) {
                held_out.push_back(i);
            } else {
                train_x.push_back(data.features[i]);
                train_y.push_back(data.labels[i]);
            }
        }
        if (train_x.empty() || held_out.empty()) return;  // empty fold: nothing to score
        try {
            const auto model =
                train_model(spec.with_seed(mix_seed(spec.seed, fold)), train_x, train_y,
                            data.class_names);
            for (auto i : held_out) {
                auto s = model.score(data.features[i]);
                const int pred = static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
                fold_cms[fold].add(data.labels[i], pred);
                result.scores[i] = std::move(s);
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("cross_validate: fold " + std::to_string(fold) +
                                     " failed: " + e.what());
        }
    };

    if (parallel) {
        std::vector<std::future<void>> futures;
        futures.reserve(plan.k);
        for (std::size_t fold = 0; fold < plan.k; ++fold)
            futures.push_back(std::async(std::launch::async, run_fold, fold));
        for (auto& f : futures) f.get();
    } else {
        for (std::size_t fold = 0; fold < plan.k; ++fold) run_fold(fold);
    }

    for (const auto& cm : fold_cms)
        for (std::size_t a = 0; a < cm.counts.size(); ++a)
            for (std::size_t b = 0; b < cm.counts.size(); ++b)
                result.confusion.counts[a][b] += cm.counts[a][b];
    return result;
}

// One-vs-rest ROC inputs for class `c` from per-row score vectors.
inline std::pair<std::vector<double>, std::vector<char>> one_vs_rest(
    const std::vector<std::vector<double>>& scores, const std::vector<int>& labels,
    std::size_t c) {
    std::vector<double> s(scores.size());
    std::vector<char> pos(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        s[i] = scores[i][c];
        pos[i] = labels[i] == static_cast<int>(c) ? 1 : 0;
    }
    return {std::move(s), std::move(pos)};
}

// Fills per-class AUCs, the macro average, and the report-level AUC
// (binary: positive class; multiclass: the designated class, NC by default).
inline void attach_auc(MetricsReport& rep, const std::vector<std::vector<double>>& scores,
                       const std::vector<int>& labels, std::size_t designated_class) {
    double macro = 0.0;
    std::size_t defined = 0;
    for (std::size_t c = 0; c < rep.per_class.size(); ++c) {
        const auto [s, pos] = one_vs_rest(scores, labels, c);
        const bool has_both = std::find(pos.begin(), pos.end(), 1) != pos.end() &&
                              std::find(pos.begin(), pos.end(), 0) != pos.end();
        if (!has_both) continue;
        const double a = auc(roc(s, pos));
        rep.per_class[c].auc = a;
        macro += a;
        ++defined;
    }
    if (defined > 0) rep.auc_macro = macro / static_cast<double>(defined);
    if (designated_class < rep.per_class.size()) rep.auc = rep.per_class[designated_class].auc;
}

}  // namespace adstage
