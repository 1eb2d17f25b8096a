#pragma once

// CART classification tree: greedy recursive partitioning minimizing weighted
// Gini impurity. Candidate thresholds are midpoints of consecutive distinct
// feature values; impurity ties break toward (lower feature index, lower
// threshold) so fits are deterministic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace adstage {

struct TreeConfig {
    int max_depth = -1;  // -1 means unlimited
    std::size_t min_leaf = 1;
};

class DecisionTree {
public:
    struct Node {
        int feature = -1;        // -1 marks a leaf
        double threshold = 0.0;  // left child takes value < threshold
        int left = -1;
        int right = -1;
        std::vector<double> distribution;  // leaf class distribution, sums to 1
    };

    static DecisionTree fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                            const std::vector<double>& weights, std::size_t n_classes,
                            const TreeConfig& cfg = {}) {
        if (x.empty() || x.size() != y.size() || x.size() != weights.size())
            throw std::invalid_argument("cart fit: shape mismatch");
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw std::invalid_argument("cart fit: negative sample weight");
            total += w;
        }
        if (!(total > 0.0)) throw std::invalid_argument("cart fit: weights sum to zero");

        DecisionTree t;
        t.n_classes_ = n_classes;
        std::vector<std::size_t> rows(x.size());
        std::iota(rows.begin(), rows.end(), 0);
        t.grow(x, y, weights, std::move(rows), 0, cfg);
        return t;
    }

    const std::vector<double>& leaf_distribution(const std::vector<double>& q) const {
        int node = 0;
        while (nodes_[static_cast<std::size_t>(node)].feature >= 0) {
            const auto& nd = nodes_[static_cast<std::size_t>(node)];
            node = q[static_cast<std::size_t>(nd.feature)] < nd.threshold ? nd.left : nd.right;
        }
        return nodes_[static_cast<std::size_t>(node)].distribution;
    }

    int predict(const std::vector<double>& q) const {
        const auto& dist = leaf_distribution(q);
        return static_cast<int>(std::max_element(dist.begin(), dist.end()) - dist.begin());
    }

    int depth() const { return depth_of(0); }

    const std::vector<Node>& nodes() const { return nodes_; }
    std::size_t n_classes() const { return n_classes_; }

private:
    std::vector<double> class_mass(const std::vector<int>& y, const std::vector<double>& w,
                                   const std::vector<std::size_t>& rows) const {
        std::vector<double> mass(n_classes_, 0.0);
        for (auto i : rows) mass[static_cast<std::size_t>(y[i])] += w[i];
        return mass;
    }

    static double gini(const std::vector<double>& mass, double total) {
        if (total <= 0.0) return 0.0;
        double g = 1.0;
        for (double m : mass) g -= (m / total) * (m / total);
        return g;
    }

    int make_leaf(std::vector<double> mass, double total) {
        Node leaf;
        if (total > 0.0) {
            for (auto& m : mass) m /= total;
        } else {
            // all-zero-weight subsets fall back to a uniform leaf
            mass.assign(n_classes_, 1.0 / static_cast<double>(n_classes_));
        }
        leaf.distribution = std::move(mass);
        nodes_.push_back(std::move(leaf));
        return static_cast<int>(nodes_.size() - 1);
    }

    int grow(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
             const std::vector<double>& w, std::vector<std::size_t> rows, int depth,
             const TreeConfig& cfg) {
        auto mass = class_mass(y, w, rows);
        const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
        const double node_impurity = gini(mass, total);

        const bool depth_capped = cfg.max_depth >= 0 && depth >= cfg.max_depth;
        int best_feature = -1;
        double best_threshold = 0.0;

        if (!depth_capped && node_impurity > 0.0 && rows.size() >= 2 * cfg.min_leaf) {
            double best_score = std::numeric_limits<double>::infinity();
            const std::size_t d = x[rows[0]].size();
            std::vector<std::size_t> sorted_rows(rows);
            for (std::size_t f = 0; f < d; ++f) {
                std::sort(sorted_rows.begin(), sorted_rows.end(),
                          [&](std::size_t a, std::size_t b) {
                              if (x[a][f] != x[b][f]) return x[a][f] < x[b][f];
                              return a < b;
                          });
                std::vector<double> left_mass(n_classes_, 0.0);
                double left_total = 0.0;
                std::size_t left_count = 0;
                for (std::size_t idx = 0; idx + 1 < sorted_rows.size(); ++idx) {
                    const std::size_t i = sorted_rows[idx];
                    left_mass[static_cast<std::size_t>(y[i])] += w[i];
                    left_total += w[i];
                    ++left_count;
                    const double v = x[i][f];
                    const double v_next = x[sorted_rows[idx + 1]][f];
                    if (v == v_next) continue;  // thresholds only between distinct values
                    if (left_count < cfg.min_leaf || rows.size() - left_count < cfg.min_leaf)
                        continue;
                    double score = 0.0;
                    {
                        double right_total = total - left_total;
                        double gl = 1.0, gr = 1.0;
                        if (left_total > 0.0) {
                            for (double m : left_mass) gl -= (m / left_total) * (m / left_total);
                        } else {
                            gl = 0.0;
                        }
                        if (right_total > 0.0) {
                            for (std::size_t c = 0; c < n_classes_; ++c) {
                                const double m = mass[c] - left_mass[c];
                                gr -= (m / right_total) * (m / right_total);
                            }
                        } else {
                            gr = 0.0;
                        }
                        score = left_total * gl + (total - left_total) * gr;
                    }
                    if (score < best_score) {
                        best_score = score;
                        best_feature = static_cast<int>(f);
                        best_threshold = 0.5 * (v + v_next);
                    }
                }
            }
            // require a strict weighted-impurity decrease, else stay a leaf
            if (best_feature >= 0 && !(best_score < total * node_impurity)) best_feature = -1;
        }

        if (best_feature < 0) return make_leaf(std::move(mass), total);

        std::vector<std::size_t> left_rows, right_rows;
        for (auto i : rows)
            (x[i][static_cast<std::size_t>(best_feature)] < best_threshold ? left_rows : right_rows)
                .push_back(i);
        rows.clear();
        rows.shrink_to_fit();

        const int self = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        nodes_[static_cast<std::size_t>(self)].feature = best_feature;
        nodes_[static_cast<std::size_t>(self)].threshold = best_threshold;
        const int left = grow(x, y, w, std::move(left_rows), depth + 1, cfg);
        const int right = grow(x, y, w, std::move(right_rows), depth + 1, cfg);
        nodes_[static_cast<std::size_t>(self)].left = left;
        nodes_[static_cast<std::size_t>(self)].right = right;
        return self;
    }

    int depth_of(int node) const {
        const auto& nd = nodes_[static_cast<std::size_t>(node)];
        if (nd.feature < 0) return 0;
        return 1 + std::max(depth_of(nd.left), depth_of(nd.right));
    }

    std::size_t n_classes_ = 2;
    std::vector<Node> nodes_;
};

}  // namespace adstage
