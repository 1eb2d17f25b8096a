#pragma once

// K-nearest-neighbor classification. "Coarse" uses Euclidean distance on
// standardized features with a large k; "cosine" uses cosine distance on raw
// features. Scores are the vote fractions among the k nearest; distance ties
// break toward the smaller training index.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace adstage {

enum class KnnMetric { Euclidean, Cosine };

class KnnModel {
public:
    static KnnModel fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                        std::size_t n_classes, KnnMetric metric, std::size_t k) {
        if (x.empty() || x.size() != y.size()) throw std::invalid_argument("knn fit: shape mismatch");
        if (k < 1) throw std::invalid_argument("knn fit: k must be at least 1");
        KnnModel m;
        m.x_ = x;
        m.y_ = y;
        m.n_classes_ = n_classes;
        m.metric_ = metric;
        m.k_ = std::min(k, x.size());  // k capped at training size
        if (metric == KnnMetric::Cosine) {
            m.norms_.reserve(x.size());
            for (const auto& row : x) {
                const double nrm = norm(row);
                if (nrm == 0.0) throw std::invalid_argument("knn fit: zero-norm row under cosine");
                m.norms_.push_back(nrm);
            }
        }
        return m;
    }

    std::vector<double> score(const std::vector<double>& q) const {
        double qnorm = 0.0;
        if (metric_ == KnnMetric::Cosine) {
            qnorm = norm(q);
            if (qnorm == 0.0) throw std::invalid_argument("knn: zero-norm query under cosine");
        }
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(x_.size());
        for (std::size_t i = 0; i < x_.size(); ++i) {
            double d;
            if (metric_ == KnnMetric::Euclidean) {
                d = 0.0;
                for (std::size_t j = 0; j < q.size(); ++j)
                    d += (q[j] - x_[i][j]) * (q[j] - x_[i][j]);
            } else {
                double dot = 0.0;
                for (std::size_t j = 0; j < q.size(); ++j) dot += q[j] * x_[i][j];
                d = 1.0 - dot / (qnorm * norms_[i]);
            }
            dist.emplace_back(d, i);
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end(),
                          [](const auto& a, const auto& b) {
                              if (a.first != b.first) return a.first < b.first;
                              return a.second < b.second;
                          });
        std::vector<double> votes(n_classes_, 0.0);
        for (std::size_t r = 0; r < k_; ++r) votes[static_cast<std::size_t>(y_[dist[r].second])] += 1.0;
        for (auto& v : votes) v /= static_cast<double>(k_);
        return votes;
    }

    std::size_t k() const { return k_; }

private:
    static double norm(const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    }

    std::vector<std::vector<double>> x_;
    std::vector<int> y_;
    std::vector<double> norms_;
    std::size_t n_classes_ = 2;
    KnnMetric metric_ = KnnMetric::Euclidean;
    std::size_t k_ = 1;
};

}  // namespace adstage
