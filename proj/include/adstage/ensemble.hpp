#pragma once

// Tree ensembles: SAMME AdaBoost (classic AdaBoost.M1 when binary),
// bootstrap-aggregated trees, and RUSBoost, which undersamples every round's
// training set to the minority-class count while boosting weights live on
// the full dataset.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "adstage/random.hpp"
#include "adstage/tree.hpp"

namespace adstage {

enum class EnsembleMethod { AdaBoost, Bagging, RUSBoost };

struct EnsembleConfig {
    int rounds = 30;
    TreeConfig tree;  // boosted defaults are depth-limited; bagging unlimited
    std::uint64_t seed = 0;
};

// Per-round observer hook used by tests to inspect the boosting state.
struct BoostRound {
    int round = 0;
    double epsilon = 0.0;
    double alpha = 0.0;
    const std::vector<double>* weights = nullptr;      // post-update, normalized
    const std::vector<std::size_t>* subset = nullptr;  // RUSBoost round subset
};
using BoostObserver = std::function<void(const BoostRound&)>;

class TreeEnsemble {
public:
    struct Member {
        DecisionTree tree;
        double alpha = 1.0;
    };

    EnsembleMethod method() const { return method_; }
    const std::vector<Member>& members() const { return members_; }
    const std::vector<double>& round_errors() const { return round_errors_; }
    std::size_t n_classes() const { return n_classes_; }

    // Assemble an ensemble from already-fitted members.
    static TreeEnsemble from_members(EnsembleMethod method, std::size_t n_classes,
                                     std::vector<Member> members) {
        if (members.empty()) throw std::invalid_argument("ensemble: no members");
        TreeEnsemble e;
        e.method_ = method;
        e.n_classes_ = n_classes;
        e.members_ = std::move(members);
        return e;
    }

    // AdaBoost/RUSBoost: softmax over alpha-weighted votes.
    // Bagging: mean of leaf distributions. Scores always sum to 1.
    std::vector<double> score(const std::vector<double>& q) const {
        if (method_ == EnsembleMethod::Bagging) {
            std::vector<double> acc(n_classes_, 0.0);
            for (const auto& m : members_) {
                const auto& dist = m.tree.leaf_distribution(q);
                for (std::size_t c = 0; c < n_classes_; ++c) acc[c] += dist[c];
            }
            for (auto& v : acc) v /= static_cast<double>(members_.size());
            return acc;
        }
        std::vector<double> votes(n_classes_, 0.0);
        for (const auto& m : members_)
            votes[static_cast<std::size_t>(m.tree.predict(q))] += m.alpha;
        double mx = votes[0];
        for (double v : votes) mx = std::max(mx, v);
        double total = 0.0;
        for (auto& v : votes) {
            v = std::exp(v - mx);
            total += v;
        }
        for (auto& v : votes) v /= total;
        return votes;
    }

    int predict(const std::vector<double>& q) const {
        const auto s = score(q);
        return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
    }

    static TreeEnsemble adaboost_fit(const std::vector<std::vector<double>>& x,
                                     const std::vector<int>& y, std::size_t n_classes,
                                     const EnsembleConfig& cfg,
                                     const BoostObserver& observer = {}) {
        return boost_fit(x, y, n_classes, cfg, /*undersample=*/false, observer);
    }

    static TreeEnsemble rusboost_fit(const std::vector<std::vector<double>>& x,
                                     const std::vector<int>& y, std::size_t n_classes,
                                     const EnsembleConfig& cfg,
                                     const BoostObserver& observer = {}) {
        return boost_fit(x, y, n_classes, cfg, /*undersample=*/true, observer);
    }

    static TreeEnsemble bagging_fit(const std::vector<std::vector<double>>& x,
                                    const std::vector<int>& y, std::size_t n_classes,
                                    const EnsembleConfig& cfg) {
        if (x.empty() || x.size() != y.size())
            throw std::invalid_argument("bagging fit: shape mismatch");
        TreeEnsemble e;
        e.method_ = EnsembleMethod::Bagging;
        e.n_classes_ = n_classes;
        for (int t = 0; t < cfg.rounds; ++t) {
            auto rng = make_rng(cfg.seed, static_cast<std::uint64_t>(t));
            const auto idx = detail::bootstrap_indices(x.size(), rng);
            std::vector<std::vector<double>> xb;
            std::vector<int> yb;
            xb.reserve(idx.size());
            yb.reserve(idx.size());
            for (auto i : idx) {
                xb.push_back(x[i]);
                yb.push_back(y[i]);
            }
            e.members_.push_back(Member{
                DecisionTree::fit(xb, yb, std::vector<double>(xb.size(), 1.0), n_classes, cfg.tree),
                1.0});
        }
        return e;
    }

private:
    static TreeEnsemble boost_fit(const std::vector<std::vector<double>>& x,
                                  const std::vector<int>& y, std::size_t n_classes,
                                  const EnsembleConfig& cfg, bool undersample,
                                  const BoostObserver& observer) {
        if (x.empty() || x.size() != y.size())
            throw std::invalid_argument("boost fit: shape mismatch");
        if (n_classes < 2) throw std::invalid_argument("boost fit: need at least 2 classes");
        const std::size_t n = x.size();
        const double k = static_cast<double>(n_classes);

        std::vector<std::vector<std::size_t>> class_rows(n_classes);
        for (std::size_t i = 0; i < n; ++i)
            class_rows[static_cast<std::size_t>(y[i])].push_back(i);
        std::size_t min_count = n;
        for (std::size_t c = 0; c < n_classes; ++c) {
            if (class_rows[c].empty()) throw std::invalid_argument("boost fit: class with no samples");
            min_count = std::min(min_count, class_rows[c].size());
        }

        TreeEnsemble e;
        e.method_ = undersample ? EnsembleMethod::RUSBoost : EnsembleMethod::AdaBoost;
        e.n_classes_ = n_classes;

        std::vector<double> weights(n, 1.0 / static_cast<double>(n));
        const double alpha_cap = std::log(1e10);

        for (int t = 0; t < cfg.rounds; ++t) {
            std::vector<std::size_t> subset;
            DecisionTree tree = [&] {
                if (!undersample) return DecisionTree::fit(x, y, weights, n_classes, cfg.tree);
                // weight-proportional undersample of every class to the
                // minority count; the tree sees the restricted boosting weights
                auto rng = make_rng(cfg.seed, 0x525553ULL + static_cast<std::uint64_t>(t));
                for (std::size_t c = 0; c < n_classes; ++c) {
                    const auto& rows = class_rows[c];
                    if (rows.size() == min_count) {
                        subset.insert(subset.end(), rows.begin(), rows.end());
                        continue;
                    }
                    std::vector<double> wc(rows.size());
                    for (std::size_t j = 0; j < rows.size(); ++j) wc[j] = weights[rows[j]];
                    for (auto j : detail::weighted_sample_without_replacement(wc, min_count, rng))
                        subset.push_back(rows[j]);
                }
                std::sort(subset.begin(), subset.end());
                std::vector<std::vector<double>> xs;
                std::vector<int> ys;
                std::vector<double> ws;
                xs.reserve(subset.size());
                for (auto i : subset) {
                    xs.push_back(x[i]);
                    ys.push_back(y[i]);
                    ws.push_back(weights[i]);
                }
                return DecisionTree::fit(xs, ys, ws, n_classes, cfg.tree);
            }();

            // weighted error on the full dataset
            double eps = 0.0;
            std::vector<char> miss(n, 0);
            for (std::size_t i = 0; i < n; ++i) {
                if (tree.predict(x[i]) != y[i]) {
                    miss[i] = 1;
                    eps += weights[i];
                }
            }

            if (eps <= 0.0) {
                // perfect learner: keep it with a large capped weight and stop
                e.members_.push_back(Member{std::move(tree), alpha_cap});
                e.round_errors_.push_back(0.0);
                if (observer)
                    observer(BoostRound{t, 0.0, alpha_cap, &weights,
                                        undersample ? &subset : nullptr});
                break;
            }
            if (eps >= 1.0 - 1.0 / k) {
                if (t == 0)
                    throw std::runtime_error("boost fit: base learner no better than chance");
                break;  // discard this round and stop
            }

            const double alpha = std::log((1.0 - eps) / eps) + std::log(k - 1.0);
            e.members_.push_back(Member{std::move(tree), alpha});
            e.round_errors_.push_back(eps);

            const double bump = std::exp(alpha);
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (miss[i]) weights[i] *= bump;
                total += weights[i];
            }
            for (auto& w : weights) w /= total;

            if (observer)
                observer(BoostRound{t, eps, alpha, &weights, undersample ? &subset : nullptr});
        }
        if (e.members_.empty()) throw std::runtime_error("boost fit: no usable rounds");
        return e;
    }

    EnsembleMethod method_ = EnsembleMethod::AdaBoost;
    std::size_t n_classes_ = 2;
    std::vector<Member> members_;
    std::vector<double> round_errors_;
};

// Free-function forms mirroring the operation names.
inline TreeEnsemble adaboost_fit(const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y, std::size_t n_classes,
                                 const EnsembleConfig& cfg, const BoostObserver& obs = {}) {
    return TreeEnsemble::adaboost_fit(x, y, n_classes, cfg, obs);
}
inline TreeEnsemble bagging_fit(const std::vector<std::vector<double>>& x,
                                const std::vector<int>& y, std::size_t n_classes,
                                const EnsembleConfig& cfg) {
    return TreeEnsemble::bagging_fit(x, y, n_classes, cfg);
}
inline TreeEnsemble rusboost_fit(const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y, std::size_t n_classes,
                                 const EnsembleConfig& cfg, const BoostObserver& obs = {}) {
    return TreeEnsemble::rusboost_fit(x, y, n_classes, cfg, obs);
}
inline std::vector<double> ensemble_score(const TreeEnsemble& e, const std::vector<double>& q) {
    return e.score(q);
}

}  // namespace adstage
