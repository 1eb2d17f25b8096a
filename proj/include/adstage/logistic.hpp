#pragma once

// L2-penalized logistic regression fit by iteratively reweighted least
// squares (damped Newton). Binary natively; multiclass as one-vs-rest.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "adstage/linalg.hpp"

namespace adstage {

struct LogisticConfig {
    double lambda = 1e-4;  // L2 penalty on non-intercept weights
    int max_iter = 100;
    double tol = 1e-8;  // max absolute weight delta
};

namespace detail {

inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z) without overflow
inline double log1p_exp(double z) {
    if (z > 35.0) return z;
    return std::log1p(std::exp(z));
}

}  // namespace detail

// Penalized mean negative log-likelihood. `w` is (intercept, coefficients);
// the whole vector is penalized so degenerate label sets stay bounded.
inline double logistic_objective(const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y, const std::vector<double>& w,
                                 double lambda) {
    const std::size_t n = x.size();
    double nll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = w[0];
        for (std::size_t j = 0; j < x[i].size(); ++j) z += w[j + 1] * x[i][j];
        nll += detail::log1p_exp(z) - (y[i] ? z : 0.0);
    }
    nll /= static_cast<double>(n);
    double penalty = 0.0;
    for (double v : w) penalty += v * v;
    return nll + 0.5 * lambda * penalty;
}

// Gradient of logistic_objective: (1/n) X~^T (p - y) + lambda * w, where X~
// carries a leading column of ones.
inline std::vector<double> logistic_gradient(const std::vector<std::vector<double>>& x,
                                             const std::vector<int>& y,
                                             const std::vector<double>& w, double lambda) {
    const std::size_t n = x.size();
    std::vector<double> g(w.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double z = w[0];
        for (std::size_t j = 0; j < x[i].size(); ++j) z += w[j + 1] * x[i][j];
        const double resid = detail::sigmoid(z) - (y[i] ? 1.0 : 0.0);
        g[0] += resid;
        for (std::size_t j = 0; j < x[i].size(); ++j) g[j + 1] += resid * x[i][j];
    }
    for (auto& v : g) v /= static_cast<double>(n);
    for (std::size_t j = 0; j < w.size(); ++j) g[j] += lambda * w[j];
    return g;
}

// One binary sigmoid linear model. Weights are over standardized features;
// standardization is handled by the caller.
class LogisticModel {
public:
    // y must be 0/1. Throws only on shape errors; separation is tamed by the
    // positive ridge penalty.
    static LogisticModel fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                             const LogisticConfig& cfg = {}) {
        if (x.empty() || x.size() != y.size())
            throw std::invalid_argument("logistic fit: shape mismatch");
        if (!(cfg.lambda > 0.0)) throw std::invalid_argument("logistic fit: lambda must be positive");
        const std::size_t n = x.size();
        const std::size_t d = x[0].size() + 1;  // intercept first

        LogisticModel m;
        m.weights_.assign(d, 0.0);
        m.objective_history_.push_back(logistic_objective(x, y, m.weights_, cfg.lambda));

        for (int iter = 0; iter < cfg.max_iter; ++iter) {
            // Newton system: (X~^T S X~ / n + lambda D) step = -gradient
            const auto grad = logistic_gradient(x, y, m.weights_, cfg.lambda);
            std::vector<double> h(d * d, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                double z = m.weights_[0];
                for (std::size_t j = 1; j < d; ++j) z += m.weights_[j] * x[i][j - 1];
                const double p = detail::sigmoid(z);
                const double s = p * (1.0 - p);
                std::vector<double> xi(d);
                xi[0] = 1.0;
                for (std::size_t j = 1; j < d; ++j) xi[j] = x[i][j - 1];
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = a; b < d; ++b) h[a * d + b] += s * xi[a] * xi[b];
            }
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < a; ++b) h[a * d + b] = h[b * d + a];
            for (auto& v : h) v /= static_cast<double>(n);
            for (std::size_t j = 0; j < d; ++j) h[j * d + j] += cfg.lambda;

            std::vector<double> neg_grad(d);
            for (std::size_t j = 0; j < d; ++j) neg_grad[j] = -grad[j];
            const auto step = detail::solve_spd(h, neg_grad);

            // halve the Newton step until the objective does not increase
            const double prev = m.objective_history_.back();
            double scale = 1.0;
            std::vector<double> trial(d);
            double obj = prev;
            for (int halving = 0; halving < 60; ++halving) {
                for (std::size_t j = 0; j < d; ++j) trial[j] = m.weights_[j] + scale * step[j];
                obj = logistic_objective(x, y, trial, cfg.lambda);
                if (obj <= prev) break;
                scale *= 0.5;
            }
            if (obj > prev) break;  // no improving step remains

            double max_delta = 0.0;
            for (std::size_t j = 0; j < d; ++j)
                max_delta = std::max(max_delta, std::fabs(scale * step[j]));
            m.weights_ = trial;
            m.objective_history_.push_back(obj);
            if (max_delta < cfg.tol) break;
        }
        return m;
    }

    double raw_score(const std::vector<double>& x) const {
        double z = weights_[0];
        for (std::size_t j = 0; j < x.size(); ++j) z += weights_[j + 1] * x[j];
        return z;
    }

    double probability(const std::vector<double>& x) const { return detail::sigmoid(raw_score(x)); }

    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& objective_history() const { return objective_history_; }

private:
    std::vector<double> weights_;
    std::vector<double> objective_history_;
};

// One-vs-rest stack over LogisticModel; for 2 classes a single binary model.
class LogisticClassifier {
public:
    static LogisticClassifier fit(const std::vector<std::vector<double>>& x,
                                  const std::vector<int>& y, std::size_t n_classes,
                                  const LogisticConfig& cfg = {}) {
        LogisticClassifier c;
        c.n_classes_ = n_classes;
        if (n_classes < 2) throw std::invalid_argument("logistic fit: need at least 2 classes");
        if (n_classes == 2) {
            c.models_.push_back(LogisticModel::fit(x, y, cfg));
            return c;
        }
        for (std::size_t k = 0; k < n_classes; ++k) {
            std::vector<int> yk(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) yk[i] = y[i] == static_cast<int>(k) ? 1 : 0;
            c.models_.push_back(LogisticModel::fit(x, yk, cfg));
        }
        return c;
    }

    std::vector<double> score(const std::vector<double>& x) const {
        if (n_classes_ == 2) {
            const double p = models_[0].probability(x);
            return {1.0 - p, p};
        }
        std::vector<double> s(n_classes_);
        double total = 0.0;
        for (std::size_t k = 0; k < n_classes_; ++k) {
            s[k] = models_[k].probability(x);
            total += s[k];
        }
        if (total <= 0.0) return std::vector<double>(n_classes_, 1.0 / static_cast<double>(n_classes_));
        for (auto& v : s) v /= total;
        return s;
    }

    const std::vector<LogisticModel>& members() const { return models_; }

private:
    std::size_t n_classes_ = 2;
    std::vector<LogisticModel> models_;
};

}  // namespace adstage
