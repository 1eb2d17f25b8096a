#pragma once

// Soft-margin SVM trained by sequential minimal optimization.
// Kernels: linear K(u,v) = u.v and quadratic K(u,v) = (1 + u.v)^2.
// Binary natively; multiclass by one-vs-one voting.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace adstage {

enum class SvmKernel { Linear, Quadratic };

struct SvmConfig {
    SvmKernel kernel = SvmKernel::Linear;
    double c = 1.0;     // box constraint
    double tol = 1e-6;  // duality-gap stopping threshold
};

struct SvmNotConverged : std::runtime_error {
    double worst_violation;
    explicit SvmNotConverged(double v)
        : std::runtime_error("SMO did not converge; worst KKT violation " + std::to_string(v)),
          worst_violation(v) {}
};

namespace detail {

inline double svm_kernel(SvmKernel k, const std::vector<double>& u, const std::vector<double>& v) {
    double dot = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) dot += u[j] * v[j];
    if (k == SvmKernel::Linear) return dot;
    return (1.0 + dot) * (1.0 + dot);
}

// SMO with maximal-violating-pair working-set selection. The duality gap
// m(alpha) - M(alpha) certifies convergence: stopping at gap <= tol leaves
// every KKT violation at most tol/2 once the bias is centered in [M, m].
class SmoSolver {
public:
    SmoSolver(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
              const SvmConfig& cfg)
        : y_(y), cfg_(cfg), n_(x.size()), alpha_(x.size(), 0.0), grad_(x.size(), -1.0) {
        kernel_.assign(n_ * n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i; j < n_; ++j) {
                const double k = svm_kernel(cfg_.kernel, x[i], x[j]);
                kernel_[i * n_ + j] = k;
                kernel_[j * n_ + i] = k;
            }
    }

    void solve() {
        const long max_iter = std::max<long>(200000, static_cast<long>(n_) * 2000);
        for (long iter = 0; iter < max_iter; ++iter) {
            const auto [i, j, gap] = select_pair();
            if (gap <= cfg_.tol) {
                finish();
                return;
            }
            update_pair(i, j);
        }
        const double gap = select_pair().gap;
        throw SvmNotConverged(0.5 * gap);
    }

    const std::vector<double>& alphas() const { return alpha_; }
    double bias() const { return b_; }

private:
    struct Selection {
        std::size_t i = 0;
        std::size_t j = 0;
        double gap = 0.0;
    };

    // score -y_t G_t: entries of I_up bound the bias from below, entries of
    // I_low from above; the violating pair is the extreme of each side.
    Selection select_pair() const {
        double m = -std::numeric_limits<double>::infinity();
        double big_m = std::numeric_limits<double>::infinity();
        Selection sel;
        for (std::size_t t = 0; t < n_; ++t) {
            const double score = -y_[t] * grad_[t];
            const bool in_up = (y_[t] > 0.0 && alpha_[t] < cfg_.c) ||
                               (y_[t] < 0.0 && alpha_[t] > 0.0);
            const bool in_low = (y_[t] > 0.0 && alpha_[t] > 0.0) ||
                                (y_[t] < 0.0 && alpha_[t] < cfg_.c);
            if (in_up && score > m) {
                m = score;
                sel.i = t;
            }
            if (in_low && score < big_m) {
                big_m = score;
                sel.j = t;
            }
        }
        sel.gap = m - big_m;
        return sel;
    }

    void update_pair(std::size_t i, std::size_t j) {
        const double yi = y_[i], yj = y_[j];
        const double kii = kernel_[i * n_ + i];
        const double kjj = kernel_[j * n_ + j];
        const double kij = kernel_[i * n_ + j];
        double quad = kii + kjj - 2.0 * kij;
        if (quad <= 0.0) quad = 1e-12;

        const double old_ai = alpha_[i], old_aj = alpha_[j];
        if (yi != yj) {
            const double delta = (-grad_[i] - grad_[j]) / quad;
            const double diff = alpha_[i] - alpha_[j];
            alpha_[i] += delta;
            alpha_[j] += delta;
            if (diff > 0.0) {
                if (alpha_[j] < 0.0) {
                    alpha_[j] = 0.0;
                    alpha_[i] = diff;
                }
                if (alpha_[i] > cfg_.c) {
                    alpha_[i] = cfg_.c;
                    alpha_[j] = cfg_.c - diff;
                }
            } else {
                if (alpha_[i] < 0.0) {
                    alpha_[i] = 0.0;
                    alpha_[j] = -diff;
                }
                if (alpha_[j] > cfg_.c) {
                    alpha_[j] = cfg_.c;
                    alpha_[i] = cfg_.c + diff;
                }
            }
        } else {
            const double delta = (grad_[i] - grad_[j]) / quad;
            const double sum = alpha_[i] + alpha_[j];
            alpha_[i] -= delta;
            alpha_[j] += delta;
            if (sum > cfg_.c) {
                if (alpha_[i] > cfg_.c) {
                    alpha_[i] = cfg_.c;
                    alpha_[j] = sum - cfg_.c;
                }
                if (alpha_[j] > cfg_.c) {
                    alpha_[j] = cfg_.c;
                    alpha_[i] = sum - cfg_.c;
                }
            } else {
                if (alpha_[j] < 0.0) {
                    alpha_[j] = 0.0;
                    alpha_[i] = sum;
                }
                if (alpha_[i] < 0.0) {
                    alpha_[i] = 0.0;
                    alpha_[j] = sum;
                }
            }
        }

        const double di = alpha_[i] - old_ai;
        const double dj = alpha_[j] - old_aj;
        for (std::size_t t = 0; t < n_; ++t)
            grad_[t] += y_[t] * (yi * di * kernel_[i * n_ + t] + yj * dj * kernel_[j * n_ + t]);
    }

    // bias centered between the active bound sets; free points pin it exactly
    void finish() {
        double lower = -std::numeric_limits<double>::infinity();
        double upper = std::numeric_limits<double>::infinity();
        double free_sum = 0.0;
        std::size_t free_count = 0;
        for (std::size_t t = 0; t < n_; ++t) {
            const double score = -y_[t] * grad_[t];
            const bool in_up = (y_[t] > 0.0 && alpha_[t] < cfg_.c) ||
                               (y_[t] < 0.0 && alpha_[t] > 0.0);
            const bool in_low = (y_[t] > 0.0 && alpha_[t] > 0.0) ||
                                (y_[t] < 0.0 && alpha_[t] < cfg_.c);
            if (alpha_[t] > 0.0 && alpha_[t] < cfg_.c) {
                free_sum += score;
                ++free_count;
            }
            if (in_up) lower = std::max(lower, score);
            if (in_low) upper = std::min(upper, score);
        }
        if (free_count > 0)
            b_ = free_sum / static_cast<double>(free_count);
        else
            b_ = 0.5 * (lower + upper);
    }

    const std::vector<double>& y_;
    SvmConfig cfg_;
    std::size_t n_;
    std::vector<double> alpha_;
    std::vector<double> grad_;  // gradient of the dual objective
    std::vector<double> kernel_;
    double b_ = 0.0;
};

}  // namespace detail

// One binary maximum-margin machine; labels internally -1/+1.
class SvmBinary {
public:
    // y must be 0/1 (0 maps to -1). Rows are canonicalized (sorted
    // lexicographically) before optimization, making the fit independent of
    // input row order.
    static SvmBinary fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                         const SvmConfig& cfg = {}) {
        if (x.empty() || x.size() != y.size()) throw std::invalid_argument("svm fit: shape mismatch");
        if (!(cfg.c > 0.0)) throw std::invalid_argument("svm fit: C must be positive");
        std::vector<std::size_t> order(x.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (x[a] != x[b]) return x[a] < x[b];
            return y[a] < y[b];
        });
        std::vector<std::vector<double>> xs;
        std::vector<double> ys;
        xs.reserve(x.size());
        ys.reserve(x.size());
        for (auto i : order) {
            xs.push_back(x[i]);
            ys.push_back(y[i] ? 1.0 : -1.0);
        }

        detail::SmoSolver solver(xs, ys, cfg);
        solver.solve();

        SvmBinary m;
        m.cfg_ = cfg;
        m.bias_ = solver.bias();
        const auto& alpha = solver.alphas();
        double alpha_dot_y = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            alpha_dot_y += alpha[i] * ys[i];
            if (alpha[i] > 0.0) {
                m.sv_.push_back(xs[i]);
                m.sv_coef_.push_back(alpha[i] * ys[i]);
                m.sv_alpha_.push_back(alpha[i]);
            }
        }
        m.alpha_dot_y_ = alpha_dot_y;
        m.train_x_ = std::move(xs);
        m.train_y_ = std::move(ys);
        m.train_alpha_ = alpha;
        return m;
    }

    double decision(const std::vector<double>& x) const {
        double f = bias_;
        for (std::size_t i = 0; i < sv_.size(); ++i)
            f += sv_coef_[i] * detail::svm_kernel(cfg_.kernel, sv_[i], x);
        return f;
    }

    const std::vector<double>& support_alphas() const { return sv_alpha_; }
    double bias() const { return bias_; }
    double box_constraint() const { return cfg_.c; }
    // residual of the equality constraint sum(alpha_i y_i) = 0
    double equality_residual() const { return alpha_dot_y_; }

    // canonicalized training data with the full alpha vector, for KKT audits
    const std::vector<std::vector<double>>& training_rows() const { return train_x_; }
    const std::vector<double>& training_labels() const { return train_y_; }
    const std::vector<double>& training_alphas() const { return train_alpha_; }

private:
    SvmConfig cfg_;
    std::vector<std::vector<double>> sv_;
    std::vector<double> sv_coef_;   // alpha_i * y_i
    std::vector<double> sv_alpha_;  // alpha_i
    std::vector<std::vector<double>> train_x_;
    std::vector<double> train_y_;
    std::vector<double> train_alpha_;
    double bias_ = 0.0;
    double alpha_dot_y_ = 0.0;
};

// One-vs-one voting stack; binary task uses a single machine with a
// sigmoid-squashed decision value as its score.
class SvmClassifier {
public:
    static SvmClassifier fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                             std::size_t n_classes, const SvmConfig& cfg = {}) {
        if (n_classes < 2) throw std::invalid_argument("svm fit: need at least 2 classes");
        SvmClassifier c;
        c.n_classes_ = n_classes;
        for (std::size_t a = 0; a < n_classes; ++a)
            for (std::size_t b = a + 1; b < n_classes; ++b) {
                std::vector<std::vector<double>> xs;
                std::vector<int> ys;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    if (y[i] == static_cast<int>(a)) {
                        xs.push_back(x[i]);
                        ys.push_back(0);
                    } else if (y[i] == static_cast<int>(b)) {
                        xs.push_back(x[i]);
                        ys.push_back(1);
                    }
                }
                if (xs.empty()) throw std::invalid_argument("svm fit: empty class pair");
                c.pairs_.push_back(Pair{a, b, SvmBinary::fit(xs, ys, cfg)});
            }
        return c;
    }

    std::vector<double> score(const std::vector<double>& x) const {
        if (n_classes_ == 2) {
            const double p = 1.0 / (1.0 + std::exp(-pairs_[0].machine.decision(x)));
            return {1.0 - p, p};
        }
        std::vector<double> votes(n_classes_, 0.0);
        for (const auto& pr : pairs_) {
            const double f = pr.machine.decision(x);
            votes[f >= 0.0 ? pr.b : pr.a] += 1.0;
        }
        for (auto& v : votes) v /= static_cast<double>(pairs_.size());
        return votes;
    }

    struct Pair {
        std::size_t a, b;  // class indices; decision >= 0 votes for b
        SvmBinary machine;
    };
    const std::vector<Pair>& pairs() const { return pairs_; }

private:
    std::size_t n_classes_ = 2;
    std::vector<Pair> pairs_;
};

}  // namespace adstage
