#pragma once

// Naive Bayes with conditionally independent features: Gaussian per-class
// densities, and a kernel variant using per-class, per-feature Gaussian KDE
// with the Silverman rule-of-thumb bandwidth.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace adstage {

namespace detail {

inline std::vector<double> softmax(std::vector<double> logits) {
    double mx = logits[0];
    for (double v : logits) mx = std::max(mx, v);
    double total = 0.0;
    for (auto& v : logits) {
        v = std::exp(v - mx);
        total += v;
    }
    for (auto& v : logits) v /= total;
    return logits;
}

// Linear-interpolation quantile on a sorted vector (the usual "type 7").
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace detail

class GaussianNbModel {
public:
    // Per-class, per-feature mean and variance; priors from class
    // frequencies. Variances are floored at 1e-9 of the pooled per-feature
    // variance so single-sample classes stay comparable.
    static GaussianNbModel fit(const std::vector<std::vector<double>>& x,
                               const std::vector<int>& y, std::size_t n_classes) {
        if (x.empty() || x.size() != y.size())
            throw std::invalid_argument("gaussian nb fit: shape mismatch");
        const std::size_t n = x.size();
        const std::size_t d = x[0].size();
        GaussianNbModel m;
        m.mean_.assign(n_classes, std::vector<double>(d, 0.0));
        m.var_.assign(n_classes, std::vector<double>(d, 0.0));
        m.log_prior_.assign(n_classes, 0.0);

        std::vector<std::size_t> counts(n_classes, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(y[i]);
            counts[c]++;
            for (std::size_t j = 0; j < d; ++j) m.mean_[c][j] += x[i][j];
        }
        for (std::size_t c = 0; c < n_classes; ++c) {
            if (counts[c] == 0) throw std::invalid_argument("gaussian nb fit: empty class");
            for (std::size_t j = 0; j < d; ++j) m.mean_[c][j] /= static_cast<double>(counts[c]);
            m.log_prior_[c] = std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(y[i]);
            for (std::size_t j = 0; j < d; ++j) {
                const double dlt = x[i][j] - m.mean_[c][j];
                m.var_[c][j] += dlt * dlt;
            }
        }
        // pooled per-feature variance for the floor
        std::vector<double> pooled(d, 0.0);
        {
            std::vector<double> grand(d, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j) grand[j] += x[i][j];
            for (std::size_t j = 0; j < d; ++j) grand[j] /= static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    pooled[j] += (x[i][j] - grand[j]) * (x[i][j] - grand[j]);
            for (std::size_t j = 0; j < d; ++j)
                pooled[j] = n >= 2 ? pooled[j] / static_cast<double>(n - 1) : 0.0;
        }
        for (std::size_t c = 0; c < n_classes; ++c)
            for (std::size_t j = 0; j < d; ++j) {
                m.var_[c][j] = counts[c] >= 2 ? m.var_[c][j] / static_cast<double>(counts[c] - 1) : 0.0;
                const double floor = std::max(1e-9 * pooled[j], 1e-12);
                m.var_[c][j] = std::max(m.var_[c][j], floor);
            }
        return m;
    }

    std::vector<double> log_posterior(const std::vector<double>& x) const {
        std::vector<double> lp(mean_.size());
        for (std::size_t c = 0; c < mean_.size(); ++c) {
            double v = log_prior_[c];
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double dlt = x[j] - mean_[c][j];
                v += -0.5 * std::log(2.0 * std::numbers::pi * var_[c][j]) - dlt * dlt / (2.0 * var_[c][j]);
            }
            lp[c] = v;
        }
        return lp;
    }

    std::vector<double> score(const std::vector<double>& x) const {
        return detail::softmax(log_posterior(x));
    }

    const std::vector<std::vector<double>>& means() const { return mean_; }
    const std::vector<std::vector<double>>& variances() const { return var_; }

private:
    std::vector<std::vector<double>> mean_, var_;  // [class][feature]
    std::vector<double> log_prior_;
};

class KernelNbModel {
public:
    // Bandwidth h = 0.9 * min(sd, IQR/1.34) * m^(-1/5), floored at 1e-6.
    static KernelNbModel fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                             std::size_t n_classes) {
        if (x.empty() || x.size() != y.size())
            throw std::invalid_argument("kernel nb fit: shape mismatch");
        const std::size_t d = x[0].size();
        KernelNbModel m;
        m.values_.assign(n_classes, std::vector<std::vector<double>>(d));
        m.bandwidth_.assign(n_classes, std::vector<double>(d, 1e-6));
        m.log_prior_.assign(n_classes, 0.0);

        std::vector<std::size_t> counts(n_classes, 0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto c = static_cast<std::size_t>(y[i]);
            counts[c]++;
            for (std::size_t j = 0; j < d; ++j) m.values_[c][j].push_back(x[i][j]);
        }
        for (std::size_t c = 0; c < n_classes; ++c) {
            if (counts[c] == 0) throw std::invalid_argument("kernel nb fit: empty class");
            m.log_prior_[c] =
                std::log(static_cast<double>(counts[c]) / static_cast<double>(x.size()));
            for (std::size_t j = 0; j < d; ++j) {
                auto vals = m.values_[c][j];
                std::sort(vals.begin(), vals.end());
                const double msize = static_cast<double>(vals.size());
                double mean = 0.0;
                for (double v : vals) mean += v;
                mean /= msize;
                double sd = 0.0;
                if (vals.size() >= 2) {
                    double ss = 0.0;
                    for (double v : vals) ss += (v - mean) * (v - mean);
                    sd = std::sqrt(ss / (msize - 1.0));
                }
                const double iqr =
                    detail::quantile_sorted(vals, 0.75) - detail::quantile_sorted(vals, 0.25);
                const double spread = std::min(sd, iqr / 1.34);
                const double h = 0.9 * spread * std::pow(msize, -0.2);
                m.bandwidth_[c][j] = std::max(h, 1e-6);
            }
        }
        return m;
    }

    // Per-feature log density via log-sum-exp, so tiny densities never
    // underflow; the -745 floor only guards a true zero.
    std::vector<double> log_posterior(const std::vector<double>& x) const {
        std::vector<double> lp(values_.size());
        for (std::size_t c = 0; c < values_.size(); ++c) {
            double v = log_prior_[c];
            for (std::size_t j = 0; j < x.size(); ++j) {
                const auto& pts = values_[c][j];
                const double h = bandwidth_[c][j];
                double mx = -std::numeric_limits<double>::infinity();
                std::vector<double> terms(pts.size());
                for (std::size_t t = 0; t < pts.size(); ++t) {
                    const double z = (x[j] - pts[t]) / h;
                    terms[t] = -0.5 * z * z;
                    mx = std::max(mx, terms[t]);
                }
                double sum = 0.0;
                for (double term : terms) sum += std::exp(term - mx);
                double logdens = mx + std::log(sum) - std::log(static_cast<double>(pts.size())) -
                                 std::log(h) - 0.5 * std::log(2.0 * std::numbers::pi);
                if (!std::isfinite(logdens)) logdens = -745.0;
                v += logdens;
            }
            lp[c] = v;
        }
        return lp;
    }

    std::vector<double> score(const std::vector<double>& x) const {
        return detail::softmax(log_posterior(x));
    }

    const std::vector<std::vector<double>>& bandwidths() const { return bandwidth_; }

private:
    std::vector<std::vector<std::vector<double>>> values_;  // [class][feature][sample]
    std::vector<std::vector<double>> bandwidth_;            // [class][feature]
    std::vector<double> log_prior_;
};

}  // namespace adstage
