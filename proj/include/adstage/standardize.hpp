#pragma once

// Per-feature z-score standardization. Parameters are estimated from the
// training split only and travel with the trained model.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace adstage {

class Standardizer {
public:
    Standardizer() = default;

    static Standardizer identity(std::size_t n_features) {
        Standardizer s;
        s.mean_.assign(n_features, 0.0);
        s.scale_.assign(n_features, 1.0);
        return s;
    }

    static Standardizer fit(const std::vector<std::vector<double>>& x) {
        if (x.empty()) throw std::invalid_argument("Standardizer: empty training matrix");
        const std::size_t d = x[0].size();
        Standardizer s;
        s.mean_.assign(d, 0.0);
        s.scale_.assign(d, 1.0);
        for (const auto& row : x)
            for (std::size_t j = 0; j < d; ++j) s.mean_[j] += row[j];
        for (std::size_t j = 0; j < d; ++j) s.mean_[j] /= static_cast<double>(x.size());
        if (x.size() >= 2) {
            std::vector<double> ss(d, 0.0);
            for (const auto& row : x)
                for (std::size_t j = 0; j < d; ++j)
                    ss[j] += (row[j] - s.mean_[j]) * (row[j] - s.mean_[j]);
            for (std::size_t j = 0; j < d; ++j) {
                const double sd = std::sqrt(ss[j] / static_cast<double>(x.size() - 1));
                s.scale_[j] = sd > 0.0 ? sd : 1.0;  // constant feature maps to 0
            }
        }
        return s;
    }

    std::vector<double> apply(const std::vector<double>& row) const {
        std::vector<double> out(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean_[j]) / scale_[j];
        return out;
    }

    std::vector<std::vector<double>> apply_all(const std::vector<std::vector<double>>& x) const {
        std::vector<std::vector<double>> out;
        out.reserve(x.size());
        for (const auto& row : x) out.push_back(apply(row));
        return out;
    }

    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& scale() const { return scale_; }

private:
    std::vector<double> mean_;
    std::vector<double> scale_;
};

}  // namespace adstage
