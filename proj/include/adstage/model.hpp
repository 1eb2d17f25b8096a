#pragma once

// Uniform train/predict/score contract over the ten classifier kinds.
// A trained model is immutable; prediction is argmax of score with ties
// broken toward the lower class index.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "adstage/ensemble.hpp"
#include "adstage/knn.hpp"
#include "adstage/logistic.hpp"
#include "adstage/naive_bayes.hpp"
#include "adstage/standardize.hpp"
#include "adstage/svm.hpp"

namespace adstage {

enum class ModelKind {
    LogisticRegression,
    NBGaussian,
    NBKernel,
    SVMLinear,
    SVMQuadratic,
    KNNCoarse,
    KNNCosine,
    BoostedTree,
    BaggedTree,
    RUSBoostedTree,
};

inline const std::vector<std::pair<ModelKind, std::string>>& model_tokens() {
    static const std::vector<std::pair<ModelKind, std::string>> tokens{
        {ModelKind::LogisticRegression, "logistic"},
        {ModelKind::NBGaussian, "nb-gauss"},
        {ModelKind::NBKernel, "nb-kernel"},
        {ModelKind::SVMLinear, "svm-linear"},
        {ModelKind::SVMQuadratic, "svm-quadratic"},
        {ModelKind::KNNCoarse, "knn-coarse"},
        {ModelKind::KNNCosine, "knn-cosine"},
        {ModelKind::BoostedTree, "boosted"},
        {ModelKind::BaggedTree, "bagged"},
        {ModelKind::RUSBoostedTree, "rusboost"},
    };
    return tokens;
}

inline std::string model_token(ModelKind kind) {
    for (const auto& [k, t] : model_tokens())
        if (k == kind) return t;
    return "?";
}

inline std::optional<ModelKind> parse_model_token(const std::string& token) {
    for (const auto& [k, t] : model_tokens())
        if (t == token) return k;
    return std::nullopt;
}

// Hyperparameters grouped by the kind that reads them. The paper names the
// classifier variants but no values, so these defaults mirror common toolbox
// presets and are CLI-overridable.
struct Hyperparams {
    double logistic_lambda = 1e-4;
    int logistic_max_iter = 100;
    double logistic_tol = 1e-8;
    double svm_c = 1.0;
    double svm_tol = 1e-6;
    std::size_t knn_coarse_k = 100;  // capped at the training size
    std::size_t knn_cosine_k = 10;
    int rounds = 30;
    int boost_max_depth = 3;
    int bagged_max_depth = -1;  // unlimited
    std::size_t min_leaf = 1;
};

struct ModelSpec {
    ModelKind kind = ModelKind::LogisticRegression;
    Hyperparams params;
    std::uint64_t seed = 0;

    static ModelSpec make(ModelKind kind, std::uint64_t seed, Hyperparams params = {}) {
        ModelSpec s{kind, params, seed};
        s.validate();
        return s;
    }

    ModelSpec with_seed(std::uint64_t seed_value) const {
        ModelSpec s = *this;
        s.seed = seed_value;
        return s;
    }

    void validate() const {
        if (!(params.logistic_lambda > 0.0))
            throw std::invalid_argument("model spec: logistic lambda must be positive");
        if (!(params.svm_c > 0.0)) throw std::invalid_argument("model spec: SVM C must be positive");
        if (params.knn_coarse_k < 1 || params.knn_cosine_k < 1)
            throw std::invalid_argument("model spec: k must be at least 1");
        if (params.rounds < 1) throw std::invalid_argument("model spec: rounds must be at least 1");
        if (params.min_leaf < 1)
            throw std::invalid_argument("model spec: min_leaf must be at least 1");
    }

    bool uses_standardization() const {
        // cosine distance is scale-based, and trees are split-point invariant
        return kind != ModelKind::KNNCosine && kind != ModelKind::BoostedTree &&
               kind != ModelKind::BaggedTree && kind != ModelKind::RUSBoostedTree;
    }
};

class TrainedModel {
public:
    using Fitted = std::variant<LogisticClassifier, GaussianNbModel, KernelNbModel, SvmClassifier,
                                KnnModel, TreeEnsemble>;

    const ModelSpec& spec() const { return spec_; }
    const std::vector<std::string>& class_names() const { return class_names_; }
    const Standardizer& standardizer() const { return standardizer_; }
    const Fitted& fitted() const { return fitted_; }

    std::vector<double> score(const std::vector<double>& x) const {
        const auto z = standardizer_.apply(x);
        return std::visit([&](const auto& m) { return m.score(z); }, fitted_);
    }

    int predict(const std::vector<double>& x) const {
        const auto s = score(x);
        return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
    }

    friend TrainedModel train_model(const ModelSpec&, const std::vector<std::vector<double>>&,
                                    const std::vector<int>&, const std::vector<std::string>&);

private:
    ModelSpec spec_;
    std::vector<std::string> class_names_;
    Standardizer standardizer_;
    Fitted fitted_{LogisticClassifier{}};
};

inline TrainedModel train_model(const ModelSpec& spec, const std::vector<std::vector<double>>& x,
                                const std::vector<int>& y,
                                const std::vector<std::string>& class_names) {
    spec.validate();
    if (x.empty() || x.size() != y.size()) throw std::invalid_argument("train: shape mismatch");
    const std::size_t n_classes = class_names.size();
    if (n_classes < 2) throw std::invalid_argument("train: need at least 2 classes");
    for (int label : y)
        if (label < 0 || static_cast<std::size_t>(label) >= n_classes)
            throw std::invalid_argument("train: label outside class list");

    TrainedModel m;
    m.spec_ = spec;
    m.class_names_ = class_names;
    m.standardizer_ = spec.uses_standardization() ? Standardizer::fit(x)
                                                  : Standardizer::identity(x[0].size());
    const auto xs = m.standardizer_.apply_all(x);

    const auto& hp = spec.params;
    switch (spec.kind) {
        case ModelKind::LogisticRegression: {
            LogisticConfig cfg{hp.logistic_lambda, hp.logistic_max_iter, hp.logistic_tol};
            m.fitted_ = LogisticClassifier::fit(xs, y, n_classes, cfg);
            break;
        }
        case ModelKind::NBGaussian:
            m.fitted_ = GaussianNbModel::fit(xs, y, n_classes);
            break;
        case ModelKind::NBKernel:
            m.fitted_ = KernelNbModel::fit(xs, y, n_classes);
            break;
        case ModelKind::SVMLinear:
        case ModelKind::SVMQuadratic: {
            SvmConfig cfg;
            cfg.kernel =
                spec.kind == ModelKind::SVMLinear ? SvmKernel::Linear : SvmKernel::Quadratic;
            cfg.c = hp.svm_c;
            cfg.tol = hp.svm_tol;
            m.fitted_ = SvmClassifier::fit(xs, y, n_classes, cfg);
            break;
        }
        case ModelKind::KNNCoarse:
            m.fitted_ = KnnModel::fit(xs, y, n_classes, KnnMetric::Euclidean, hp.knn_coarse_k);
            break;
        case ModelKind::KNNCosine:
            m.fitted_ = KnnModel::fit(xs, y, n_classes, KnnMetric::Cosine, hp.knn_cosine_k);
            break;
        case ModelKind::BoostedTree: {
            EnsembleConfig cfg{hp.rounds, TreeConfig{hp.boost_max_depth, hp.min_leaf}, spec.seed};
            m.fitted_ = TreeEnsemble::adaboost_fit(xs, y, n_classes, cfg);
            break;
        }
        case ModelKind::BaggedTree: {
            EnsembleConfig cfg{hp.rounds, TreeConfig{hp.bagged_max_depth, hp.min_leaf}, spec.seed};
            m.fitted_ = TreeEnsemble::bagging_fit(xs, y, n_classes, cfg);
            break;
        }
        case ModelKind::RUSBoostedTree: {
            EnsembleConfig cfg{hp.rounds, TreeConfig{hp.boost_max_depth, hp.min_leaf}, spec.seed};
            m.fitted_ = TreeEnsemble::rusboost_fit(xs, y, n_classes, cfg);
            break;
        }
    }
    return m;
}

}  // namespace adstage
