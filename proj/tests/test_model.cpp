#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "adstage/model.hpp"

using namespace adstage;

namespace {

struct Problem {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    std::vector<std::string> classes;
};

Problem random_problem(std::mt19937_64& rng, std::size_t n, std::size_t d, std::size_t k) {
    std::normal_distribution<double> noise(0.0, 1.0);
    Problem p;
    p.classes.resize(k);
    for (std::size_t c = 0; c < k; ++c) p.classes[c] = "C" + std::to_string(c);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = i % k;
        std::vector<double> row(d);
        for (std::size_t j = 0; j < d; ++j)
            row[j] = static_cast<double>(c) * 2.0 + noise(rng) + 1.0 + static_cast<double>(j);
        p.x.push_back(std::move(row));
        p.y.push_back(static_cast<int>(c));
    }
    return p;
}

const std::vector<ModelKind> kAllKinds{
    ModelKind::LogisticRegression, ModelKind::NBGaussian,  ModelKind::NBKernel,
    ModelKind::SVMLinear,          ModelKind::SVMQuadratic, ModelKind::KNNCoarse,
    ModelKind::KNNCosine,          ModelKind::BoostedTree,  ModelKind::BaggedTree,
    ModelKind::RUSBoostedTree};

// deterministic learners for which row order must not matter
const std::vector<ModelKind> kPermutationInvariantKinds{
    ModelKind::LogisticRegression, ModelKind::NBGaussian, ModelKind::NBKernel,
    ModelKind::SVMLinear,          ModelKind::SVMQuadratic, ModelKind::KNNCoarse,
    ModelKind::KNNCosine};

}  // namespace

TEST_CASE("model tokens round-trip and reject unknowns") {
    for (ModelKind kind : kAllKinds) {
        const auto token = model_token(kind);
        REQUIRE(parse_model_token(token).has_value());
        CHECK(*parse_model_token(token) == kind);
    }
    CHECK(!parse_model_token("perceptron").has_value());
    CHECK(model_tokens().size() == 10);
}

TEST_CASE("model spec validation") {
    Hyperparams bad;
    bad.logistic_lambda = 0.0;
    CHECK_THROWS(ModelSpec::make(ModelKind::LogisticRegression, 1, bad));
    Hyperparams bad2;
    bad2.svm_c = -1.0;
    CHECK_THROWS(ModelSpec::make(ModelKind::SVMLinear, 1, bad2));
    Hyperparams bad3;
    bad3.rounds = 0;
    CHECK_THROWS(ModelSpec::make(ModelKind::BoostedTree, 1, bad3));
    CHECK_NOTHROW(ModelSpec::make(ModelKind::BoostedTree, 1));
}

TEST_CASE("every kind trains, scores sum to 1, and predict is argmax") {
    std::mt19937_64 rng(71);
    const auto p = random_problem(rng, 60, 3, 2);
    std::vector<std::vector<double>> probes;
    std::normal_distribution<double> noise(0.0, 2.0);
    for (int i = 0; i < 40; ++i) probes.push_back({noise(rng) + 2, noise(rng) + 2, noise(rng) + 3});

    for (ModelKind kind : kAllKinds) {
        INFO("kind " << model_token(kind));
        const auto model = train_model(ModelSpec::make(kind, 5), p.x, p.y, p.classes);
        CHECK(model.class_names() == p.classes);
        for (const auto& q : probes) {
            const auto s = model.score(q);
            REQUIRE(s.size() == p.classes.size());
            double total = 0.0;
            for (double v : s) {
                CHECK(std::isfinite(v));
                CHECK(v >= 0.0);
                total += v;
            }
            CHECK(total == Catch::Approx(1.0).margin(1e-9));
            const int pred = model.predict(q);
            const auto mx = std::max_element(s.begin(), s.end());
            CHECK(pred == static_cast<int>(mx - s.begin()));
        }
    }
}

TEST_CASE("multiclass paths work for every kind") {
    std::mt19937_64 rng(73);
    const auto p = random_problem(rng, 90, 2, 3);
    for (ModelKind kind : kAllKinds) {
        INFO("kind " << model_token(kind));
        const auto model = train_model(ModelSpec::make(kind, 5), p.x, p.y, p.classes);
        int correct = 0;
        for (std::size_t i = 0; i < p.x.size(); ++i) correct += model.predict(p.x[i]) == p.y[i];
        // well-separated blobs: every learner should beat chance comfortably
        CHECK(correct > static_cast<int>(p.x.size() / 2));
    }
}

TEST_CASE("standardization parameters come from the training split only") {
    std::mt19937_64 rng(79);
    const auto p = random_problem(rng, 50, 2, 2);
    const auto model =
        train_model(ModelSpec::make(ModelKind::LogisticRegression, 1), p.x, p.y, p.classes);

    // training means/sds recomputed here
    const std::size_t d = p.x[0].size();
    std::vector<double> mean(d, 0.0);
    for (const auto& row : p.x)
        for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
    for (auto& v : mean) v /= static_cast<double>(p.x.size());
    std::vector<double> sd(d, 0.0);
    for (const auto& row : p.x)
        for (std::size_t j = 0; j < d; ++j) sd[j] += (row[j] - mean[j]) * (row[j] - mean[j]);
    for (auto& v : sd) v = std::sqrt(v / static_cast<double>(p.x.size() - 1));

    for (std::size_t j = 0; j < d; ++j) {
        CHECK(model.standardizer().mean()[j] == Catch::Approx(mean[j]).margin(1e-12));
        CHECK(model.standardizer().scale()[j] == Catch::Approx(sd[j]).margin(1e-12));
    }

    // scoring far-shifted queries must not move the stored parameters
    const auto before = model.standardizer().mean();
    (void)model.score({1e6, -1e6});
    CHECK(model.standardizer().mean() == before);
}

TEST_CASE("cosine knn and tree models skip standardization") {
    std::mt19937_64 rng(83);
    const auto p = random_problem(rng, 40, 2, 2);
    for (ModelKind kind : {ModelKind::KNNCosine, ModelKind::BoostedTree, ModelKind::BaggedTree,
                           ModelKind::RUSBoostedTree}) {
        const auto model = train_model(ModelSpec::make(kind, 1), p.x, p.y, p.classes);
        CHECK(model.standardizer().mean() == std::vector<double>{0.0, 0.0});
        CHECK(model.standardizer().scale() == std::vector<double>{1.0, 1.0});
    }
}

TEST_CASE("permuting training rows leaves decision functions unchanged") {
    std::mt19937_64 rng(89);
    const auto p = random_problem(rng, 50, 2, 2);
    auto perm = p;
    std::vector<std::size_t> order(p.x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < order.size(); ++i) {
        perm.x[i] = p.x[order[i]];
        perm.y[i] = p.y[order[i]];
    }

    std::vector<std::vector<double>> probes;
    std::normal_distribution<double> noise(0.0, 2.0);
    for (int i = 0; i < 50; ++i) probes.push_back({noise(rng) + 1, noise(rng) + 2});

    for (ModelKind kind : kPermutationInvariantKinds) {
        INFO("kind " << model_token(kind));
        const auto a = train_model(ModelSpec::make(kind, 3), p.x, p.y, p.classes);
        const auto b = train_model(ModelSpec::make(kind, 3), perm.x, perm.y, p.classes);
        for (const auto& q : probes) {
            const auto sa = a.score(q);
            const auto sb = b.score(q);
            for (std::size_t c = 0; c < sa.size(); ++c)
                CHECK(sa[c] == Catch::Approx(sb[c]).margin(1e-9));
        }
    }
}

TEST_CASE("training rejects labels outside the class list") {
    const std::vector<std::vector<double>> x{{0.0}, {1.0}};
    CHECK_THROWS(train_model(ModelSpec::make(ModelKind::NBGaussian, 1), x, {0, 2}, {"A", "B"}));
    CHECK_THROWS(train_model(ModelSpec::make(ModelKind::NBGaussian, 1), x, {0, 1}, {"A"}));
}
