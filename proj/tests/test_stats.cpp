#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "adstage/stats.hpp"

using namespace adstage;

namespace {

// Definition-level recomputations kept independent of the implementation.
long double oracle_pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    long double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxy += static_cast<long double>(x[i]) * y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        syy += static_cast<long double>(y[i]) * y[i];
    }
    const long double num = n * sxy - sx * sy;
    const long double den = sqrtl((n * sxx - sx * sx) * (n * syy - sy * sy));
    return num / den;
}

long double oracle_anova_f(const std::vector<std::vector<double>>& groups) {
    long double grand = 0;
    std::size_t total_n = 0;
    for (const auto& g : groups) {
        for (double v : g) grand += v;
        total_n += g.size();
    }
    grand /= total_n;
    long double ssb = 0, ssw = 0;
    for (const auto& g : groups) {
        long double gm = 0;
        for (double v : g) gm += v;
        gm /= g.size();
        ssb += static_cast<long double>(g.size()) * (gm - grand) * (gm - grand);
        for (double v : g) ssw += (v - gm) * (v - gm);
    }
    const std::size_t dfb = groups.size() - 1;
    const std::size_t dfw = total_n - groups.size();
    return (ssb / dfb) / (ssw / dfw);
}

// Pooled-variance two-sample t statistic.
long double oracle_two_sample_t(const std::vector<double>& a, const std::vector<double>& b) {
    long double ma = 0, mb = 0;
    for (double v : a) ma += v;
    for (double v : b) mb += v;
    ma /= a.size();
    mb /= b.size();
    long double ssa = 0, ssb = 0;
    for (double v : a) ssa += (v - ma) * (v - ma);
    for (double v : b) ssb += (v - mb) * (v - mb);
    const long double pooled = (ssa + ssb) / static_cast<long double>(a.size() + b.size() - 2);
    return (ma - mb) / sqrtl(pooled * (1.0L / a.size() + 1.0L / b.size()));
}

PatientRecord rec(std::string id, int mmse, double abeta, double ttau, double ptau, double age) {
    PatientRecord r;
    r.id = std::move(id);
    r.age = age;
    r.panel = BiomarkerPanel::make(abeta, ttau, ptau);
    r.assessment.mmse = mmse;
    return r;
}

}  // namespace

TEST_CASE("mean and sem basics") {
    const auto m = mean_sem({2, 4, 6});
    CHECK(m.mean == 4.0);
    REQUIRE(m.sem.has_value());
    CHECK(*m.sem == Catch::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(*m.sem == Catch::Approx(1.1547).margin(1e-4));

    const auto c = mean_sem({5, 5, 5});
    CHECK(c.mean == 5.0);
    CHECK(*c.sem == 0.0);

    CHECK(!mean_sem({3.0}).sem.has_value());  // undefined, not zero
}

TEST_CASE("pearson exact examples") {
    CHECK(pearson({1, 2, 3}, {2, 4, 6}).r == Catch::Approx(1.0).margin(1e-14));
    CHECK(pearson({1, 2, 3}, {3, 2, 1}).r == Catch::Approx(-1.0).margin(1e-14));
    CHECK(pearson({1, 2, 3, 4}, {1, 3, 2, 4}).r == Catch::Approx(0.8).margin(1e-14));
    CHECK_THROWS_AS(pearson({1, 1, 1}, {1, 2, 3}), DataError);
    CHECK_THROWS(pearson({1, 2}, {1, 2}));
}

TEST_CASE("pearson symmetry and affine invariance") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    std::uniform_real_distribution<double> pos(0.1, 5.0);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 3 + rng() % 40;
        std::vector<double> x(n), y(n);
        for (auto& v : x) v = val(rng);
        for (auto& v : y) v = val(rng);
        const auto xy = pearson(x, y);
        const auto yx = pearson(y, x);
        CHECK(xy.r == Catch::Approx(yx.r).margin(1e-14));
        const double a = pos(rng), b = val(rng);
        std::vector<double> xt(n);
        for (std::size_t i = 0; i < n; ++i) xt[i] = a * x[i] + b;
        CHECK(pearson(xt, y).r == Catch::Approx(xy.r).margin(1e-12));
    }
}

TEST_CASE("pearson matches the definition-level oracle") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 3 + rng() % 48;
        std::vector<double> x(n), y(n);
        for (auto& v : x) v = val(rng);
        for (auto& v : y) v = val(rng);
        const auto r = pearson(x, y);
        CHECK(r.r == Catch::Approx(static_cast<double>(oracle_pearson_r(x, y))).margin(1e-10));
    }
}

TEST_CASE("anova exact examples") {
    const auto same = anova_oneway({{1, 2, 3}, {1, 2, 3}});
    CHECK(same.f_stat == 0.0);
    CHECK(same.p == 1.0);

    const auto f8 = anova_oneway({{2, 4}, {6, 8}});
    CHECK(f8.f_stat == Catch::Approx(8.0).margin(1e-12));
    CHECK(f8.df_between == 1);
    CHECK(f8.df_within == 2);

    const auto degenerate = anova_oneway({{0, 0}, {1, 1}});
    CHECK(std::isinf(degenerate.f_stat));
    CHECK(degenerate.p == 0.0);

    CHECK_THROWS(anova_oneway({{1, 2}}));
    CHECK_THROWS(anova_oneway({{1}, {2, 3}}));
}

TEST_CASE("anova matches oracle and F equals t^2 on two groups") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t k = 2 + rng() % 4;
        std::vector<std::vector<double>> groups(k);
        for (auto& g : groups) {
            g.resize(2 + rng() % 12);
            for (auto& v : g) v = val(rng);
        }
        const auto a = anova_oneway(groups);
        CHECK(a.f_stat ==
              Catch::Approx(static_cast<double>(oracle_anova_f(groups))).margin(1e-10));
    }
    for (int t = 0; t < 300; ++t) {
        std::vector<double> g1(2 + rng() % 20), g2(2 + rng() % 20);
        for (auto& v : g1) v = val(rng);
        for (auto& v : g2) v = val(rng);
        const auto a = anova_oneway({g1, g2});
        const long double tt = oracle_two_sample_t(g1, g2);
        CHECK(a.f_stat == Catch::Approx(static_cast<double>(tt * tt)).margin(1e-10));
    }
}

TEST_CASE("group summary means match a streaming recomputation exactly") {
    std::vector<PatientRecord> records;
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> conc(10.0, 400.0);
    for (int i = 0; i < 200; ++i) {
        const int mmse = static_cast<int>(rng() % 31);
        records.push_back(rec("R" + std::to_string(i), mmse, conc(rng), conc(rng), conc(rng),
                              55.0 + static_cast<double>(rng() % 40)));
    }
    const auto groups = group_summary(records, Scheme::MMSE);
    REQUIRE(groups.size() == 4);
    for (const auto& g : groups) {
        // independent streaming pass over the same records
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& r : records) {
            if (stage_mmse(*r.assessment.mmse) != g.group) continue;
            sum += r.panel.abeta42;
            ++n;
        }
        REQUIRE(n == g.n);
        CHECK(g.abeta42.mean == sum / static_cast<double>(n));  // bitwise equal
    }
}

TEST_CASE("group summary flags undefined sem for singleton groups") {
    std::vector<PatientRecord> records{rec("A", 28, 300, 100, 30, 70),
                                       rec("B", 27, 310, 110, 31, 71),
                                       rec("C", 5, 200, 400, 50, 80)};
    const auto groups = group_summary(records, Scheme::MMSE);
    for (const auto& g : groups) {
        if (g.group == Stage::NC) {
            CHECK(g.n == 2);
            CHECK(g.abeta42.sem.has_value());
        }
        if (g.group == Stage::SD) {
            CHECK(g.n == 1);
            CHECK(!g.abeta42.sem.has_value());
        }
    }
}
