#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "adstage/distributions.hpp"

using namespace adstage;

TEST_CASE("incomplete beta edge values") {
    CHECK(ibeta(2.0, 3.0, 0.0) == 0.0);
    CHECK(ibeta(2.0, 3.0, 1.0) == 1.0);
    // I_x(1,1) is the identity
    CHECK(ibeta(1.0, 1.0, 0.3) == Catch::Approx(0.3).epsilon(1e-12));
    // I_x(1,b) = 1 - (1-x)^b
    CHECK(ibeta(1.0, 4.0, 0.2) == Catch::Approx(1.0 - std::pow(0.8, 4)).epsilon(1e-12));
    CHECK_THROWS(ibeta(0.0, 1.0, 0.5));
    CHECK_THROWS(ibeta(1.0, 1.0, 1.5));
}

TEST_CASE("incomplete beta symmetry identity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ab(0.2, 20.0), xs(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double a = ab(rng), b = ab(rng), x = xs(rng);
        CHECK(ibeta(a, b, x) + ibeta(b, a, 1.0 - x) == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("student t cdf against published quantiles") {
    // t distribution with 1 df is Cauchy: F(1) = 3/4 exactly
    CHECK(student_t_cdf(1.0, 1.0) == Catch::Approx(0.75).epsilon(1e-12));
    CHECK(student_t_cdf(0.0, 7.0) == Catch::Approx(0.5).margin(1e-15));
    // classic table quantiles (4-5 significant digits)
    CHECK(student_t_cdf(1.8125, 10.0) == Catch::Approx(0.95).margin(3e-4));
    CHECK(student_t_cdf(2.2281, 10.0) == Catch::Approx(0.975).margin(3e-4));
    CHECK(student_t_cdf(2.7764, 4.0) == Catch::Approx(0.975).margin(3e-4));
    CHECK(student_t_cdf(-1.8125, 10.0) == Catch::Approx(0.05).margin(3e-4));
}

TEST_CASE("F cdf against closed forms and published quantiles") {
    // F(2,2) has cdf f/(1+f): the 95th percentile is exactly 19
    CHECK(f_cdf(19.0, 2.0, 2.0) == Catch::Approx(0.95).epsilon(1e-12));
    CHECK(f_cdf(4.9646, 1.0, 10.0) == Catch::Approx(0.95).margin(3e-4));
    CHECK(f_cdf(3.3258, 5.0, 10.0) == Catch::Approx(0.95).margin(3e-4));
    CHECK(f_sf(19.0, 2.0, 2.0) == Catch::Approx(0.05).epsilon(1e-10));
    CHECK(f_cdf(0.0, 3.0, 3.0) == 0.0);
}

TEST_CASE("F and t distributions agree through F = t^2") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ts(-4.0, 4.0), dfs(2.0, 40.0);
    for (int i = 0; i < 500; ++i) {
        const double t = ts(rng);
        const double df = std::floor(dfs(rng));
        const double two_sided = student_t_two_sided_p(t, df);
        CHECK(f_sf(t * t, 1.0, df) == Catch::Approx(two_sided).margin(1e-12));
    }
}

TEST_CASE("normal cdf sanity") {
    CHECK(normal_cdf(0.0) == Catch::Approx(0.5).margin(1e-15));
    CHECK(normal_cdf(1.959964) == Catch::Approx(0.975).margin(1e-6));
    CHECK(normal_cdf(-1.959964) == Catch::Approx(0.025).margin(1e-6));
}
