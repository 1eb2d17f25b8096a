#pragma once

// Group summaries (mean / SEM), Pearson correlation with two-sided
// significance, and one-way ANOVA. Sample (n-1) variance throughout,
// matching the SEM = sd/sqrt(n) convention of the summary tables.

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adstage/cohort.hpp"
#include "adstage/distributions.hpp"

namespace adstage {

struct MeanSem {
    double mean = 0.0;
    std::optional<double> sem;  // undefined when fewer than 2 values
    std::size_t n = 0;
};

inline MeanSem mean_sem(const std::vector<double>& values) {
    MeanSem out;
    out.n = values.size();
    if (values.empty()) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        const double var = ss / static_cast<double>(values.size() - 1);
        out.sem = std::sqrt(var / static_cast<double>(values.size()));
    }
    return out;
}

struct GroupSummary {
    Stage group = Stage::NC;
    std::size_t n = 0;
    MeanSem age, mmse, abeta42, ttau, ptau, ratio;
};

// Four-way per-stage summaries under the chosen staging scheme. Records
// lacking the scheme's score are excluded; variables absent for individual
// records (e.g. MMSE under CDR staging) are summarized over present values.
inline std::vector<GroupSummary> group_summary(const std::vector<PatientRecord>& records,
                                               Scheme scheme) {
    const Stage order[] = {Stage::SD, Stage::MOD, Stage::MCI, Stage::NC};
    std::vector<GroupSummary> out;
    for (Stage st : order) {
        std::vector<double> age, mmse, abeta, ttau, ptau, ratio;
        for (const auto& r : records) {
            const auto s = stage_of(r, scheme);
            if (!s || *s != st) continue;
            age.push_back(r.age);
            if (r.assessment.mmse) mmse.push_back(static_cast<double>(*r.assessment.mmse));
            abeta.push_back(r.panel.abeta42);
            ttau.push_back(r.panel.ttau);
            ptau.push_back(r.panel.ptau);
            ratio.push_back(r.panel.ratio);
        }
        GroupSummary g;
        g.group = st;
        g.n = age.size();
        g.age = mean_sem(age);
        g.mmse = mean_sem(mmse);
        g.abeta42 = mean_sem(abeta);
        g.ttau = mean_sem(ttau);
        g.ptau = mean_sem(ptau);
        g.ratio = mean_sem(ratio);
        out.push_back(g);
    }
    return out;
}

struct CorrelationResult {
    double r = 0.0;
    double p = 1.0;
    std::size_t n = 0;
};

// Textbook Pearson r; two-sided p from t = r*sqrt((n-2)/(1-r^2)) against
// Student t with n-2 degrees of freedom.
inline CorrelationResult pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("pearson: need at least 3 pairs");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw DataError("pearson: constant vector has zero variance");
    CorrelationResult out;
    out.n = n;
    out.r = sxy / std::sqrt(sxx * syy);
    if (out.r > 1.0) out.r = 1.0;
    if (out.r < -1.0) out.r = -1.0;
    const double df = static_cast<double>(n - 2);
    const double denom = 1.0 - out.r * out.r;
    if (denom <= 0.0) {
        out.p = 0.0;
    } else {
        const double t = out.r * std::sqrt(df / denom);
        out.p = student_t_two_sided_p(t, df);
    }
    return out;
}

struct AnovaResult {
    double f_stat = 0.0;  // +infinity marks zero within-group variance with spread between
    std::size_t df_between = 0;
    std::size_t df_within = 0;
    double p = 1.0;
};

inline AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw std::invalid_argument("anova_oneway: need at least 2 groups");
    std::size_t total_n = 0;
    for (const auto& g : groups) {
        if (g.size() < 2) throw std::invalid_argument("anova_oneway: each group needs n >= 2");
        total_n += g.size();
    }
    const std::size_t k = groups.size();
    if (total_n <= k) throw std::invalid_argument("anova_oneway: total N must exceed group count");

    double grand = 0.0;
    for (const auto& g : groups)
        for (double v : g) grand += v;
    grand /= static_cast<double>(total_n);

    double ss_between = 0.0, ss_within = 0.0;
    for (const auto& g : groups) {
        double gm = 0.0;
        for (double v : g) gm += v;
        gm /= static_cast<double>(g.size());
        ss_between += static_cast<double>(g.size()) * (gm - grand) * (gm - grand);
        for (double v : g) ss_within += (v - gm) * (v - gm);
    }

    AnovaResult out;
    out.df_between = k - 1;
    out.df_within = total_n - k;
    if (ss_within == 0.0) {
        if (ss_between == 0.0) {
            out.f_stat = 0.0;
            out.p = 1.0;
        } else {
            out.f_stat = std::numeric_limits<double>::infinity();
            out.p = 0.0;
        }
        return out;
    }
    const double ms_between = ss_between / static_cast<double>(out.df_between);
    const double ms_within = ss_within / static_cast<double>(out.df_within);
    out.f_stat = ms_between / ms_within;
    out.p = f_sf(out.f_stat, static_cast<double>(out.df_between), static_cast<double>(out.df_within));
    return out;
}

}  // namespace adstage
