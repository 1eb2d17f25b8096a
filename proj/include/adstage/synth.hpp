#pragma once

// Synthetic cohorts whose per-group biomarker moments match the published
// four-group summary table, enabling desk-scale end-to-end runs without the
// access-restricted registry data. Draws are independent truncated normals
// per variable; MMSE is drawn then clamped into its stage band so derived
// labels are consistent; CDR comes from the inverse staging map.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adstage/cohort.hpp"
#include "adstage/random.hpp"

namespace adstage {

struct Moments {
    double mean = 0.0;
    double sem = 0.0;  // published standard error; implied sd = sem * sqrt(n)
};

struct GroupMomentSpec {
    Stage stage = Stage::NC;
    std::size_t n = 0;
    Moments mmse, abeta42, ttau, ptau;
    Moments age{70.0, 0.5};  // summary tables publish an age row as well
};

// Stage bands for MMSE clamping, mirroring stage_mmse.
inline std::pair<int, int> mmse_band(Stage s) {
    switch (s) {
        case Stage::NC: return {26, 30};
        case Stage::MCI: return {20, 25};
        case Stage::MOD: return {10, 19};
        case Stage::SD: return {0, 9};
    }
    return {0, 30};
}

// The four published groups (SD, MOD, MCI, NC) with mean (sem) per variable.
inline std::vector<GroupMomentSpec> table1_specs() {
    return {
        GroupMomentSpec{Stage::SD, 20, {5.580, 0.88}, {232.88, 38.28}, {321.99, 133.25},
                        {42.5, 4.92}, {68.41, 2.51}},
        GroupMomentSpec{Stage::MOD, 101, {16.35, 0.24}, {193.72, 8.57}, {195.5, 24.64},
                        {53.13, 2.75}, {69.43, 0.78}},
        GroupMomentSpec{Stage::MCI, 152, {22.72, 0.09}, {226.43, 2.51}, {261.3, 42.06},
                        {45.24, 3.17}, {71.23, 0.75}},
        GroupMomentSpec{Stage::NC, 167, {28.47, 0.06}, {369.7, 10.00}, {150.8, 9.73},
                        {37.97, 1.06}, {66.85, 0.44}},
    };
}

namespace detail {

constexpr double kConcentrationFloor = 1.0;  // pg/ml

// Normal draw rejected until it clears the floor.
inline double truncated_normal(std::mt19937_64& rng, double mean, double sd, double floor) {
    std::normal_distribution<double> dist(mean, sd);
    for (int i = 0; i < 100000; ++i) {
        const double v = dist(rng);
        if (v > floor) return v;
    }
    throw std::runtime_error("truncated normal: rejection sampling stalled");
}

}  // namespace detail

// Mean of a normal(mean, sd) conditioned on exceeding `floor`; used by tests
// to predict empirical group means under truncation.
inline double truncated_normal_mean(double mean, double sd, double floor) {
    const double a = (floor - mean) / sd;
    const double phi = std::exp(-0.5 * a * a) / std::sqrt(2.0 * std::numbers::pi);
    const double tail = 0.5 * std::erfc(a / std::sqrt(2.0));
    return mean + sd * phi / tail;
}

inline std::vector<PatientRecord> generate_cohort(const std::vector<GroupMomentSpec>& specs,
                                                  std::uint64_t seed, double scale = 1.0) {
    if (specs.empty()) throw std::invalid_argument("generate_cohort: no group specs");
    if (!(scale > 0.0)) throw std::invalid_argument("generate_cohort: scale must be positive");
    std::vector<PatientRecord> cohort;
    std::size_t serial = 0;
    for (std::size_t g = 0; g < specs.size(); ++g) {
        const auto& spec = specs[g];
        if (spec.n < 2) throw std::invalid_argument("generate_cohort: group n must be at least 2");
        for (const auto* m : {&spec.mmse, &spec.abeta42, &spec.ttau, &spec.ptau, &spec.age}) {
            if (!(m->mean > 0.0))
                throw std::invalid_argument("generate_cohort: group mean must be positive");
            if (!(m->sem > 0.0))
                throw std::invalid_argument("generate_cohort: group sem must be positive");
        }
        const std::size_t count =
            static_cast<std::size_t>(std::llround(static_cast<double>(spec.n) * scale));
        const double root_n = std::sqrt(static_cast<double>(spec.n));
        auto rng = make_rng(seed, g);
        const auto [band_lo, band_hi] = mmse_band(spec.stage);
        for (std::size_t i = 0; i < count; ++i) {
            PatientRecord r;
            char id[24];
            std::snprintf(id, sizeof id, "S%06zu", serial++);
            r.id = id;
            const double abeta = detail::truncated_normal(rng, spec.abeta42.mean,
                                                          spec.abeta42.sem * root_n,
                                                          detail::kConcentrationFloor);
            const double ttau = detail::truncated_normal(rng, spec.ttau.mean,
                                                         spec.ttau.sem * root_n,
                                                         detail::kConcentrationFloor);
            const double ptau = detail::truncated_normal(rng, spec.ptau.mean,
                                                         spec.ptau.sem * root_n,
                                                         detail::kConcentrationFloor);
            r.panel = BiomarkerPanel::make(abeta, ttau, ptau);
            r.age = detail::truncated_normal(rng, spec.age.mean, spec.age.sem * root_n, 1.0);
            std::normal_distribution<double> mmse_dist(spec.mmse.mean, spec.mmse.sem * root_n);
            const int mmse = std::clamp(static_cast<int>(std::lround(mmse_dist(rng))), band_lo,
                                        band_hi);
            r.assessment.mmse = mmse;
            r.assessment.cdr_global = cdr_for_stage(spec.stage);
            cohort.push_back(std::move(r));
        }
    }
    return cohort;
}

}  // namespace adstage
