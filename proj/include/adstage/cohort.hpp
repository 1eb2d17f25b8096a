#pragma once

// Cohort construction: ingestion of the two CSV sources, per-patient merge,
// MMSE/CDR stage derivation, task-specific labeled datasets, and
// undersampling balance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "adstage/csv.hpp"
#include "adstage/random.hpp"

namespace adstage {

enum class Stage { NC, MCI, MOD, SD };
enum class Scheme { MMSE, CDR };
enum class Task { Binary, Multi };

inline const char* stage_name(Stage s) {
    switch (s) {
        case Stage::NC: return "NC";
        case Stage::MCI: return "MCI";
        case Stage::MOD: return "MOD";
        case Stage::SD: return "SD";
    }
    return "?";
}

inline const char* scheme_name(Scheme s) { return s == Scheme::MMSE ? "mmse" : "cdr"; }
inline const char* task_name(Task t) { return t == Task::Binary ? "binary" : "multi"; }

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSF panel in pg/ml; all concentrations strictly positive by construction.
struct BiomarkerPanel {
    double abeta42 = 0.0;
    double ttau = 0.0;
    double ptau = 0.0;
    double ratio = 0.0;  // abeta42 / ptau, recomputable

    static BiomarkerPanel make(double abeta42, double ttau, double ptau) {
        if (!(abeta42 > 0.0) || !(ttau > 0.0) || !(ptau > 0.0))
            throw DataError("biomarker concentrations must be strictly positive");
        return BiomarkerPanel{abeta42, ttau, ptau, abeta42 / ptau};
    }
};

struct AssessmentRecord {
    std::optional<int> mmse;         // integer in [0, 30]
    std::optional<double> cdr_global;  // one of {0, 0.5, 1, 2, 3}
};

struct PatientRecord {
    std::string id;
    double age = 0.0;  // informational only; never a feature
    BiomarkerPanel panel;
    AssessmentRecord assessment;
};

// Fixed feature column order used everywhere downstream.
inline const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names{"abeta42", "ttau", "ptau", "ratio"};
    return names;
}

struct LabeledDataset {
    std::vector<std::vector<double>> features;  // n x 4
    std::vector<int> labels;                    // index into class_names
    std::vector<std::string> class_names;       // Binary: NC, AD; Multi: NC, MCI, SD
    Scheme scheme = Scheme::MMSE;
    Task task = Task::Binary;
    std::vector<std::string> ids;  // row provenance, parallel to features

    std::size_t size() const { return features.size(); }
    std::size_t n_classes() const { return class_names.size(); }

    std::vector<std::size_t> class_counts() const {
        std::vector<std::size_t> counts(class_names.size(), 0);
        for (int y : labels) counts[static_cast<std::size_t>(y)]++;
        return counts;
    }
};

// ---------------------------------------------------------------------------
// Staging

// MMSE bands: NC=[26,30], MCI=[20,25], MOD=[10,19], SD=[0,9].
// The published prose overlaps at 26 and is silent on 9-10; the bands here
// resolve both boundaries toward the healthier band's stated lower bound
// and are the single source of truth for MMSE staging.
inline Stage stage_mmse(int score) {
    if (score < 0 || score > 30) throw DataError("MMSE score outside [0,30]");
    if (score >= 26) return Stage::NC;
    if (score >= 20) return Stage::MCI;
    if (score >= 10) return Stage::MOD;
    return Stage::SD;
}

// CDR global: 0 -> NC, 0.5 -> MCI, {1,2} -> MOD, 3 -> SD.
inline Stage stage_cdr(double rating) {
    if (rating == 0.0) return Stage::NC;
    if (rating == 0.5) return Stage::MCI;
    if (rating == 1.0 || rating == 2.0) return Stage::MOD;
    if (rating == 3.0) return Stage::SD;
    throw DataError("CDR rating outside {0, 0.5, 1, 2, 3}");
}

inline bool valid_cdr(double rating) {
    return rating == 0.0 || rating == 0.5 || rating == 1.0 || rating == 2.0 || rating == 3.0;
}

// Inverse staging map used when synthesizing CDR from a known stage.
inline double cdr_for_stage(Stage s) {
    switch (s) {
        case Stage::NC: return 0.0;
        case Stage::MCI: return 0.5;
        case Stage::MOD: return 1.0;
        case Stage::SD: return 3.0;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Ingestion

struct BiomarkerRow {
    std::string id;
    double age = 0.0;
    BiomarkerPanel panel;
};

struct AssessmentRow {
    std::string id;
    AssessmentRecord assessment;
};

template <typename Row>
struct ParsedRows {
    std::vector<Row> rows;
    std::size_t skipped = 0;                  // rows excluded for any reason
    std::vector<std::size_t> rejected_lines;  // 1-based line numbers of rejected rows
};

inline constexpr const char* kBiomarkerHeader = "id,age,csf_abeta42,csf_ttau,csf_ptau";
inline constexpr const char* kAssessmentHeader = "id,mmse,cdr_global";

// Header must match `id,age,csf_abeta42,csf_ttau,csf_ptau` exactly.
// Rows with missing or nonpositive biomarker values are counted and skipped;
// rows with non-numeric cells are rejected with their line number recorded.
inline ParsedRows<BiomarkerRow> parse_biomarker_csv(std::istream& in) {
    const auto lines = csv::read_lines(in);
    if (lines.empty() || csv::join_row(csv::split_row(lines[0])) != kBiomarkerHeader)
        throw ParseError("biomarkers.csv: expected header '" + std::string(kBiomarkerHeader) + "'");
    ParsedRows<BiomarkerRow> out;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto cells = csv::split_row(lines[li]);
        if (cells.size() != 5 || cells[0].empty()) {
            out.skipped++;
            out.rejected_lines.push_back(li + 1);
            continue;
        }
        bool absent = false, bad = false;
        double vals[4];
        for (int c = 0; c < 4; ++c) {
            const auto& cell = cells[static_cast<std::size_t>(c) + 1];
            if (csv::is_absent(cell)) {
                absent = true;
                continue;
            }
            if (auto v = csv::parse_number(cell)) {
                vals[c] = *v;
            } else {
                bad = true;
            }
        }
        if (bad) {
            out.skipped++;
            out.rejected_lines.push_back(li + 1);
            continue;
        }
        if (absent || !(vals[0] > 0.0) || !(vals[1] > 0.0) || !(vals[2] > 0.0) || !(vals[3] > 0.0)) {
            out.skipped++;  // missing or nonpositive measurement
            continue;
        }
        out.rows.push_back(BiomarkerRow{cells[0], vals[0], BiomarkerPanel::make(vals[1], vals[2], vals[3])});
    }
    return out;
}

// Header must match `id,mmse,cdr_global` exactly. Empty cells and NA mean
// absent; out-of-range scores reject the row.
inline ParsedRows<AssessmentRow> parse_assessment_csv(std::istream& in) {
    const auto lines = csv::read_lines(in);
    if (lines.empty() || csv::join_row(csv::split_row(lines[0])) != kAssessmentHeader)
        throw ParseError("assessments.csv: expected header '" + std::string(kAssessmentHeader) + "'");
    ParsedRows<AssessmentRow> out;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto cells = csv::split_row(lines[li]);
        if (cells.size() != 3 || cells[0].empty()) {
            out.skipped++;
            out.rejected_lines.push_back(li + 1);
            continue;
        }
        AssessmentRecord rec;
        bool bad = false;
        if (!csv::is_absent(cells[1])) {
            const auto v = csv::parse_number(cells[1]);
            if (!v || *v != std::floor(*v) || *v < 0.0 || *v > 30.0)
                bad = true;
            else
                rec.mmse = static_cast<int>(*v);
        }
        if (!csv::is_absent(cells[2])) {
            const auto v = csv::parse_number(cells[2]);
            if (!v || !valid_cdr(*v))
                bad = true;
            else
                rec.cdr_global = *v;
        }
        if (bad) {
            out.skipped++;
            out.rejected_lines.push_back(li + 1);
            continue;
        }
        out.rows.push_back(AssessmentRow{cells[0], rec});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Merge

// Inner join on patient id; patients present in only one source are dropped.
// Output sorted by id. Duplicate ids within one source are fatal.
inline std::vector<PatientRecord> merge_cohort(const std::vector<BiomarkerRow>& biomarkers,
                                               const std::vector<AssessmentRow>& assessments) {
    std::map<std::string, const BiomarkerRow*> by_id;
    for (const auto& b : biomarkers)
        if (!by_id.emplace(b.id, &b).second)
            throw DataError("duplicate patient id in biomarker source: " + b.id);
    std::set<std::string> seen_assessment;
    std::vector<PatientRecord> merged;
    for (const auto& a : assessments) {
        if (!seen_assessment.insert(a.id).second)
            throw DataError("duplicate patient id in assessment source: " + a.id);
        const auto it = by_id.find(a.id);
        if (it == by_id.end()) continue;
        merged.push_back(PatientRecord{a.id, it->second->age, it->second->panel, a.assessment});
    }
    std::sort(merged.begin(), merged.end(),
              [](const PatientRecord& x, const PatientRecord& y) { return x.id < y.id; });
    return merged;
}

// ---------------------------------------------------------------------------
// Task construction

inline std::optional<Stage> stage_of(const PatientRecord& r, Scheme scheme) {
    if (scheme == Scheme::MMSE) {
        if (!r.assessment.mmse) return std::nullopt;
        return stage_mmse(*r.assessment.mmse);
    }
    if (!r.assessment.cdr_global) return std::nullopt;
    return stage_cdr(*r.assessment.cdr_global);
}

struct TaskResult {
    LabeledDataset dataset;
    std::size_t dropped_missing_score = 0;
};

// Binary: NC vs AD (any dementia stage). Multi: NC / MCI / SD where the
// four-way MOD group folds into SD. Records lacking the scheme's score are
// dropped with a count. Feature columns in the fixed order
// (abeta42, ttau, ptau, ratio); age and the scores themselves never appear.
inline TaskResult make_task(const std::vector<PatientRecord>& records, Scheme scheme, Task task) {
    TaskResult out;
    LabeledDataset& ds = out.dataset;
    ds.scheme = scheme;
    ds.task = task;
    ds.class_names = task == Task::Binary ? std::vector<std::string>{"NC", "AD"}
                                          : std::vector<std::string>{"NC", "MCI", "SD"};
    for (const auto& r : records) {
        const auto st = stage_of(r, scheme);
        if (!st) {
            out.dropped_missing_score++;
            continue;
        }
        int label;
        if (task == Task::Binary) {
            label = *st == Stage::NC ? 0 : 1;
        } else {
            switch (*st) {
                case Stage::NC: label = 0; break;
                case Stage::MCI: label = 1; break;
                default: label = 2; break;  // MOD and SD collapse to SD
            }
        }
        ds.features.push_back({r.panel.abeta42, r.panel.ttau, r.panel.ptau, r.panel.ratio});
        ds.labels.push_back(label);
        ds.ids.push_back(r.id);
    }
    const auto counts = ds.class_counts();
    std::size_t present = 0;
    for (auto c : counts) present += c > 0 ? 1 : 0;
    if (present < 2) throw DataError("untrainable task: fewer than 2 classes present");
    return out;
}

// ---------------------------------------------------------------------------
// Balancing

// Uniform, seeded, without-replacement downsampling of every class to the
// minimum class count. Retained rows keep their original relative order so
// an already balanced dataset passes through unchanged.
inline LabeledDataset undersample(const LabeledDataset& data, std::uint64_t seed) {
    const auto counts = data.class_counts();
    std::size_t min_count = data.size();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) throw DataError("undersample: class with no samples: " + data.class_names[c]);
        min_count = std::min(min_count, counts[c]);
    }
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < data.size(); ++i)
            if (static_cast<std::size_t>(data.labels[i]) == c) members.push_back(i);
        auto rng = make_rng(seed, c);
        std::shuffle(members.begin(), members.end(), rng);
        members.resize(min_count);
        keep.insert(keep.end(), members.begin(), members.end());
    }
    std::sort(keep.begin(), keep.end());
    LabeledDataset out;
    out.class_names = data.class_names;
    out.scheme = data.scheme;
    out.task = data.task;
    for (auto i : keep) {
        out.features.push_back(data.features[i]);
        out.labels.push_back(data.labels[i]);
        if (!data.ids.empty()) out.ids.push_back(data.ids[i]);
    }
    return out;
}

}  // namespace adstage
