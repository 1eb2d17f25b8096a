#pragma once

// Writers for every artifact the CLI emits. Numbers are rendered with
// shortest round-trip formatting; undefined metrics appear as NA in CSV and
// null in JSON, never as silent zeros or NaN.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "adstage/cohort.hpp"
#include "adstage/csv.hpp"
#include "adstage/eval.hpp"
#include "adstage/stats.hpp"
#include "adstage/synth.hpp"

namespace adstage {

inline constexpr int kReportSchemaVersion = 1;

inline std::string format_cell(std::optional<double> v) {
    return v ? csv::format_number(*v) : std::string("NA");
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << body;
}

// staged.csv: id,abeta42,ttau,ptau,ratio,label
inline std::string staged_csv(const LabeledDataset& ds) {
    std::ostringstream os;
    os << "id,abeta42,ttau,ptau,ratio,label\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        os << (i < ds.ids.size() ? ds.ids[i] : "");
        for (double v : ds.features[i]) os << ',' << csv::format_number(v);
        os << ',' << ds.class_names[static_cast<std::size_t>(ds.labels[i])] << '\n';
    }
    return os.str();
}

// confusion.csv: (K+1) x (K+1) table with class-name headers
inline std::string confusion_csv(const ConfusionMatrix& cm) {
    std::ostringstream os;
    os << "class";
    for (const auto& name : cm.class_names) os << ',' << name;
    os << '\n';
    for (std::size_t r = 0; r < cm.counts.size(); ++r) {
        os << cm.class_names[r];
        for (auto v : cm.counts[r]) os << ',' << v;
        os << '\n';
    }
    return os.str();
}

// roc.csv: threshold,fpr,tpr with thresholds descending
inline std::string roc_csv(const RocCurve& curve) {
    std::ostringstream os;
    os << "threshold,fpr,tpr\n";
    for (const auto& p : curve.points)
        os << csv::format_number(p.threshold) << ',' << csv::format_number(p.fpr) << ','
           << csv::format_number(p.tpr) << '\n';
    return os.str();
}

// summary.csv: rows = groups, columns = n plus mean/sem per variable
inline std::string summary_csv(const std::vector<GroupSummary>& groups) {
    std::ostringstream os;
    os << "group,n";
    for (const char* v : {"age", "mmse", "abeta42", "ttau", "ptau", "ratio"})
        os << ',' << v << "_mean," << v << "_sem";
    os << '\n';
    for (const auto& g : groups) {
        os << stage_name(g.group) << ',' << g.n;
        for (const MeanSem* m : {&g.age, &g.mmse, &g.abeta42, &g.ttau, &g.ptau, &g.ratio}) {
            os << ',' << (m->n > 0 ? csv::format_number(m->mean) : "NA");
            os << ',' << format_cell(m->sem);
        }
        os << '\n';
    }
    return os.str();
}

struct CorrelationRow {
    std::string variable;
    std::string group;
    std::optional<CorrelationResult> result;  // absent when not computable
};

// correlations.csv: variable,group,r,p,n
inline std::string correlations_csv(const std::vector<CorrelationRow>& rows) {
    std::ostringstream os;
    os << "variable,group,r,p,n\n";
    for (const auto& row : rows) {
        os << row.variable << ',' << row.group << ',';
        if (row.result) {
            os << csv::format_number(row.result->r) << ',' << csv::format_number(row.result->p)
               << ',' << row.result->n;
        } else {
            os << "NA,NA,0";
        }
        os << '\n';
    }
    return os.str();
}

inline nlohmann::ordered_json metrics_to_json(const MetricsReport& rep) {
    nlohmann::ordered_json j;
    j["accuracy"] = rep.accuracy;
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    j["per_class"] = nlohmann::ordered_json::array();
    for (const auto& c : rep.per_class) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["tpr"] = opt(c.tpr);
        jc["fnr"] = opt(c.fnr);
        jc["ppv"] = opt(c.ppv);
        jc["fdr"] = opt(c.fdr);
        jc["auc"] = opt(c.auc);
        j["per_class"].push_back(jc);
    }
    j["auc"] = opt(rep.auc);
    j["auc_macro"] = opt(rep.auc_macro);
    return j;
}

// metrics.json: schema version, resolved run configuration, then the
// metric block; fractions throughout (percent formatting is display-only).
inline std::string metrics_json(const MetricsReport& rep, const nlohmann::ordered_json& config,
                                const std::string& task, const std::string& scheme,
                                const std::string& model, std::size_t folds, std::uint64_t seed,
                                std::size_t n_rows) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = config;
    j["task"] = task;
    j["scheme"] = scheme;
    j["model"] = model;
    j["folds"] = folds;
    j["seed"] = seed;
    j["n"] = n_rows;
    for (auto& [key, value] : metrics_to_json(rep).items()) j[key] = value;
    return j.dump(2) + "\n";
}

// compare.csv: one row per model, accuracy then per-class TPR columns
inline std::string compare_csv(const std::vector<std::string>& class_names,
                               const std::vector<std::pair<std::string, MetricsReport>>& rows) {
    std::ostringstream os;
    os << "model,accuracy";
    for (auto name : class_names) {
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        os << ",tpr_" << name;
    }
    os << '\n';
    for (const auto& [model, rep] : rows) {
        os << model << ',' << csv::format_number(rep.accuracy);
        for (const auto& c : rep.per_class) os << ',' << format_cell(c.tpr);
        os << '\n';
    }
    return os.str();
}

// The two canonical input files, written by the synth command.
inline std::string biomarkers_csv(const std::vector<PatientRecord>& cohort) {
    std::ostringstream os;
    os << kBiomarkerHeader << '\n';
    for (const auto& r : cohort)
        os << r.id << ',' << csv::format_number(r.age) << ',' << csv::format_number(r.panel.abeta42)
           << ',' << csv::format_number(r.panel.ttau) << ',' << csv::format_number(r.panel.ptau)
           << '\n';
    return os.str();
}

inline std::string assessments_csv(const std::vector<PatientRecord>& cohort) {
    std::ostringstream os;
    os << kAssessmentHeader << '\n';
    for (const auto& r : cohort) {
        os << r.id << ',';
        if (r.assessment.mmse) os << *r.assessment.mmse;
        os << ',';
        if (r.assessment.cdr_global) os << csv::format_number(*r.assessment.cdr_global);
        os << '\n';
    }
    return os.str();
}

}  // namespace adstage
