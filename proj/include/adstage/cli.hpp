#pragma once

// Command implementations behind the CLI front end: ingestion -> staging ->
// statistics -> training/evaluation -> reports. All outputs land under the
// configured output directory and are deterministic for a fixed seed.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "adstage/cohort.hpp"
#include "adstage/eval.hpp"
#include "adstage/model.hpp"
#include "adstage/report.hpp"
#include "adstage/stats.hpp"
#include "adstage/synth.hpp"

namespace adstage {

// Exit codes; each failure family is distinct so scripts can tell them apart.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitUsage = 2,
    kExitUnknownModel = 3,
    kExitBadCombination = 4,
    kExitMissingFile = 5,
    kExitBadData = 6,
};

struct RunConfig {
    std::string command;  // stage | summarize | correlate | evaluate | compare | synth
    std::string biomarkers_path;
    std::string assessments_path;
    std::string scheme = "mmse";
    std::string task = "binary";
    std::string model = "boosted";
    std::size_t folds = 5;
    bool stratified = true;
    std::uint64_t seed = 42;
    bool balance = false;
    std::size_t jobs = 1;
    std::string out_dir = ".";
    // synth
    std::string preset = "table1";
    std::string spec_path;
    double scale = 1.0;
    // hyperparameter overrides
    Hyperparams params;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["command"] = command;
        if (!biomarkers_path.empty()) j["biomarkers"] = biomarkers_path;
        if (!assessments_path.empty()) j["assessments"] = assessments_path;
        j["scheme"] = scheme;
        j["task"] = task;
        j["model"] = model;
        j["folds"] = folds;
        j["stratified"] = stratified;
        j["seed"] = seed;
        j["balance"] = balance;
        j["out"] = out_dir;
        nlohmann::ordered_json hp;
        hp["lambda"] = params.logistic_lambda;
        hp["svm_c"] = params.svm_c;
        hp["knn_coarse_k"] = params.knn_coarse_k;
        hp["knn_cosine_k"] = params.knn_cosine_k;
        hp["rounds"] = params.rounds;
        hp["boost_max_depth"] = params.boost_max_depth;
        hp["bagged_max_depth"] = params.bagged_max_depth;
        hp["min_leaf"] = params.min_leaf;
        j["hyperparameters"] = hp;
        return j;
    }
};

namespace detail {

inline Scheme parse_scheme(const std::string& s) {
    if (s == "mmse") return Scheme::MMSE;
    if (s == "cdr") return Scheme::CDR;
    throw std::invalid_argument("unknown scheme: " + s);
}

inline Task parse_task(const std::string& s) {
    if (s == "binary") return Task::Binary;
    if (s == "multi") return Task::Multi;
    throw std::invalid_argument("unknown task: " + s);
}

inline std::vector<PatientRecord> load_cohort(const RunConfig& cfg) {
    for (const auto& path : {cfg.biomarkers_path, cfg.assessments_path})
        if (!std::filesystem::exists(path))
            throw std::system_error(std::make_error_code(std::errc::no_such_file_or_directory),
                                    path);
    std::ifstream bio(cfg.biomarkers_path, std::ios::binary);
    std::ifstream assess(cfg.assessments_path, std::ios::binary);
    const auto biomarkers = parse_biomarker_csv(bio);
    const auto assessments = parse_assessment_csv(assess);
    if (biomarkers.skipped > 0)
        std::cerr << "note: skipped " << biomarkers.skipped << " biomarker row(s)\n";
    if (assessments.skipped > 0)
        std::cerr << "note: skipped " << assessments.skipped << " assessment row(s)\n";
    return merge_cohort(biomarkers.rows, assessments.rows);
}

inline LabeledDataset build_dataset(const RunConfig& cfg, const std::vector<PatientRecord>& cohort) {
    const auto scheme = parse_scheme(cfg.scheme);
    const auto task = parse_task(cfg.task);
    auto result = make_task(cohort, scheme, task);
    if (result.dropped_missing_score > 0)
        std::cerr << "note: dropped " << result.dropped_missing_score
                  << " record(s) lacking the " << cfg.scheme << " score\n";
    if (cfg.balance) return undersample(result.dataset, cfg.seed);
    return result.dataset;
}

inline ModelSpec spec_for(const RunConfig& cfg, ModelKind kind) {
    return ModelSpec::make(kind, cfg.seed, cfg.params);
}

inline std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return std::filesystem::path(cfg.out_dir) / name;
}

inline std::pair<MetricsReport, CvResult> evaluate_model(const RunConfig& cfg,
                                                         const LabeledDataset& data,
                                                         ModelKind kind, std::uint64_t seed) {
    auto spec = spec_for(cfg, kind).with_seed(seed);
    const auto plan = kfold(data.labels, cfg.folds, seed, cfg.stratified);
    auto cv = cross_validate(spec, data, plan, cfg.jobs > 1);
    auto rep = metrics(cv.confusion);
    // binary reports use the disease class; multiclass reports designate NC
    const std::size_t designated = data.task == Task::Binary ? 1 : 0;
    attach_auc(rep, cv.scores, data.labels, designated);
    return {std::move(rep), std::move(cv)};
}

inline void print_metrics_line(std::ostream& os, const std::string& model,
                               const MetricsReport& rep) {
    os << model << ": accuracy " << std::round(rep.accuracy * 1000.0) / 10.0 << "%";
    for (const auto& c : rep.per_class) {
        os << ", TPR(" << c.name << ") ";
        if (c.tpr)
            os << std::round(*c.tpr * 1000.0) / 10.0 << "%";
        else
            os << "NA";
    }
    if (rep.auc) os << ", AUC " << std::round(*rep.auc * 100.0) / 100.0;
    os << '\n';
}

// ---------------------------------------------------------------------------
// Subcommands

inline int cmd_correlate_inner(const RunConfig& cfg, const std::vector<PatientRecord>& cohort);

inline int cmd_stage(const RunConfig& cfg) {
    const auto cohort = load_cohort(cfg);
    const auto data = build_dataset(cfg, cohort);
    write_text_file(out_path(cfg, "staged.csv").string(), staged_csv(data));
    const auto counts = data.class_counts();
    std::cout << "staged " << data.size() << " patients (" << cfg.scheme << ", " << cfg.task
              << ")\n";
    for (std::size_t c = 0; c < counts.size(); ++c)
        std::cout << "  " << data.class_names[c] << ": " << counts[c] << '\n';
    return kExitOk;
}

inline int cmd_summarize(const RunConfig& cfg, bool with_correlations) {
    const auto cohort = load_cohort(cfg);
    const auto groups = group_summary(cohort, parse_scheme(cfg.scheme));
    write_text_file(out_path(cfg, "summary.csv").string(), summary_csv(groups));
    std::cout << "wrote summary.csv (" << groups.size() << " groups)\n";
    if (with_correlations) return cmd_correlate_inner(cfg, cohort);
    return kExitOk;
}

// Correlations of each biomarker against the MMSE score, pooled and within
// the four MMSE-staged groups; one-way ANOVA across groups printed alongside.
inline int cmd_correlate_inner(const RunConfig& cfg, const std::vector<PatientRecord>& cohort) {
    struct Variable {
        const char* name;
        double BiomarkerPanel::*field;
    };
    const Variable variables[] = {{"abeta42", &BiomarkerPanel::abeta42},
                                  {"ttau", &BiomarkerPanel::ttau},
                                  {"ptau", &BiomarkerPanel::ptau},
                                  {"ratio", &BiomarkerPanel::ratio}};
    const Stage group_order[] = {Stage::SD, Stage::MOD, Stage::MCI, Stage::NC};

    std::vector<CorrelationRow> rows;
    std::ostringstream anova_lines;
    for (const auto& var : variables) {
        std::vector<double> all_x, all_y;
        std::vector<std::vector<double>> group_values;
        for (Stage st : group_order) {
            std::vector<double> gx, gy;
            for (const auto& r : cohort) {
                if (!r.assessment.mmse) continue;
                if (stage_mmse(*r.assessment.mmse) != st) continue;
                gx.push_back(r.panel.*var.field);
                gy.push_back(static_cast<double>(*r.assessment.mmse));
            }
            all_x.insert(all_x.end(), gx.begin(), gx.end());
            all_y.insert(all_y.end(), gy.begin(), gy.end());
            if (gx.size() >= 2) group_values.push_back(gx);
            CorrelationRow row{var.name, stage_name(st), std::nullopt};
            if (gx.size() >= 3) {
                try {
                    row.result = pearson(gx, gy);
                } catch (const std::exception&) {
                }
            }
            rows.push_back(std::move(row));
        }
        CorrelationRow total{var.name, "total", std::nullopt};
        if (all_x.size() >= 3) {
            try {
                total.result = pearson(all_x, all_y);
            } catch (const std::exception&) {
            }
        }
        rows.insert(rows.end() - 4, std::move(total));
        if (group_values.size() >= 2) {
            const auto a = anova_oneway(group_values);
            anova_lines << "anova " << var.name << ": F=" << a.f_stat << " df=(" << a.df_between
                        << ',' << a.df_within << ") p=" << a.p << '\n';
        }
    }
    write_text_file(out_path(cfg, "correlations.csv").string(), correlations_csv(rows));
    std::cout << "wrote correlations.csv\n" << anova_lines.str();
    return kExitOk;
}

inline int cmd_correlate(const RunConfig& cfg) {
    return cmd_correlate_inner(cfg, load_cohort(cfg));
}

inline int cmd_evaluate(const RunConfig& cfg) {
    const auto kind = parse_model_token(cfg.model);
    if (!kind) throw std::domain_error("unknown model token: " + cfg.model);
    const auto cohort = load_cohort(cfg);
    const auto data = build_dataset(cfg, cohort);
    auto [rep, cv] = evaluate_model(cfg, data, *kind, cfg.seed);

    write_text_file(out_path(cfg, "metrics.json").string(),
                    metrics_json(rep, cfg.to_json(), cfg.task, cfg.scheme, cfg.model, cfg.folds,
                                 cfg.seed, data.size()));
    write_text_file(out_path(cfg, "confusion.csv").string(), confusion_csv(cv.confusion));
    if (data.task == Task::Binary) {
        const auto [s, pos] = one_vs_rest(cv.scores, data.labels, 1);
        write_text_file(out_path(cfg, "roc.csv").string(), roc_csv(roc(s, pos)));
    } else {
        for (std::size_t c = 0; c < data.class_names.size(); ++c) {
            const auto [s, pos] = one_vs_rest(cv.scores, data.labels, c);
            write_text_file(out_path(cfg, "roc_" + data.class_names[c] + ".csv").string(),
                            roc_csv(roc(s, pos)));
        }
    }
    print_metrics_line(std::cout, cfg.model, rep);
    return kExitOk;
}

// Binary: the nine models of the published comparison tables.
// Multi: RUSBoost + bagged on the imbalanced task, boosted + bagged balanced.
inline std::vector<ModelKind> compare_roster(Task task, bool balance) {
    if (task == Task::Binary)
        return {ModelKind::BoostedTree,  ModelKind::NBGaussian, ModelKind::NBKernel,
                ModelKind::SVMLinear,    ModelKind::SVMQuadratic, ModelKind::KNNCoarse,
                ModelKind::KNNCosine,    ModelKind::LogisticRegression, ModelKind::BaggedTree};
    if (balance) return {ModelKind::BoostedTree, ModelKind::BaggedTree};
    return {ModelKind::RUSBoostedTree, ModelKind::BaggedTree};
}

inline int cmd_compare(const RunConfig& cfg) {
    const auto cohort = load_cohort(cfg);
    const auto data = build_dataset(cfg, cohort);
    const auto roster = compare_roster(parse_task(cfg.task), cfg.balance);

    std::vector<std::future<MetricsReport>> futures;
    for (std::size_t m = 0; m < roster.size(); ++m)
        futures.push_back(std::async(std::launch::async, [&, m] {
            return evaluate_model(cfg, data, roster[m], mix_seed(cfg.seed, m)).first;
        }));
    std::vector<std::pair<std::string, MetricsReport>> rows;
    for (std::size_t m = 0; m < roster.size(); ++m)
        rows.emplace_back(model_token(roster[m]), futures[m].get());

    write_text_file(out_path(cfg, "compare.csv").string(), compare_csv(data.class_names, rows));
    for (const auto& [model, rep] : rows) print_metrics_line(std::cout, model, rep);
    return kExitOk;
}

inline std::vector<GroupMomentSpec> load_specs(const RunConfig& cfg) {
    if (cfg.spec_path.empty()) {
        if (cfg.preset != "table1") throw std::invalid_argument("unknown preset: " + cfg.preset);
        return table1_specs();
    }
    if (!std::filesystem::exists(cfg.spec_path))
        throw std::system_error(std::make_error_code(std::errc::no_such_file_or_directory),
                                cfg.spec_path);
    std::ifstream in(cfg.spec_path);
    nlohmann::json j;
    in >> j;
    std::vector<GroupMomentSpec> specs;
    for (const auto& item : j) {
        GroupMomentSpec s;
        const std::string stage = item.at("stage");
        if (stage == "NC")
            s.stage = Stage::NC;
        else if (stage == "MCI")
            s.stage = Stage::MCI;
        else if (stage == "MOD")
            s.stage = Stage::MOD;
        else if (stage == "SD")
            s.stage = Stage::SD;
        else
            throw std::invalid_argument("unknown stage in spec: " + stage);
        s.n = item.at("n");
        auto moments = [&](const char* key) {
            const auto& m = item.at(key);
            return Moments{m.at("mean"), m.at("sem")};
        };
        s.mmse = moments("mmse");
        s.abeta42 = moments("abeta42");
        s.ttau = moments("ttau");
        s.ptau = moments("ptau");
        if (item.contains("age")) s.age = moments("age");
        specs.push_back(s);
    }
    return specs;
}

inline int cmd_synth(const RunConfig& cfg) {
    const auto specs = load_specs(cfg);
    const auto cohort = generate_cohort(specs, cfg.seed, cfg.scale);
    write_text_file(out_path(cfg, "biomarkers.csv").string(), biomarkers_csv(cohort));
    write_text_file(out_path(cfg, "assessments.csv").string(), assessments_csv(cohort));
    std::cout << "synthesized " << cohort.size() << " patients\n";
    return kExitOk;
}

}  // namespace detail

// Dispatches a validated configuration; maps failures onto distinct exit
// codes with one diagnostic line on stderr.
inline int run(const RunConfig& cfg) {
    try {
        if (cfg.command != "synth") {
            detail::parse_scheme(cfg.scheme);
            detail::parse_task(cfg.task);
        }
        if (cfg.folds < 2) throw std::invalid_argument("folds must be at least 2");
        if (cfg.command == "stage") return detail::cmd_stage(cfg);
        if (cfg.command == "summarize") return detail::cmd_summarize(cfg, true);
        if (cfg.command == "correlate") return detail::cmd_correlate(cfg);
        if (cfg.command == "evaluate") return detail::cmd_evaluate(cfg);
        if (cfg.command == "compare") return detail::cmd_compare(cfg);
        if (cfg.command == "synth") return detail::cmd_synth(cfg);
        std::cerr << "error: unknown command: " << cfg.command << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnknownModel;
    } catch (const std::system_error& e) {
        std::cerr << "error: missing input file: " << e.what() << '\n';
        return kExitMissingFile;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadData;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadCombination;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace adstage
