// adstage: stage classification pipeline over CSF biomarker panels.
//
//   adstage synth     --preset table1 --seed 7 --out data/
//   adstage stage     --biomarkers data/biomarkers.csv --assessments data/assessments.csv ...
//   adstage summarize / correlate / evaluate / compare
//
// See README.md for the full flag reference.

#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "adstage/cli.hpp"

int main(int argc, char** argv) {
    adstage::RunConfig cfg;
    if (const char* env_out = std::getenv("ADSTAGE_OUT")) cfg.out_dir = env_out;

    CLI::App app{"Alzheimer's stage classification from CSF biomarkers"};
    app.require_subcommand(1);

    auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--biomarkers", cfg.biomarkers_path, "biomarkers.csv path")->required();
        cmd->add_option("--assessments", cfg.assessments_path, "assessments.csv path")->required();
        cmd->add_option("--out", cfg.out_dir, "output directory");
    };
    auto add_task = [&](CLI::App* cmd) {
        cmd->add_option("--scheme", cfg.scheme, "staging scheme: mmse|cdr");
        cmd->add_option("--task", cfg.task, "task: binary|multi");
        cmd->add_flag("--balance", cfg.balance, "undersample classes to the minimum count");
        cmd->add_option("--seed", cfg.seed, "random seed");
    };
    auto add_eval = [&](CLI::App* cmd) {
        cmd->add_option("--folds", cfg.folds, "cross-validation folds");
        cmd->add_flag("!--no-stratify", cfg.stratified, "disable stratified folds");
        cmd->add_option("--jobs", cfg.jobs, "parallel fold workers");
        cmd->add_option("--lambda", cfg.params.logistic_lambda, "logistic L2 penalty");
        cmd->add_option("--svm-c", cfg.params.svm_c, "SVM box constraint");
        cmd->add_option("--knn-coarse-k", cfg.params.knn_coarse_k, "coarse KNN neighbors");
        cmd->add_option("--knn-cosine-k", cfg.params.knn_cosine_k, "cosine KNN neighbors");
        cmd->add_option("--rounds", cfg.params.rounds, "boosting rounds / bags");
        cmd->add_option("--max-depth", cfg.params.boost_max_depth, "boosted tree depth");
        cmd->add_option("--bagged-max-depth", cfg.params.bagged_max_depth,
                        "bagged tree depth (-1 = unlimited)");
        cmd->add_option("--min-leaf", cfg.params.min_leaf, "minimum rows per leaf");
    };

    auto* stage = app.add_subcommand("stage", "emit staged.csv and class counts");
    add_io(stage);
    add_task(stage);

    auto* summarize = app.add_subcommand("summarize", "per-group mean/SEM table");
    add_io(summarize);
    summarize->add_option("--scheme", cfg.scheme, "staging scheme: mmse|cdr");

    auto* correlate = app.add_subcommand("correlate", "biomarker vs MMSE correlations and ANOVA");
    add_io(correlate);

    auto* evaluate = app.add_subcommand("evaluate", "cross-validate one model");
    add_io(evaluate);
    add_task(evaluate);
    add_eval(evaluate);
    evaluate->add_option("--model", cfg.model,
                         "logistic|nb-gauss|nb-kernel|svm-linear|svm-quadratic|"
                         "knn-coarse|knn-cosine|boosted|bagged|rusboost");

    auto* compare = app.add_subcommand("compare", "cross-validate the comparison roster");
    add_io(compare);
    add_task(compare);
    add_eval(compare);

    auto* synth = app.add_subcommand("synth", "write a synthetic cohort as the two canonical CSVs");
    synth->add_option("--preset", cfg.preset, "moment preset (table1)");
    synth->add_option("--spec", cfg.spec_path, "JSON group-moment spec file");
    synth->add_option("--scale", cfg.scale, "group size multiplier");
    synth->add_option("--seed", cfg.seed, "random seed");
    synth->add_option("--out", cfg.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : adstage::kExitUsage;
    }

    for (auto* cmd : {stage, summarize, correlate, evaluate, compare, synth})
        if (cmd->parsed()) cfg.command = cmd->get_name();
    return adstage::run(cfg);
}
