// ordreg command line: synthetic data generation, patient-wise splits,
// the encoding/classifier experiment grid, checkpoint evaluation, and
// report regeneration from result tables.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ordreg/experiment.hpp"

namespace fs = std::filesystem;
using namespace ordreg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitTraining = 3;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot open " + path.string() + " for writing");
    }
    out << content;
    if (!out) {
        throw DataError("failed writing " + path.string());
    }
}

struct GenerateArgs {
    std::string config_path;
    std::string out_path = "dataset.jsonl";
    std::int64_t seed = -1;
};

int run_generate(const GenerateArgs& args) {
    SynthConfig config = parse_synth_config(read_file(args.config_path));
    if (args.seed >= 0) {
        config.seed = static_cast<std::uint64_t>(args.seed);
    }
    const Dataset dataset = generate(config);
    save(dataset, args.out_path);
    std::cout << "wrote " << dataset.samples.size() << " samples ("
              << config.n_patients << " patients, " << dataset.findings.size()
              << " findings) to " << args.out_path << "\n";
    return kExitOk;
}

struct SplitArgs {
    std::string data_path;
    std::string out_path = "split.json";
    double test_fraction = 0.2;
    int folds = 5;
    std::int64_t seed = 0;
};

int run_split(const SplitArgs& args) {
    const Dataset dataset = load(args.data_path);
    const SplitPlan plan = split(dataset, args.test_fraction, args.folds,
                                 static_cast<std::uint64_t>(args.seed));
    save_split(plan, args.out_path);
    std::size_t fold_patients = 0;
    for (const auto& fold : plan.folds) {
        fold_patients += fold.size();
    }
    std::cout << "split " << plan.test_patients.size() << " test patients and "
              << fold_patients << " training patients across " << plan.folds.size()
              << " folds into " << args.out_path << "\n";
    return kExitOk;
}

struct ExperimentArgs {
    std::string config_path;
    std::string out_dir = "results";
    std::string format = "md";
    int jobs = 0;
    std::int64_t seed = -1;
};

int run_experiment_command(const ExperimentArgs& args) {
    ExperimentConfig config = parse_experiment_config(read_file(args.config_path));
    if (args.seed >= 0) {
        config.run_seed = static_cast<std::uint64_t>(args.seed);
    }
    const int jobs = args.jobs > 0
                         ? args.jobs
                         : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    const auto started = std::chrono::steady_clock::now();
    const Dataset dataset = resolve_dataset(config);
    const SplitPlan plan = split(dataset, config.test_fraction, config.n_folds,
                                 config.split_seed);
    const ExperimentRun run = run_experiment_full(config, dataset, plan, jobs);
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);

    const fs::path out_dir(args.out_dir);
    fs::create_directories(out_dir / "checkpoints");
    write_file(out_dir / "results.csv", render_csv(run.table));
    write_file(out_dir / "results.md", render_markdown(run.table));
    write_file(out_dir / "rank_change.txt", rank_change_text(run.table));
    write_file(out_dir / "rank_change.csv", rank_change_csv(run.table));
    save_split(plan, out_dir / "split.json");

    Dataset test_set;
    test_set.findings = dataset.findings;
    {
        const std::set<std::int64_t> test_ids(plan.test_patients.begin(),
                                              plan.test_patients.end());
        for (const Sample& sample : dataset.samples) {
            if (test_ids.contains(sample.patient_id)) {
                test_set.samples.push_back(sample);
            }
        }
    }
    save(test_set, out_dir / "test_set.jsonl");

    for (const FoldModel& model : run.models) {
        if (model.failed) {
            std::cout << "fold " << model.fold << " of "
                      << encoding_name(model.checkpoint.encoding.kind)
                      << " diverged: " << model.failure << "\n";
            continue;
        }
        const std::string name = encoding_name(model.checkpoint.encoding.kind) + "_fold" +
                                 std::to_string(model.fold) + ".json";
        save_checkpoint(model.checkpoint, out_dir / "checkpoints" / name);
    }

    if (args.format == "csv") {
        std::cout << render_csv(run.table);
    } else {
        std::cout << render_markdown(run.table) << "\n" << rank_change_text(run.table);
    }
    std::cout << "\nconfig " << run.table.config_hash << ", " << run.models.size()
              << " fold models, " << elapsed.count() / 1000.0 << " s; outputs in "
              << out_dir.string() << "\n";
    return kExitOk;
}

struct EvaluateArgs {
    std::string checkpoint_path;
    std::string data_path;
    std::string out_path;
    std::string format = "md";
};

int run_evaluate(const EvaluateArgs& args) {
    const Checkpoint checkpoint = load_checkpoint(args.checkpoint_path);
    const Dataset dataset = load(args.data_path);

    std::vector<ClassifierKind> classifiers;
    for (ClassifierKind classifier :
         {ClassifierKind::Argmax, ClassifierKind::L1Nearest, ClassifierKind::DotNearest}) {
        if (is_compatible(checkpoint.encoding, classifier)) {
            classifiers.push_back(classifier);
        }
    }
    const EvalResult eval = evaluate_model(checkpoint, dataset, classifiers);

    std::string out;
    if (args.format == "csv") {
        out = "classifier,unweighted_kappa,linear_kappa,quadratic_kappa\n";
        for (ClassifierKind classifier : classifiers) {
            const auto& kappas = eval.macro_kappa.at(classifier);
            char line[128];
            std::snprintf(line, sizeof(line), "%s,%.3f,%.3f,%.3f\n",
                          classifier_display_name(classifier).c_str(), kappas[0], kappas[1],
                          kappas[2]);
            out += line;
        }
    } else {
        out = "| Class.-fn | Unweight. κ | Lin. κ | Quad. κ |\n"
              "|---|---|---|---|\n";
        for (ClassifierKind classifier : classifiers) {
            const auto& kappas = eval.macro_kappa.at(classifier);
            char line[128];
            std::snprintf(line, sizeof(line), "| %s | %.3f | %.3f | %.3f |\n",
                          classifier_display_name(classifier).c_str(), kappas[0], kappas[1],
                          kappas[2]);
            out += line;
        }
    }
    std::cout << "encoding " << encoding_name(checkpoint.encoding.kind) << ", "
              << dataset.samples.size() << " samples, macro average over "
              << checkpoint.findings.size() << " findings\n"
              << out;
    if (!args.out_path.empty()) {
        write_file(args.out_path, out);
    }
    return kExitOk;
}

struct ReportArgs {
    std::string input_path;
    std::string out_dir;
    std::string format = "md";
};

int run_report(const ReportArgs& args) {
    const ResultTable table = parse_table_csv(read_file(args.input_path));
    const std::string rendered =
        args.format == "csv" ? render_csv(table) : render_markdown(table);
    std::cout << rendered << "\n" << rank_change_text(table);
    if (!args.out_dir.empty()) {
        const fs::path out_dir(args.out_dir);
        write_file(out_dir / (args.format == "csv" ? "results.csv" : "results.md"), rendered);
        write_file(out_dir / "rank_change.txt", rank_change_text(table));
        write_file(out_dir / "rank_change.csv", rank_change_csv(table));
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ordinal regression experiments: target encodings, decoders, "
                 "weighted kappa"};
    app.require_subcommand(1);

    GenerateArgs generate_args;
    auto* generate_cmd =
        app.add_subcommand("generate", "generate a synthetic ordinal dataset");
    generate_cmd->add_option("--config", generate_args.config_path,
                             "synthetic config JSON")->required();
    generate_cmd->add_option("--seed", generate_args.seed, "override the config seed");
    generate_cmd->add_option("--out", generate_args.out_path, "output dataset file");

    SplitArgs split_args;
    auto* split_cmd =
        app.add_subcommand("split", "build a patient-wise test/fold split plan");
    split_cmd->add_option("--data", split_args.data_path, "dataset file")->required();
    split_cmd->add_option("--test-fraction", split_args.test_fraction,
                          "patient share held out for testing");
    split_cmd->add_option("--folds", split_args.folds, "number of cross-validation folds");
    split_cmd->add_option("--seed", split_args.seed, "shuffle seed");
    split_cmd->add_option("--out", split_args.out_path, "output plan file");

    ExperimentArgs experiment_args;
    auto* experiment_cmd =
        app.add_subcommand("experiment", "train and evaluate the full method grid");
    experiment_cmd->add_option("--config", experiment_args.config_path,
                               "experiment config JSON")->required();
    experiment_cmd->add_option("--out", experiment_args.out_dir, "output directory");
    experiment_cmd->add_option("--format", experiment_args.format, "stdout format")
        ->check(CLI::IsMember({"csv", "md"}));
    experiment_cmd->add_option("--jobs", experiment_args.jobs,
                               "training workers (0 = all cores)");
    experiment_cmd->add_option("--seed", experiment_args.seed, "override the run seed");

    EvaluateArgs evaluate_args;
    auto* evaluate_cmd =
        app.add_subcommand("evaluate", "score a checkpoint against a dataset");
    evaluate_cmd->add_option("--checkpoint", evaluate_args.checkpoint_path,
                             "model checkpoint")->required();
    evaluate_cmd->add_option("--data", evaluate_args.data_path, "dataset file")->required();
    evaluate_cmd->add_option("--out", evaluate_args.out_path, "also write the table here");
    evaluate_cmd->add_option("--format", evaluate_args.format, "output format")
        ->check(CLI::IsMember({"csv", "md"}));

    ReportArgs report_args;
    auto* report_cmd =
        app.add_subcommand("report", "re-render a results CSV as tables and rank changes");
    report_cmd->add_option("--input", report_args.input_path, "results CSV")->required();
    report_cmd->add_option("--out", report_args.out_dir, "output directory");
    report_cmd->add_option("--format", report_args.format, "output format")
        ->check(CLI::IsMember({"csv", "md"}));

    try {
        app.parse(argc, argv);
        if (generate_cmd->parsed()) {
            return run_generate(generate_args);
        }
        if (split_cmd->parsed()) {
            return run_split(split_args);
        }
        if (experiment_cmd->parsed()) {
            return run_experiment_command(experiment_args);
        }
        if (evaluate_cmd->parsed()) {
            return run_evaluate(evaluate_args);
        }
        if (report_cmd->parsed()) {
            return run_report(report_args);
        }
        return kExitConfig;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    } catch (const TrainingError& e) {
        std::cerr << "training failure: " << e.what() << "\n";
        return kExitTraining;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
