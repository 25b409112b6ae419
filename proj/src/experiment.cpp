#include "ordreg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "ordreg/json_util.hpp"
#include "ordreg/rng.hpp"

namespace ordreg {

namespace {

const std::array<ClassifierKind, 3> kAllClassifiers = {
    ClassifierKind::Argmax, ClassifierKind::L1Nearest, ClassifierKind::DotNearest};

bool requested(const ExperimentConfig& config, ClassifierKind classifier) {
    return std::find(config.classifiers.begin(), config.classifiers.end(), classifier) !=
           config.classifiers.end();
}

// Requested decoders usable with this encoding, in canonical column order.
std::vector<ClassifierKind> compatible_requested(const ExperimentConfig& config,
                                                 const Encoding& encoding) {
    std::vector<ClassifierKind> out;
    for (ClassifierKind classifier : kAllClassifiers) {
        if (requested(config, classifier) && is_compatible(encoding, classifier)) {
            out.push_back(classifier);
        }
    }
    return out;
}

void validate_config(const ExperimentConfig& config) {
    if (config.encodings.empty()) {
        throw ConfigError("experiment needs at least one encoding");
    }
    if (config.classifiers.empty()) {
        throw ConfigError("experiment needs at least one classifier");
    }
    bool any_pair = false;
    for (const Encoding& encoding : config.encodings) {
        if (!compatible_requested(config, encoding).empty()) {
            any_pair = true;
        }
    }
    if (!any_pair) {
        throw ConfigError("no compatible (encoding, classifier) pair in the experiment");
    }
    if (!config.synth.has_value() && !config.dataset_path.has_value()) {
        throw ConfigError("experiment needs either a synthetic data config or a dataset path");
    }
    if (config.synth.has_value() && config.dataset_path.has_value()) {
        throw ConfigError("experiment config has both synthetic data and a dataset path");
    }
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
    nlohmann::json doc;
    doc["scale"] = {{"class_count", config.class_count}, {"labels", config.scale_labels}};
    doc["findings"] = config.findings;
    nlohmann::json encodings = nlohmann::json::array();
    for (const Encoding& encoding : config.encodings) {
        encodings.push_back(encoding_name(encoding.kind));
    }
    doc["encodings"] = std::move(encodings);
    nlohmann::json classifiers = nlohmann::json::array();
    for (ClassifierKind classifier : config.classifiers) {
        classifiers.push_back(classifier_name(classifier));
    }
    doc["classifiers"] = std::move(classifiers);
    double sigma_squared = 1.0;
    for (const Encoding& encoding : config.encodings) {
        if (encoding.kind == EncodingKind::Gaussian) {
            sigma_squared = encoding.sigma_squared;
        }
    }
    doc["sigma_squared"] = sigma_squared;
    doc["model"] = {{"hidden_dims", config.hidden_dims}};
    doc["train"] = {{"batch_size", config.train.batch_size},
                    {"epochs", config.train.epochs},
                    {"lr_max", config.train.lr_max},
                    {"lr_min", config.train.lr_min},
                    {"beta1", config.train.adamw.beta1},
                    {"beta2", config.train.adamw.beta2},
                    {"epsilon", config.train.adamw.epsilon},
                    {"weight_decay", config.train.adamw.weight_decay}};
    if (config.synth.has_value()) {
        doc["data"] = {{"synth",
                        {{"n_patients", config.synth->n_patients},
                         {"samples_per_patient", config.synth->samples_per_patient},
                         {"n_findings", config.synth->n_findings},
                         {"class_count", config.synth->class_count},
                         {"feature_dim", config.synth->feature_dim},
                         {"feature_noise_sd", config.synth->feature_noise_sd},
                         {"label_noise_prob", config.synth->label_noise_prob},
                         {"seed", config.synth->seed}}}};
    } else if (config.dataset_path.has_value()) {
        doc["data"] = {{"path", *config.dataset_path}};
    }
    doc["test_fraction"] = config.test_fraction;
    doc["n_folds"] = config.n_folds;
    doc["split_seed"] = config.split_seed;
    doc["run_seed"] = config.run_seed;
    doc["init_seed"] = config.init_seed;
    return doc;
}

} // namespace

ExperimentConfig default_experiment_config() {
    ExperimentConfig config;
    config.encodings = {{EncodingKind::OneHot},      {EncodingKind::Gaussian},
                        {EncodingKind::ProgressBar}, {EncodingKind::SoftProgressBar},
                        {EncodingKind::Continuous},  {EncodingKind::BinaryNumber}};
    config.classifiers = {ClassifierKind::Argmax, ClassifierKind::L1Nearest,
                          ClassifierKind::DotNearest};
    return config;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, false);
    if (doc.is_discarded()) {
        throw ConfigError("experiment config is not valid JSON");
    }
    require_keys(doc,
                 {"scale", "findings", "encodings", "classifiers", "sigma_squared", "model",
                  "train", "data", "test_fraction", "n_folds", "split_seed", "run_seed",
                  "init_seed"},
                 "experiment config");

    ExperimentConfig config = default_experiment_config();

    if (doc.contains("scale")) {
        const auto& scale = doc.at("scale");
        require_keys(scale, {"class_count", "labels"}, "scale");
        config.class_count = require_field<int>(scale, "class_count", "scale");
        config.scale_labels = optional_field<std::vector<std::string>>(scale, "labels", {});
    }
    config.findings = optional_field<std::vector<std::string>>(doc, "findings", {});

    const double sigma_squared = optional_field<double>(doc, "sigma_squared", 1.0);
    if (doc.contains("encodings")) {
        config.encodings.clear();
        for (const auto& name : require_field<std::vector<std::string>>(doc, "encodings",
                                                                        "experiment config")) {
            config.encodings.push_back({parse_encoding_kind(name), sigma_squared});
        }
    } else {
        for (Encoding& encoding : config.encodings) {
            encoding.sigma_squared = sigma_squared;
        }
    }
    if (doc.contains("classifiers")) {
        config.classifiers.clear();
        for (const auto& name : require_field<std::vector<std::string>>(doc, "classifiers",
                                                                        "experiment config")) {
            config.classifiers.push_back(parse_classifier_kind(name));
        }
    }

    if (doc.contains("model")) {
        const auto& model = doc.at("model");
        require_keys(model, {"hidden_dims"}, "model config");
        config.hidden_dims = require_field<std::vector<int>>(model, "hidden_dims",
                                                             "model config");
    }
    if (doc.contains("train")) {
        const auto& train = doc.at("train");
        require_keys(train,
                     {"batch_size", "epochs", "lr_max", "lr_min", "beta1", "beta2", "epsilon",
                      "weight_decay"},
                     "train config");
        config.train.batch_size = optional_field<int>(train, "batch_size",
                                                      config.train.batch_size);
        config.train.epochs = optional_field<int>(train, "epochs", config.train.epochs);
        config.train.lr_max = optional_field<double>(train, "lr_max", config.train.lr_max);
        config.train.lr_min = optional_field<double>(train, "lr_min", config.train.lr_min);
        config.train.adamw.beta1 = optional_field<double>(train, "beta1",
                                                          config.train.adamw.beta1);
        config.train.adamw.beta2 = optional_field<double>(train, "beta2",
                                                          config.train.adamw.beta2);
        config.train.adamw.epsilon = optional_field<double>(train, "epsilon",
                                                            config.train.adamw.epsilon);
        config.train.adamw.weight_decay =
            optional_field<double>(train, "weight_decay", config.train.adamw.weight_decay);
    }

    const auto& data = doc.contains("data") ? doc.at("data") : nlohmann::json();
    if (!data.is_object()) {
        throw ConfigError("experiment config needs a \"data\" object");
    }
    require_keys(data, {"synth", "path"}, "data config");
    if (data.contains("synth")) {
        config.synth = synth_config_from_json(data.at("synth"));
    }
    if (data.contains("path")) {
        config.dataset_path = require_field<std::string>(data, "path", "data config");
    }

    config.test_fraction = optional_field<double>(doc, "test_fraction", config.test_fraction);
    config.n_folds = optional_field<int>(doc, "n_folds", config.n_folds);
    config.split_seed = optional_field<std::uint64_t>(doc, "split_seed", config.split_seed);
    config.run_seed = optional_field<std::uint64_t>(doc, "run_seed", config.run_seed);
    config.init_seed = optional_field<std::uint64_t>(doc, "init_seed", config.init_seed);

    validate_config(config);
    config.scale(); // label count check
    return config;
}

std::string experiment_config_hash(const ExperimentConfig& config) {
    const std::string canonical = config_to_json(config).dump();
    std::uint64_t hash = 0xcbf29ce484222325ULL; // FNV-1a
    for (unsigned char c : canonical) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

Dataset resolve_dataset(const ExperimentConfig& config) {
    validate_config(config);
    if (config.synth.has_value()) {
        return generate(*config.synth);
    }
    return load(*config.dataset_path);
}

TrainingSet training_set_for_patients(const Dataset& dataset,
                                      const std::vector<std::string>& findings,
                                      const std::vector<std::int64_t>& patients) {
    const std::set<std::int64_t> wanted(patients.begin(), patients.end());
    TrainingSet set;
    for (const Sample& sample : dataset.samples) {
        if (!wanted.contains(sample.patient_id)) {
            continue;
        }
        std::vector<int> labels;
        labels.reserve(findings.size());
        for (const std::string& finding : findings) {
            const auto it = sample.labels.find(finding);
            if (it == sample.labels.end()) {
                throw SchemaError("sample of patient " + std::to_string(sample.patient_id) +
                                  " is missing finding \"" + finding + "\"");
            }
            labels.push_back(it->second);
        }
        set.features.push_back(sample.features);
        set.labels.push_back(std::move(labels));
    }
    return set;
}

namespace {

std::vector<std::string> resolve_findings(const ExperimentConfig& config,
                                          const Dataset& dataset) {
    if (config.findings.empty()) {
        if (dataset.findings.empty()) {
            throw DataError("dataset carries no findings");
        }
        return dataset.findings;
    }
    for (const std::string& finding : config.findings) {
        if (std::find(dataset.findings.begin(), dataset.findings.end(), finding) ==
            dataset.findings.end()) {
            throw DataError("configured finding \"" + finding + "\" is not in the dataset");
        }
    }
    return config.findings;
}

int feature_dimension(const Dataset& dataset) {
    if (dataset.samples.empty()) {
        throw DataError("dataset is empty");
    }
    const std::size_t dim = dataset.samples.front().features.size();
    if (dim == 0) {
        throw DataError("dataset samples carry no features");
    }
    for (const Sample& sample : dataset.samples) {
        if (sample.features.size() != dim) {
            throw DataError("dataset feature lengths are inconsistent");
        }
    }
    return static_cast<int>(dim);
}

struct EvalData {
    std::vector<std::vector<double>> features;
    std::vector<std::vector<int>> labels; // per finding, 1..K
};

std::array<double, kWeightingCount> macro_kappas(const std::vector<ConfusionMatrix>& confusions) {
    std::array<double, kWeightingCount> out{};
    for (int w = 0; w < kWeightingCount; ++w) {
        std::vector<double> per_finding;
        per_finding.reserve(confusions.size());
        for (const ConfusionMatrix& confusion : confusions) {
            per_finding.push_back(kappa(confusion, static_cast<Weighting>(w)).value);
        }
        out[static_cast<std::size_t>(w)] = macro_average(per_finding);
    }
    return out;
}

EvalResult evaluate_params(const Checkpoint& checkpoint, const TrainingSet& data,
                           const std::vector<ClassifierKind>& classifiers) {
    const OrdinalScale scale = checkpoint.scale();
    const TargetMatrix targets(checkpoint.encoding, scale);
    const int d = targets.row_length();
    const std::size_t finding_count = checkpoint.findings.size();

    EvalResult result;
    for (ClassifierKind classifier : classifiers) {
        if (!is_compatible(checkpoint.encoding, classifier)) {
            throw CompatibilityError("classifier " + classifier_display_name(classifier) +
                                     " is not usable with this checkpoint's encoding");
        }
        result.confusions.emplace(
            classifier,
            std::vector<ConfusionMatrix>(finding_count, ConfusionMatrix(scale.class_count())));
    }

    for (std::size_t s = 0; s < data.features.size(); ++s) {
        const std::vector<double> output = forward(checkpoint.params, data.features[s]);
        for (std::size_t f = 0; f < finding_count; ++f) {
            const std::span<const double> slice(output.data() + f * static_cast<std::size_t>(d),
                                                static_cast<std::size_t>(d));
            for (ClassifierKind classifier : classifiers) {
                const int predicted = classify(classifier, slice, targets);
                result.confusions.at(classifier)[f].add(data.labels[s][f], predicted);
            }
        }
    }
    for (ClassifierKind classifier : classifiers) {
        result.macro_kappa[classifier] = macro_kappas(result.confusions.at(classifier));
    }
    return result;
}

} // namespace

EvalResult evaluate_model(const Checkpoint& checkpoint, const Dataset& dataset,
                          const std::vector<ClassifierKind>& classifiers) {
    std::vector<std::int64_t> patients;
    {
        std::set<std::int64_t> distinct;
        for (const Sample& sample : dataset.samples) {
            distinct.insert(sample.patient_id);
        }
        patients.assign(distinct.begin(), distinct.end());
    }
    const TrainingSet data =
        training_set_for_patients(dataset, checkpoint.findings, patients);
    if (data.features.empty()) {
        throw DataError("no samples to evaluate");
    }
    return evaluate_params(checkpoint, data, classifiers);
}

ExperimentRun run_experiment_full(const ExperimentConfig& config, const Dataset& dataset,
                                  const SplitPlan& plan, int jobs) {
    validate_config(config);
    const OrdinalScale scale = config.scale();
    const std::vector<std::string> findings = resolve_findings(config, dataset);
    const int input_dim = feature_dimension(dataset);
    const int n_folds = static_cast<int>(plan.folds.size());
    if (n_folds < 2) {
        throw ConfigError("experiment needs at least 2 folds");
    }

    const TrainingSet test_set =
        training_set_for_patients(dataset, findings, plan.test_patients);
    if (test_set.features.empty()) {
        throw DataError("test partition is empty");
    }

    // one training set per fold: all non-test patients outside that fold
    std::vector<TrainingSet> fold_train_sets;
    for (int f = 0; f < n_folds; ++f) {
        std::vector<std::int64_t> patients;
        for (int g = 0; g < n_folds; ++g) {
            if (g != f) {
                patients.insert(patients.end(), plan.folds[static_cast<std::size_t>(g)].begin(),
                                plan.folds[static_cast<std::size_t>(g)].end());
            }
        }
        fold_train_sets.push_back(training_set_for_patients(dataset, findings, patients));
        if (fold_train_sets.back().features.empty()) {
            throw DataError("fold " + std::to_string(f) + " has an empty training portion");
        }
    }

    struct Task {
        std::size_t encoding_index;
        int fold;
    };
    std::vector<Task> tasks;
    for (std::size_t e = 0; e < config.encodings.size(); ++e) {
        if (compatible_requested(config, config.encodings[e]).empty()) {
            continue; // nothing would consume this model
        }
        for (int f = 0; f < n_folds; ++f) {
            tasks.push_back({e, f});
        }
    }

    struct TaskResult {
        FoldModel model;
        std::map<ClassifierKind, std::array<double, kWeightingCount>> kappas;
    };
    std::vector<TaskResult> results(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());

    auto run_task = [&](std::size_t t) {
        const auto [e, f] = tasks[t];
        const Encoding& encoding = config.encodings[e];

        Checkpoint checkpoint;
        checkpoint.encoding = encoding;
        checkpoint.class_count = scale.class_count();
        checkpoint.scale_labels = scale.labels();
        checkpoint.findings = findings;
        checkpoint.mlp.input_dim = input_dim;
        checkpoint.mlp.hidden_dims = config.hidden_dims;
        checkpoint.mlp.output_dim =
            vector_length(encoding, scale.class_count()) * static_cast<int>(findings.size());
        // same per-fold init stream for every encoding
        checkpoint.mlp.init_seed = derive_seed(config.init_seed, static_cast<std::uint64_t>(f));
        checkpoint.train_seed =
            derive_seed(config.run_seed, e, static_cast<std::uint64_t>(f));

        TrainConfig train_config = config.train;
        train_config.seed = checkpoint.train_seed;

        TaskResult& slot = results[t];
        slot.model.encoding_index = e;
        slot.model.fold = f;
        try {
            TrainResult trained = train(checkpoint.mlp, train_config,
                                        fold_train_sets[static_cast<std::size_t>(f)], encoding,
                                        scale);
            checkpoint.params = std::move(trained.params);
        } catch (const TrainingError& err) {
            slot.model.failed = true;
            slot.model.failure = err.what();
            slot.model.checkpoint = std::move(checkpoint);
            return;
        }
        slot.model.checkpoint = std::move(checkpoint);

        const EvalResult eval = evaluate_params(slot.model.checkpoint, test_set,
                                                compatible_requested(config, encoding));
        slot.kappas = eval.macro_kappa;
    };

    const int worker_count = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
    if (worker_count == 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            run_task(t);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= tasks.size()) {
                    return;
                }
                try {
                    run_task(t);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> workers;
        for (int w = 0; w < worker_count; ++w) {
            workers.emplace_back(worker);
        }
        for (std::thread& w : workers) {
            w.join();
        }
        for (const std::exception_ptr& error : errors) {
            if (error) {
                std::rethrow_exception(error);
            }
        }
    }

    ExperimentRun run;
    run.table.config_hash = experiment_config_hash(config);
    run.table.split_seed = config.split_seed;
    run.table.run_seed = config.run_seed;
    run.table.init_seed = config.init_seed;

    // task index by (encoding, fold)
    std::map<std::pair<std::size_t, int>, std::size_t> task_index;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        task_index[{tasks[t].encoding_index, tasks[t].fold}] = t;
    }

    for (std::size_t e = 0; e < config.encodings.size(); ++e) {
        const Encoding& encoding = config.encodings[e];
        const std::vector<ClassifierKind> columns = compatible_requested(config, encoding);
        if (columns.empty()) {
            continue;
        }

        std::vector<std::size_t> fold_tasks;
        int surviving = 0;
        for (int f = 0; f < n_folds; ++f) {
            const std::size_t t = task_index.at({e, f});
            fold_tasks.push_back(t);
            if (!results[t].model.failed) {
                ++surviving;
            }
            run.models.push_back(results[t].model);
        }
        if (surviving == 0) {
            throw TrainingError("every fold diverged for encoding " +
                                encoding_name(encoding.kind) + ": " +
                                results[fold_tasks.front()].model.failure);
        }

        const bool collapse = encoding.kind == EncodingKind::OneHot && columns.size() == 3;
        auto make_row = [&](std::optional<ClassifierKind> column, ClassifierKind source) {
            MethodResult row;
            row.encoding = encoding;
            row.classifier = column;
            row.folds_used = surviving;
            for (int w = 0; w < kWeightingCount; ++w) {
                std::vector<double> values;
                for (const std::size_t t : fold_tasks) {
                    if (!results[t].model.failed) {
                        values.push_back(
                            results[t].kappas.at(source)[static_cast<std::size_t>(w)]);
                    }
                }
                CellValue& cell = row.cells[static_cast<std::size_t>(w)];
                if (values.size() < 2) {
                    cell.failed = true; // an SD needs at least two fold models
                } else {
                    const Spread spread = fold_spread(values);
                    cell.mean = spread.mean;
                    cell.sd = spread.sd;
                }
            }
            return row;
        };

        if (collapse) {
            // argmax, L1 and dot product agree on one-hot targets; report one row
            run.table.rows.push_back(make_row(std::nullopt, ClassifierKind::Argmax));
        } else {
            for (ClassifierKind classifier : columns) {
                run.table.rows.push_back(make_row(classifier, classifier));
            }
        }
    }

    apply_ranks(run.table);
    return run;
}

ResultTable run_experiment(const ExperimentConfig& config, int jobs) {
    const Dataset dataset = resolve_dataset(config);
    const SplitPlan plan = split(dataset, config.test_fraction, config.n_folds,
                                 config.split_seed);
    return run_experiment_full(config, dataset, plan, jobs).table;
}

} // namespace ordreg
