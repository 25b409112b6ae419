#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ordreg/checkpoint.hpp"
#include "ordreg/dataset.hpp"
#include "ordreg/results.hpp"
#include "ordreg/split.hpp"
#include "ordreg/train.hpp"

namespace ordreg {

// The full grid: which encodings and decoders to compare, how to train, and
// where the data comes from (an embedded synthetic config or a dataset file).
struct ExperimentConfig {
    int class_count = 5;
    std::vector<std::string> scale_labels;  // empty -> scale defaults
    std::vector<std::string> findings;      // empty -> the dataset's findings
    std::vector<Encoding> encodings;
    std::vector<ClassifierKind> classifiers;
    std::vector<int> hidden_dims = {64, 64};
    TrainConfig train;
    std::optional<SynthConfig> synth;
    std::optional<std::string> dataset_path;
    double test_fraction = 0.2;
    int n_folds = 5;
    std::uint64_t split_seed = 0;
    std::uint64_t run_seed = 0;
    std::uint64_t init_seed = 0;

    OrdinalScale scale() const {
        return scale_labels.empty() ? OrdinalScale(class_count)
                                    : OrdinalScale(class_count, scale_labels);
    }
};

// All six encodings against all three decoders, the grid the reports expect.
ExperimentConfig default_experiment_config();

// Strict JSON mirror of ExperimentConfig; unknown keys are rejected.
ExperimentConfig parse_experiment_config(const std::string& json_text);

// Stable fingerprint of the full config, for table metadata.
std::string experiment_config_hash(const ExperimentConfig& config);

// Loads the dataset file or generates the embedded synthetic config.
Dataset resolve_dataset(const ExperimentConfig& config);

struct FoldModel {
    std::size_t encoding_index = 0;
    int fold = 0;
    bool failed = false;
    std::string failure;
    Checkpoint checkpoint;
};

struct ExperimentRun {
    ResultTable table;
    std::vector<FoldModel> models; // encoding-major, fold-minor
};

// Per-classifier confusion matrices (one per finding) and macro-averaged
// kappas of one model over a labelled dataset.
struct EvalResult {
    std::map<ClassifierKind, std::vector<ConfusionMatrix>> confusions;
    std::map<ClassifierKind, std::array<double, kWeightingCount>> macro_kappa;
};

EvalResult evaluate_model(const Checkpoint& checkpoint, const Dataset& dataset,
                          const std::vector<ClassifierKind>& classifiers);

// Trains one model per (encoding, fold) on the fold's training portion,
// evaluates every fold model on the shared held-out test set, aggregates
// mean and SD over folds, and assigns competition ranks per weighting.
// Deterministic for a given config, whatever the worker count.
ExperimentRun run_experiment_full(const ExperimentConfig& config, const Dataset& dataset,
                                  const SplitPlan& plan, int jobs = 1);

ResultTable run_experiment(const ExperimentConfig& config, int jobs = 1);

// Feature/label rows for the samples of the given patients, labels ordered
// by the finding list.
TrainingSet training_set_for_patients(const Dataset& dataset,
                                      const std::vector<std::string>& findings,
                                      const std::vector<std::int64_t>& patients);

} // namespace ordreg
