#pragma once

#include <cstdint>
#include <vector>

#include "ordreg/encoding.hpp"
#include "ordreg/mlp.hpp"
#include "ordreg/optim.hpp"

namespace ordreg {

struct TrainConfig {
    int batch_size = 32;
    int epochs = 30;
    double lr_max = 5e-4;
    double lr_min = 0.0;
    std::uint64_t seed = 0; // shuffle stream
    AdamWConfig adamw;
};

// Flattened view of a dataset: one feature row and one label row (class per
// finding, values 1..K) per sample.
struct TrainingSet {
    std::vector<std::vector<double>> features;
    std::vector<std::vector<int>> labels;
};

struct TrainResult {
    ModelParams params;
    std::vector<double> epoch_loss; // mean batch loss per epoch
};

// MSE training with AdamW and one cosine cycle over all steps. Per-sample
// targets concatenate encode(label) across findings; the sample order is
// reshuffled every epoch from the seed. Fully deterministic given
// (config.init_seed, train.seed).
TrainResult train(const MlpConfig& mlp, const TrainConfig& config, const TrainingSet& data,
                  const Encoding& encoding, const OrdinalScale& scale);

// The per-sample target vector used by train(): encode() of each finding's
// label, concatenated in finding order.
std::vector<double> concat_targets(const TargetMatrix& targets, const std::vector<int>& labels);

} // namespace ordreg
