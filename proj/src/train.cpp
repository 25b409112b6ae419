#include "ordreg/train.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "ordreg/rng.hpp"

namespace ordreg {

std::vector<double> concat_targets(const TargetMatrix& targets, const std::vector<int>& labels) {
    std::vector<double> out;
    out.reserve(labels.size() * static_cast<std::size_t>(targets.row_length()));
    for (int k : labels) {
        const auto row = targets.row(k);
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

TrainResult train(const MlpConfig& mlp, const TrainConfig& config, const TrainingSet& data,
                  const Encoding& encoding, const OrdinalScale& scale) {
    if (config.epochs < 1) {
        throw ConfigError("training needs epochs >= 1");
    }
    if (config.batch_size < 1) {
        throw ConfigError("training needs batch_size >= 1");
    }
    const std::size_t n = data.features.size();
    if (n == 0) {
        throw ConfigError("training on an empty dataset");
    }
    if (data.labels.size() != n) {
        throw ShapeError("feature and label counts differ");
    }

    const std::size_t finding_count = data.labels.front().size();
    if (finding_count == 0) {
        throw ConfigError("training needs at least one finding");
    }
    const TargetMatrix targets(encoding, scale);
    const int target_dim = targets.row_length() * static_cast<int>(finding_count);
    if (mlp.output_dim != target_dim) {
        throw ConfigError("output_dim " + std::to_string(mlp.output_dim) +
                          " does not match target length " + std::to_string(target_dim));
    }

    std::vector<std::vector<double>> sample_targets;
    sample_targets.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        if (data.features[s].size() != static_cast<std::size_t>(mlp.input_dim)) {
            throw ShapeError("sample " + std::to_string(s) + " has " +
                             std::to_string(data.features[s].size()) + " features, expected " +
                             std::to_string(mlp.input_dim));
        }
        if (data.labels[s].size() != finding_count) {
            throw ShapeError("sample " + std::to_string(s) + " has an inconsistent label row");
        }
        sample_targets.push_back(concat_targets(targets, data.labels[s]));
    }

    ModelParams params = init_params(mlp);
    const std::size_t batch = static_cast<std::size_t>(config.batch_size);
    const std::int64_t steps_per_epoch = static_cast<std::int64_t>((n + batch - 1) / batch);
    OptimState optim(params, config.adamw,
                     {config.lr_max, config.lr_min,
                      steps_per_epoch * static_cast<std::int64_t>(config.epochs)});

    Rng rng(config.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<double> epoch_loss;
    std::vector<std::vector<double>> batch_x;
    std::vector<std::vector<double>> batch_t;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t stop = std::min(start + batch, n);
            batch_x.clear();
            batch_t.clear();
            for (std::size_t i = start; i < stop; ++i) {
                batch_x.push_back(data.features[order[i]]);
                batch_t.push_back(sample_targets[order[i]]);
            }
            double loss = 0.0;
            Gradients grads = backward(params, batch_x, batch_t, &loss);
            if (!std::isfinite(loss)) {
                throw TrainingDivergedError("non-finite loss at epoch " + std::to_string(epoch));
            }
            adamw_step(optim, params, grads);
            loss_sum += loss * static_cast<double>(stop - start);
        }
        epoch_loss.push_back(loss_sum / static_cast<double>(n));
    }

    return {std::move(params), std::move(epoch_loss)};
}

} // namespace ordreg
