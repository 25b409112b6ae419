#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ordreg/error.hpp"

namespace ordreg {

// Feedforward net: ReLU on hidden layers, identity on the output layer.
// output_dim is the target length d times the number of findings L.
struct MlpConfig {
    int input_dim = 0;
    std::vector<int> hidden_dims;
    int output_dim = 0;
    std::uint64_t init_seed = 0;

    bool operator==(const MlpConfig&) const = default;
};

// One dense layer, weights row-major (rows x cols = out x in).
struct Layer {
    int rows = 0;
    int cols = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    double& weight(int r, int c) { return weights[static_cast<std::size_t>(r) * cols + c]; }
    double weight(int r, int c) const { return weights[static_cast<std::size_t>(r) * cols + c]; }

    bool operator==(const Layer&) const = default;
};

struct ModelParams {
    std::vector<Layer> layers;

    bool operator==(const ModelParams&) const = default;
};

// He-uniform weights, zero biases. Each layer draws from its own stream
// derived from (init_seed, layer index), so layers with equal shapes come out
// bit-identical across models whose other layers differ.
ModelParams init_params(const MlpConfig& config);

std::vector<double> forward(const ModelParams& params, std::span<const double> input);

// Mean over all entries of the squared difference.
double mse_loss(std::span<const double> output, std::span<const double> target);

using Gradients = ModelParams; // same shapes, one slot per parameter

// Gradient of the batch-mean MSE (mean over samples and output entries) with
// respect to every parameter. Writes the batch loss to *loss_out when given.
Gradients backward(const ModelParams& params,
                   std::span<const std::vector<double>> inputs,
                   std::span<const std::vector<double>> targets,
                   double* loss_out = nullptr);

} // namespace ordreg
