#include "ordreg/mlp.hpp"

#include <cmath>
#include <string>

#include "ordreg/rng.hpp"

namespace ordreg {

namespace {

std::vector<int> layer_sizes(const MlpConfig& config) {
    if (config.input_dim < 1 || config.output_dim < 1) {
        throw ConfigError("mlp needs input_dim >= 1 and output_dim >= 1");
    }
    std::vector<int> sizes;
    sizes.push_back(config.input_dim);
    for (int h : config.hidden_dims) {
        if (h < 1) {
            throw ConfigError("hidden layer width must be >= 1");
        }
        sizes.push_back(h);
    }
    sizes.push_back(config.output_dim);
    return sizes;
}

void check_input(const ModelParams& params, std::span<const double> input) {
    if (params.layers.empty()) {
        throw ConfigError("model has no layers");
    }
    if (static_cast<int>(input.size()) != params.layers.front().cols) {
        throw ShapeError("input has length " + std::to_string(input.size()) +
                         ", model expects " + std::to_string(params.layers.front().cols));
    }
}

} // namespace

ModelParams init_params(const MlpConfig& config) {
    const auto sizes = layer_sizes(config);
    ModelParams params;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        Layer layer;
        layer.cols = sizes[l];
        layer.rows = sizes[l + 1];
        layer.weights.resize(static_cast<std::size_t>(layer.rows) * layer.cols);
        layer.bias.assign(static_cast<std::size_t>(layer.rows), 0.0);

        Rng rng(derive_seed(config.init_seed, l));
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.cols));
        for (double& w : layer.weights) {
            w = rng.uniform(-limit, limit);
        }
        params.layers.push_back(std::move(layer));
    }
    return params;
}

std::vector<double> forward(const ModelParams& params, std::span<const double> input) {
    check_input(params, input);
    std::vector<double> activation(input.begin(), input.end());
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const Layer& layer = params.layers[l];
        if (static_cast<int>(activation.size()) != layer.cols) {
            throw ShapeError("layer " + std::to_string(l) + " expects " +
                             std::to_string(layer.cols) + " inputs");
        }
        std::vector<double> next(static_cast<std::size_t>(layer.rows));
        for (int r = 0; r < layer.rows; ++r) {
            double sum = layer.bias[static_cast<std::size_t>(r)];
            for (int c = 0; c < layer.cols; ++c) {
                sum += layer.weight(r, c) * activation[static_cast<std::size_t>(c)];
            }
            next[static_cast<std::size_t>(r)] = sum;
        }
        const bool is_output = l + 1 == params.layers.size();
        if (!is_output) {
            for (double& v : next) {
                v = v > 0.0 ? v : 0.0;
            }
        }
        activation = std::move(next);
    }
    return activation;
}

double mse_loss(std::span<const double> output, std::span<const double> target) {
    if (output.size() != target.size()) {
        throw ShapeError("mse over vectors of lengths " + std::to_string(output.size()) +
                         " and " + std::to_string(target.size()));
    }
    if (output.empty()) {
        throw ShapeError("mse over empty vectors");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < output.size(); ++i) {
        const double diff = output[i] - target[i];
        sum += diff * diff;
    }
    return sum / static_cast<double>(output.size());
}

Gradients backward(const ModelParams& params,
                   std::span<const std::vector<double>> inputs,
                   std::span<const std::vector<double>> targets,
                   double* loss_out) {
    if (inputs.empty() || inputs.size() != targets.size()) {
        throw ShapeError("backward needs matching, non-empty input and target batches");
    }

    Gradients grads;
    for (const Layer& layer : params.layers) {
        Layer g;
        g.rows = layer.rows;
        g.cols = layer.cols;
        g.weights.assign(layer.weights.size(), 0.0);
        g.bias.assign(layer.bias.size(), 0.0);
        grads.layers.push_back(std::move(g));
    }

    const std::size_t depth = params.layers.size();
    const std::size_t batch = inputs.size();
    const int out_dim = params.layers.back().rows;
    const double entry_count = static_cast<double>(batch) * out_dim;
    double loss_sum = 0.0;

    // activations[0] = input, activations[l+1] = post-activation of layer l
    std::vector<std::vector<double>> activations(depth + 1);
    for (std::size_t s = 0; s < batch; ++s) {
        check_input(params, inputs[s]);
        if (targets[s].size() != static_cast<std::size_t>(out_dim)) {
            throw ShapeError("target has length " + std::to_string(targets[s].size()) +
                             ", model emits " + std::to_string(out_dim));
        }

        activations[0].assign(inputs[s].begin(), inputs[s].end());
        for (std::size_t l = 0; l < depth; ++l) {
            const Layer& layer = params.layers[l];
            auto& next = activations[l + 1];
            next.assign(static_cast<std::size_t>(layer.rows), 0.0);
            for (int r = 0; r < layer.rows; ++r) {
                double sum = layer.bias[static_cast<std::size_t>(r)];
                for (int c = 0; c < layer.cols; ++c) {
                    sum += layer.weight(r, c) * activations[l][static_cast<std::size_t>(c)];
                }
                next[static_cast<std::size_t>(r)] = sum;
            }
            if (l + 1 != depth) {
                for (double& v : next) {
                    v = v > 0.0 ? v : 0.0;
                }
            }
        }

        // dL/dy for L = (1 / (batch * out_dim)) * sum of squared differences
        std::vector<double> delta(static_cast<std::size_t>(out_dim));
        for (int i = 0; i < out_dim; ++i) {
            const double diff = activations[depth][static_cast<std::size_t>(i)] -
                                targets[s][static_cast<std::size_t>(i)];
            loss_sum += diff * diff;
            delta[static_cast<std::size_t>(i)] = 2.0 * diff / entry_count;
        }

        for (std::size_t l = depth; l-- > 0;) {
            const Layer& layer = params.layers[l];
            Layer& grad = grads.layers[l];
            const auto& in = activations[l];
            for (int r = 0; r < layer.rows; ++r) {
                const double d = delta[static_cast<std::size_t>(r)];
                grad.bias[static_cast<std::size_t>(r)] += d;
                for (int c = 0; c < layer.cols; ++c) {
                    grad.weight(r, c) += d * in[static_cast<std::size_t>(c)];
                }
            }
            if (l == 0) {
                break;
            }
            std::vector<double> prev_delta(in.size(), 0.0);
            for (int c = 0; c < layer.cols; ++c) {
                // ReLU: post-activation 0 means the unit was clamped
                if (in[static_cast<std::size_t>(c)] > 0.0) {
                    double sum = 0.0;
                    for (int r = 0; r < layer.rows; ++r) {
                        sum += layer.weight(r, c) * delta[static_cast<std::size_t>(r)];
                    }
                    prev_delta[static_cast<std::size_t>(c)] = sum;
                }
            }
            delta = std::move(prev_delta);
        }
    }

    if (loss_out != nullptr) {
        *loss_out = loss_sum / entry_count;
    }
    return grads;
}

} // namespace ordreg
