#include "ordreg/optim.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ordreg {

double cosine_lr(const CosineSchedule& schedule, std::int64_t step) {
    if (schedule.total_steps < 1 || !(schedule.lr_min <= schedule.lr_max) ||
        schedule.lr_min < 0.0) {
        throw ConfigError("cosine schedule needs total_steps >= 1 and 0 <= lr_min <= lr_max");
    }
    if (step < 0) {
        throw ConfigError("negative schedule step");
    }
    if (step > schedule.total_steps) {
        return schedule.lr_min;
    }
    const double phase =
        std::numbers::pi * static_cast<double>(step) / static_cast<double>(schedule.total_steps);
    return schedule.lr_min + 0.5 * (schedule.lr_max - schedule.lr_min) * (1.0 + std::cos(phase));
}

OptimState::OptimState(const ModelParams& shapes, AdamWConfig adamw_config,
                       CosineSchedule schedule_config)
    : adamw(adamw_config), schedule(schedule_config) {
    for (const Layer& layer : shapes.layers) {
        Layer zero;
        zero.rows = layer.rows;
        zero.cols = layer.cols;
        zero.weights.assign(layer.weights.size(), 0.0);
        zero.bias.assign(layer.bias.size(), 0.0);
        first_moment.layers.push_back(zero);
        second_moment.layers.push_back(std::move(zero));
    }
}

namespace {

void update_span(std::span<double> theta, std::span<const double> grad, std::span<double> m,
                 std::span<double> v, const AdamWConfig& cfg, double lr, double bias1,
                 double bias2) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double g = grad[i];
        if (!std::isfinite(g)) {
            throw TrainingDivergedError("non-finite gradient; aborting the run");
        }
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
        const double m_hat = m[i] / bias1;
        const double v_hat = v[i] / bias2;
        theta[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon) +
                    lr * cfg.weight_decay * theta[i];
    }
}

} // namespace

void adamw_step(OptimState& state, ModelParams& params, const Gradients& grads) {
    if (params.layers.size() != grads.layers.size()) {
        throw ShapeError("gradient layer count does not match parameters");
    }
    const double lr = cosine_lr(state.schedule, state.step);
    state.step += 1;
    const double bias1 = 1.0 - std::pow(state.adamw.beta1, static_cast<double>(state.step));
    const double bias2 = 1.0 - std::pow(state.adamw.beta2, static_cast<double>(state.step));

    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        Layer& layer = params.layers[l];
        const Layer& grad = grads.layers[l];
        if (layer.rows != grad.rows || layer.cols != grad.cols) {
            throw ShapeError("gradient shape does not match layer " + std::to_string(l));
        }
        update_span(layer.weights, grad.weights, state.first_moment.layers[l].weights,
                    state.second_moment.layers[l].weights, state.adamw, lr, bias1, bias2);
        update_span(layer.bias, grad.bias, state.first_moment.layers[l].bias,
                    state.second_moment.layers[l].bias, state.adamw, lr, bias1, bias2);
    }
}

} // namespace ordreg
