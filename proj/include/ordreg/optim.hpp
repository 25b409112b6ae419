#pragma once

#include <cstdint>

#include "ordreg/mlp.hpp"

namespace ordreg {

// Single half-cosine decay from lr_max at step 0 to lr_min at total_steps,
// no warm restarts.
struct CosineSchedule {
    double lr_max = 5e-4;
    double lr_min = 0.0;
    std::int64_t total_steps = 1;
};

double cosine_lr(const CosineSchedule& schedule, std::int64_t step);

struct AdamWConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double weight_decay = 0.01;
};

// AdamW moment state; moments share the parameter shapes and start at zero.
struct OptimState {
    OptimState(const ModelParams& shapes, AdamWConfig adamw, CosineSchedule schedule);

    AdamWConfig adamw;
    CosineSchedule schedule;
    std::int64_t step = 0;
    ModelParams first_moment;
    ModelParams second_moment;
};

// One decoupled update: theta <- theta - lr * m_hat / (sqrt(v_hat) + eps)
//                                    - lr * weight_decay * theta
// with bias-corrected moments; the learning rate comes from the cosine
// schedule at the pre-increment step count. Non-finite gradients abort.
void adamw_step(OptimState& state, ModelParams& params, const Gradients& grads);

} // namespace ordreg
