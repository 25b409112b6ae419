#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ordreg/error.hpp"

namespace ordreg {

// K x K counts, rows = true class i, columns = predicted class j.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(int class_count);

    void add(int true_class, int predicted_class, std::uint64_t n = 1);

    std::uint64_t count(int true_class, int predicted_class) const;
    std::uint64_t total() const { return total_; }
    int class_count() const { return class_count_; }

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::size_t index(int i, int j) const;

    int class_count_;
    std::uint64_t total_ = 0;
    std::vector<std::uint64_t> counts_;
};

enum class Weighting {
    Unweighted,
    Linear,
    Quadratic,
};

constexpr int kWeightingCount = 3;

// Agreement weight w(i,j) in [0,1]: 1 on the diagonal, symmetric, and for the
// weighted variants decaying with |i-j| relative to the scale span:
//   Unweighted  1 if i == j else 0
//   Linear      1 - |i-j| / (K-1)
//   Quadratic   1 - (i-j)^2 / (K-1)^2
double weight(Weighting weighting, int i, int j, int class_count);

struct KappaResult {
    double value;              // k_w = (p_o - p_c) / (1 - p_c)
    double observed_agreement; // p_o
    double chance_agreement;   // p_c
};

// Weighted Cohen's kappa. Throws on an empty matrix, and UndefinedKappaError
// when chance agreement reaches 1 (all mass in one diagonal cell).
KappaResult kappa(const ConfusionMatrix& confusion, Weighting weighting);

// Arithmetic mean over per-finding values.
double macro_average(std::span<const double> values);

struct Spread {
    double mean;
    double sd; // sample standard deviation, n-1 denominator
};

// Mean and SD over per-fold values; needs at least two.
Spread fold_spread(std::span<const double> values);

std::string weighting_name(Weighting weighting); // unweighted, linear, quadratic

} // namespace ordreg
