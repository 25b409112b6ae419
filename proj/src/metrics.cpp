#include "ordreg/metrics.hpp"

#include <cmath>
#include <string>

namespace ordreg {

ConfusionMatrix::ConfusionMatrix(int class_count) : class_count_(class_count) {
    if (class_count < 2) {
        throw InvalidScaleError("confusion matrix needs at least 2 classes, got " +
                                std::to_string(class_count));
    }
    counts_.assign(static_cast<std::size_t>(class_count) * class_count, 0);
}

std::size_t ConfusionMatrix::index(int i, int j) const {
    if (i < 1 || i > class_count_ || j < 1 || j > class_count_) {
        throw InvalidClassError("confusion cell (" + std::to_string(i) + ", " +
                                std::to_string(j) + ") outside 1.." +
                                std::to_string(class_count_));
    }
    return static_cast<std::size_t>(i - 1) * class_count_ + static_cast<std::size_t>(j - 1);
}

void ConfusionMatrix::add(int true_class, int predicted_class, std::uint64_t n) {
    counts_[index(true_class, predicted_class)] += n;
    total_ += n;
}

std::uint64_t ConfusionMatrix::count(int true_class, int predicted_class) const {
    return counts_[index(true_class, predicted_class)];
}

double weight(Weighting weighting, int i, int j, int class_count) {
    if (class_count < 2) {
        throw InvalidScaleError("weights need at least 2 classes");
    }
    if (i < 1 || i > class_count || j < 1 || j > class_count) {
        throw InvalidClassError("weight index outside 1.." + std::to_string(class_count));
    }
    const double span = static_cast<double>(class_count - 1);
    const double delta = static_cast<double>(i - j);
    switch (weighting) {
    case Weighting::Unweighted:
        return i == j ? 1.0 : 0.0;
    case Weighting::Linear:
        return 1.0 - std::abs(delta) / span;
    case Weighting::Quadratic:
        return 1.0 - (delta * delta) / (span * span);
    }
    throw ConfigError("unknown weighting");
}

KappaResult kappa(const ConfusionMatrix& confusion, Weighting weighting) {
    const int class_count = confusion.class_count();
    const auto total = confusion.total();
    if (total == 0) {
        throw DataError("kappa on an empty confusion matrix");
    }

    std::vector<double> row_sum(static_cast<std::size_t>(class_count), 0.0);
    std::vector<double> col_sum(static_cast<std::size_t>(class_count), 0.0);
    for (int i = 1; i <= class_count; ++i) {
        for (int j = 1; j <= class_count; ++j) {
            const double c = static_cast<double>(confusion.count(i, j));
            row_sum[static_cast<std::size_t>(i - 1)] += c;
            col_sum[static_cast<std::size_t>(j - 1)] += c;
        }
    }

    // Accumulate weighted raw counts and divide once; keeps perfect agreement
    // at exactly 1.0.
    double observed_weighted = 0.0;
    double chance_weighted = 0.0;
    for (int i = 1; i <= class_count; ++i) {
        for (int j = 1; j <= class_count; ++j) {
            const double w = weight(weighting, i, j, class_count);
            observed_weighted += w * static_cast<double>(confusion.count(i, j));
            chance_weighted += w * row_sum[static_cast<std::size_t>(i - 1)] *
                               col_sum[static_cast<std::size_t>(j - 1)];
        }
    }

    const double total_d = static_cast<double>(total);
    const double observed = observed_weighted / total_d;
    const double chance = chance_weighted / (total_d * total_d);
    if (!(chance < 1.0)) {
        throw UndefinedKappaError("chance agreement is 1; kappa undefined for this matrix");
    }
    return {(observed - chance) / (1.0 - chance), observed, chance};
}

double macro_average(std::span<const double> values) {
    if (values.empty()) {
        throw Error("macro average of an empty list");
    }
    double sum = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw Error("macro average over non-finite value");
        }
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

Spread fold_spread(std::span<const double> values) {
    if (values.size() < 2) {
        throw Error("fold spread needs at least 2 values, got " +
                    std::to_string(values.size()));
    }
    const double mean = macro_average(values);
    double squared = 0.0;
    for (double v : values) {
        squared += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(squared / static_cast<double>(values.size() - 1))};
}

std::string weighting_name(Weighting weighting) {
    switch (weighting) {
    case Weighting::Unweighted: return "unweighted";
    case Weighting::Linear: return "linear";
    case Weighting::Quadratic: return "quadratic";
    }
    throw ConfigError("unknown weighting");
}

} // namespace ordreg
