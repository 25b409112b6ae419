#include "ordreg/classify.hpp"

#include <cmath>

namespace ordreg {

bool is_compatible(const Encoding& encoding, ClassifierKind classifier) {
    switch (classifier) {
    case ClassifierKind::Argmax:
        return encoding.kind == EncodingKind::OneHot || encoding.kind == EncodingKind::Gaussian;
    case ClassifierKind::L1Nearest:
        return true;
    case ClassifierKind::DotNearest:
        return encoding.kind != EncodingKind::Continuous &&
               encoding.kind != EncodingKind::ProgressBar;
    }
    return false;
}

namespace {

int argmax_class(std::span<const double> output) {
    int best = 1;
    for (std::size_t i = 1; i < output.size(); ++i) {
        if (output[i] > output[static_cast<std::size_t>(best - 1)]) {
            best = static_cast<int>(i) + 1;
        }
    }
    return best;
}

int l1_nearest_class(std::span<const double> output, const TargetMatrix& targets) {
    int best = 1;
    double best_distance = 0.0;
    for (int k = 1; k <= targets.class_count(); ++k) {
        const auto row = targets.row(k);
        double distance = 0.0;
        for (std::size_t i = 0; i < output.size(); ++i) {
            distance += std::abs(output[i] - row[i]);
        }
        if (k == 1 || distance < best_distance) {
            best = k;
            best_distance = distance;
        }
    }
    return best;
}

int dot_nearest_class(std::span<const double> output, const TargetMatrix& targets) {
    double output_norm = 0.0;
    for (double v : output) {
        output_norm += v * v;
    }
    output_norm = std::sqrt(output_norm);
    if (!(output_norm > 0.0)) {
        throw DegenerateOutputError("zero-norm output cannot be decoded by dot product");
    }

    int best = 1;
    double best_similarity = 0.0;
    for (int k = 1; k <= targets.class_count(); ++k) {
        const auto row = targets.row(k);
        double dot = 0.0;
        double row_norm = 0.0;
        for (std::size_t i = 0; i < output.size(); ++i) {
            dot += output[i] * row[i];
            row_norm += row[i] * row[i];
        }
        const double similarity = dot / (output_norm * std::sqrt(row_norm));
        if (k == 1 || similarity > best_similarity) {
            best = k;
            best_similarity = similarity;
        }
    }
    return best;
}

} // namespace

int classify(ClassifierKind classifier, std::span<const double> output,
             const TargetMatrix& targets) {
    if (!is_compatible(targets.encoding(), classifier)) {
        throw CompatibilityError(classifier_display_name(classifier) +
                                 " cannot decode the " +
                                 encoding_name(targets.encoding().kind) + " encoding");
    }
    if (static_cast<int>(output.size()) != targets.row_length()) {
        throw ShapeError("output has length " + std::to_string(output.size()) +
                         ", targets have length " + std::to_string(targets.row_length()));
    }

    switch (classifier) {
    case ClassifierKind::Argmax:
        return argmax_class(output);
    case ClassifierKind::L1Nearest:
        return l1_nearest_class(output, targets);
    case ClassifierKind::DotNearest:
        return dot_nearest_class(output, targets);
    }
    throw ConfigError("unknown classifier kind");
}

std::string classifier_name(ClassifierKind kind) {
    switch (kind) {
    case ClassifierKind::Argmax: return "argmax";
    case ClassifierKind::L1Nearest: return "l1";
    case ClassifierKind::DotNearest: return "dot";
    }
    throw ConfigError("unknown classifier kind");
}

ClassifierKind parse_classifier_kind(const std::string& name) {
    if (name == "argmax") return ClassifierKind::Argmax;
    if (name == "l1") return ClassifierKind::L1Nearest;
    if (name == "dot") return ClassifierKind::DotNearest;
    throw ConfigError("unknown classifier \"" + name + "\"");
}

std::string classifier_display_name(ClassifierKind kind) {
    switch (kind) {
    case ClassifierKind::Argmax: return "Argmax";
    case ClassifierKind::L1Nearest: return "L1";
    case ClassifierKind::DotNearest: return "DP";
    }
    throw ConfigError("unknown classifier kind");
}

ClassifierKind parse_classifier_display_name(const std::string& name) {
    if (name == "Argmax") return ClassifierKind::Argmax;
    if (name == "L1") return ClassifierKind::L1Nearest;
    if (name == "DP") return ClassifierKind::DotNearest;
    throw DataError("unknown classifier column value \"" + name + "\"");
}

} // namespace ordreg
