#include "ordreg/encoding.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace ordreg {

namespace {

void check_encoding(const Encoding& encoding, int class_count) {
    if (class_count < 2) {
        throw InvalidScaleError("encodings need at least 2 classes, got " +
                                std::to_string(class_count));
    }
    if (encoding.kind == EncodingKind::Gaussian && !(encoding.sigma_squared > 0.0)) {
        throw ConfigError("gaussian encoding needs sigma_squared > 0");
    }
}

} // namespace

int vector_length(const Encoding& encoding, int class_count) {
    check_encoding(encoding, class_count);
    switch (encoding.kind) {
    case EncodingKind::OneHot:
    case EncodingKind::Gaussian:
    case EncodingKind::SoftProgressBar:
        return class_count;
    case EncodingKind::Continuous:
        return 1;
    case EncodingKind::ProgressBar:
        return class_count - 1;
    case EncodingKind::BinaryNumber:
        // bits needed for the largest class index K
        return std::bit_width(static_cast<unsigned>(class_count));
    }
    throw ConfigError("unknown encoding kind");
}

std::vector<double> encode(const Encoding& encoding, const OrdinalScale& scale, int k) {
    const int class_count = scale.class_count();
    const int d = vector_length(encoding, class_count);
    if (k < 1 || k > class_count) {
        throw InvalidClassError("class " + std::to_string(k) + " outside 1.." +
                                std::to_string(class_count));
    }

    std::vector<double> target(static_cast<std::size_t>(d), 0.0);
    switch (encoding.kind) {
    case EncodingKind::OneHot:
        target[static_cast<std::size_t>(k - 1)] = 1.0;
        break;
    case EncodingKind::Gaussian: {
        const double sigma_squared = encoding.sigma_squared;
        const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * sigma_squared);
        for (int i = 1; i <= class_count; ++i) {
            const double delta = static_cast<double>(i - k);
            target[static_cast<std::size_t>(i - 1)] =
                norm * std::exp(-delta * delta / (2.0 * sigma_squared));
        }
        break;
    }
    case EncodingKind::Continuous:
        target[0] = static_cast<double>(k - 1) / static_cast<double>(class_count - 1);
        break;
    case EncodingKind::ProgressBar:
        for (int i = 1; i < k; ++i) {
            target[static_cast<std::size_t>(i - 1)] = 1.0;
        }
        break;
    case EncodingKind::SoftProgressBar:
        for (int i = 1; i < k; ++i) {
            target[static_cast<std::size_t>(i - 1)] = 1.0;
        }
        target[static_cast<std::size_t>(k - 1)] = 0.5;
        break;
    case EncodingKind::BinaryNumber:
        for (int bit = 0; bit < d; ++bit) {
            target[static_cast<std::size_t>(bit)] =
                static_cast<double>((static_cast<unsigned>(k) >> (d - 1 - bit)) & 1u);
        }
        break;
    }
    return target;
}

TargetMatrix::TargetMatrix(Encoding encoding, const OrdinalScale& scale)
    : encoding_(encoding),
      class_count_(scale.class_count()),
      row_length_(vector_length(encoding, scale.class_count())) {
    values_.reserve(static_cast<std::size_t>(class_count_) * row_length_);
    for (int k = 1; k <= class_count_; ++k) {
        auto row = encode(encoding_, scale, k);
        values_.insert(values_.end(), row.begin(), row.end());
    }
}

std::string encoding_name(EncodingKind kind) {
    switch (kind) {
    case EncodingKind::OneHot: return "one_hot";
    case EncodingKind::Gaussian: return "gaussian";
    case EncodingKind::Continuous: return "continuous";
    case EncodingKind::ProgressBar: return "progress_bar";
    case EncodingKind::SoftProgressBar: return "soft_progress_bar";
    case EncodingKind::BinaryNumber: return "binary_number";
    }
    throw ConfigError("unknown encoding kind");
}

EncodingKind parse_encoding_kind(const std::string& name) {
    if (name == "one_hot") return EncodingKind::OneHot;
    if (name == "gaussian") return EncodingKind::Gaussian;
    if (name == "continuous") return EncodingKind::Continuous;
    if (name == "progress_bar") return EncodingKind::ProgressBar;
    if (name == "soft_progress_bar") return EncodingKind::SoftProgressBar;
    if (name == "binary_number") return EncodingKind::BinaryNumber;
    throw ConfigError("unknown encoding \"" + name + "\"");
}

std::string encoding_display_name(EncodingKind kind) {
    switch (kind) {
    case EncodingKind::OneHot: return "One-Hot";
    case EncodingKind::Gaussian: return "Gauss";
    case EncodingKind::Continuous: return "Continuous";
    case EncodingKind::ProgressBar: return "Prog-Bar";
    case EncodingKind::SoftProgressBar: return "Soft-Prog-Bar";
    case EncodingKind::BinaryNumber: return "Bin-Num";
    }
    throw ConfigError("unknown encoding kind");
}

EncodingKind parse_encoding_display_name(const std::string& name) {
    if (name == "One-Hot") return EncodingKind::OneHot;
    if (name == "Gauss") return EncodingKind::Gaussian;
    if (name == "Continuous") return EncodingKind::Continuous;
    if (name == "Prog-Bar") return EncodingKind::ProgressBar;
    if (name == "Soft-Prog-Bar") return EncodingKind::SoftProgressBar;
    if (name == "Bin-Num") return EncodingKind::BinaryNumber;
    throw DataError("unknown encoding column value \"" + name + "\"");
}

} // namespace ordreg
