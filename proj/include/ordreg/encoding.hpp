#pragma once

#include <span>
#include <string>
#include <vector>

#include "ordreg/scale.hpp"

namespace ordreg {

// The six target functions. Each maps a class k in 1..K to a fixed vector;
// the model is trained to emit that vector for samples of class k.
enum class EncodingKind {
    OneHot,
    Gaussian,
    Continuous,
    ProgressBar,
    SoftProgressBar,
    BinaryNumber,
};

struct Encoding {
    EncodingKind kind = EncodingKind::OneHot;
    double sigma_squared = 1.0; // Gaussian only, ignored elsewhere

    bool operator==(const Encoding&) const = default;
};

// Target vector length d for a given scale size.
//   OneHot, Gaussian, SoftProgressBar -> K
//   Continuous                        -> 1
//   ProgressBar                       -> K-1
//   BinaryNumber                      -> floor(log2(K)) + 1
int vector_length(const Encoding& encoding, int class_count);

// Target vector for class k (1-based). Gaussian entries are raw density
// values, not renormalized. Binary writes k base-2, most significant bit
// first, zero-padded to d.
std::vector<double> encode(const Encoding& encoding, const OrdinalScale& scale, int k);

// All K target vectors of one encoding, row k (1-based) = encode(k).
class TargetMatrix {
public:
    TargetMatrix(Encoding encoding, const OrdinalScale& scale);

    const Encoding& encoding() const { return encoding_; }
    int class_count() const { return class_count_; }
    int row_length() const { return row_length_; }

    std::span<const double> row(int k) const {
        if (k < 1 || k > class_count_) {
            throw InvalidClassError("class " + std::to_string(k) + " outside 1.." +
                                    std::to_string(class_count_));
        }
        return {values_.data() + static_cast<std::size_t>(k - 1) * row_length_,
                static_cast<std::size_t>(row_length_)};
    }

private:
    Encoding encoding_;
    int class_count_;
    int row_length_;
    std::vector<double> values_; // K x d, row-major
};

inline TargetMatrix target_matrix(const Encoding& encoding, const OrdinalScale& scale) {
    return {encoding, scale};
}

// snake_case names used in config files: one_hot, gaussian, continuous,
// progress_bar, soft_progress_bar, binary_number.
std::string encoding_name(EncodingKind kind);
EncodingKind parse_encoding_kind(const std::string& name);

// Result-table names matching the experiment reports: One-Hot, Gauss, ...
std::string encoding_display_name(EncodingKind kind);
EncodingKind parse_encoding_display_name(const std::string& name);

} // namespace ordreg
