#pragma once

#include <string>
#include <vector>

#include "ordreg/error.hpp"

namespace ordreg {

// An ordered set of classes 1..K with display labels, ascending in severity.
class OrdinalScale {
public:
    // Default labels: the five-step severity ladder for K=5, plain numerals otherwise.
    explicit OrdinalScale(int class_count)
        : OrdinalScale(class_count, default_labels(class_count)) {}

    OrdinalScale(int class_count, std::vector<std::string> labels)
        : class_count_(class_count), labels_(std::move(labels)) {
        if (class_count_ < 2) {
            throw InvalidScaleError("ordinal scale needs at least 2 classes, got " +
                                    std::to_string(class_count_));
        }
        if (static_cast<int>(labels_.size()) != class_count_) {
            throw InvalidScaleError("expected " + std::to_string(class_count_) +
                                    " labels, got " + std::to_string(labels_.size()));
        }
    }

    int class_count() const { return class_count_; }

    const std::vector<std::string>& labels() const { return labels_; }

    // 1-based, like every class index in this library.
    const std::string& label(int k) const {
        if (k < 1 || k > class_count_) {
            throw InvalidClassError("class " + std::to_string(k) + " outside 1.." +
                                    std::to_string(class_count_));
        }
        return labels_[static_cast<std::size_t>(k - 1)];
    }

    static std::vector<std::string> default_labels(int class_count) {
        if (class_count == 5) {
            return {"None", "(+)", "+", "++", "+++"};
        }
        std::vector<std::string> labels;
        for (int k = 1; k <= class_count; ++k) {
            labels.push_back(std::to_string(k));
        }
        return labels;
    }

private:
    int class_count_;
    std::vector<std::string> labels_;
};

} // namespace ordreg
