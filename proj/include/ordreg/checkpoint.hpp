#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ordreg/encoding.hpp"
#include "ordreg/mlp.hpp"

namespace ordreg {

// Everything needed to run a trained model against new data: the network
// weights plus the encoding, scale, and finding order it was trained for.
struct Checkpoint {
    MlpConfig mlp;
    Encoding encoding;
    int class_count = 0;
    std::vector<std::string> scale_labels;
    std::vector<std::string> findings;
    std::uint64_t train_seed = 0;
    ModelParams params;

    bool operator==(const Checkpoint&) const = default;

    OrdinalScale scale() const { return {class_count, scale_labels}; }
};

// JSON document with row-major weight arrays; save/load round-trips every
// double bit-exactly.
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::string checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const std::string& text);

} // namespace ordreg
