#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ordreg/dataset.hpp"

namespace ordreg {

// Patient-wise partition: a held-out test set plus disjoint
// cross-validation folds covering every remaining patient. All samples of a
// patient land in exactly one partition.
struct SplitPlan {
    std::vector<std::int64_t> test_patients;          // sorted
    std::vector<std::vector<std::int64_t>> folds;     // each sorted

    bool operator==(const SplitPlan&) const = default;
};

// Shuffles the distinct patient ids with the seed, takes the first
// floor(test_fraction * P) of them (at least one) as the test set, and deals
// the rest round-robin into n_folds folds.
SplitPlan split(const Dataset& dataset, double test_fraction = 0.2, int n_folds = 5,
                std::uint64_t seed = 0);

void save_split(const SplitPlan& plan, const std::filesystem::path& path);
SplitPlan load_split(const std::filesystem::path& path);

} // namespace ordreg
