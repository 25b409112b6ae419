#include "ordreg/split.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ordreg/json_util.hpp"
#include "ordreg/rng.hpp"

namespace ordreg {

SplitPlan split(const Dataset& dataset, double test_fraction, int n_folds, std::uint64_t seed) {
    if (n_folds < 1) {
        throw ConfigError("split needs n_folds >= 1");
    }
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0)) {
        throw ConfigError("test_fraction must lie strictly between 0 and 1");
    }

    std::set<std::int64_t> distinct;
    for (const Sample& sample : dataset.samples) {
        distinct.insert(sample.patient_id);
    }
    const std::size_t patient_count = distinct.size();
    if (patient_count < static_cast<std::size_t>(n_folds) + 1) {
        throw DataError("split needs at least " + std::to_string(n_folds + 1) +
                        " distinct patients, got " + std::to_string(patient_count));
    }

    std::vector<std::int64_t> patients(distinct.begin(), distinct.end());
    Rng rng(seed);
    rng.shuffle(patients);

    std::size_t test_count = static_cast<std::size_t>(
        std::floor(test_fraction * static_cast<double>(patient_count)));
    test_count = std::max<std::size_t>(test_count, 1);
    if (patient_count - test_count < static_cast<std::size_t>(n_folds)) {
        throw DataError("not enough patients left for " + std::to_string(n_folds) +
                        " folds after the test split");
    }

    SplitPlan plan;
    plan.test_patients.assign(patients.begin(),
                              patients.begin() + static_cast<std::ptrdiff_t>(test_count));
    plan.folds.resize(static_cast<std::size_t>(n_folds));
    for (std::size_t i = test_count; i < patient_count; ++i) {
        plan.folds[(i - test_count) % static_cast<std::size_t>(n_folds)].push_back(patients[i]);
    }

    std::sort(plan.test_patients.begin(), plan.test_patients.end());
    for (auto& fold : plan.folds) {
        std::sort(fold.begin(), fold.end());
    }
    return plan;
}

void save_split(const SplitPlan& plan, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["test_patients"] = plan.test_patients;
    doc["folds"] = plan.folds;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot open " + path.string() + " for writing");
    }
    out << doc.dump(2) << '\n';
}

SplitPlan load_split(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json doc = nlohmann::json::parse(buffer.str(), nullptr, false);
    if (doc.is_discarded()) {
        throw DataError("split plan " + path.string() + " is not valid JSON");
    }
    require_keys(doc, {"test_patients", "folds"}, "split plan");
    SplitPlan plan;
    plan.test_patients =
        require_field<std::vector<std::int64_t>>(doc, "test_patients", "split plan");
    plan.folds =
        require_field<std::vector<std::vector<std::int64_t>>>(doc, "folds", "split plan");
    return plan;
}

} // namespace ordreg
