#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ordreg/error.hpp"

namespace ordreg {

struct Sample {
    std::int64_t patient_id = 0;
    std::vector<double> features;
    std::map<std::string, int> labels; // finding name -> class in 1..K

    bool operator==(const Sample&) const = default;
};

struct Dataset {
    std::vector<std::string> findings; // sorted; every sample carries all of them
    std::vector<Sample> samples;

    bool operator==(const Dataset&) const = default;
};

// Synthetic stand-in for a graded clinical corpus. Per sample and finding a
// latent severity z ~ U(0,1) sets the true class 1 + floor(z*K); features are
// a fixed seeded linear map of the stacked latents plus Gaussian noise, and
// with probability label_noise_prob the stored label moves one class up or
// down (direction forced inward at the scale ends).
struct SynthConfig {
    int n_patients = 0;
    int samples_per_patient = 0;
    int n_findings = 7;
    int class_count = 5;
    int feature_dim = 16;
    double feature_noise_sd = 0.05;
    double label_noise_prob = 0.0;
    std::uint64_t seed = 0;
};

// Generation internals exposed for inspection: per-sample latents, the latent
// class before label noise, and the feature map rows.
struct SynthTrace {
    std::vector<std::vector<double>> latents;        // n x L
    std::vector<std::vector<int>> latent_classes;    // n x L
    std::vector<std::vector<double>> feature_map;    // feature_dim x L
};

Dataset generate(const SynthConfig& config, SynthTrace* trace = nullptr);

std::vector<std::string> default_finding_names(int n_findings);

// JSON Lines, one sample per line with fields patient_id / features / labels.
// Feature values are written with 17 significant digits, so a load followed
// by a save reproduces the file byte for byte.
void save(const Dataset& dataset, const std::filesystem::path& path);
Dataset load(const std::filesystem::path& path);

std::string to_jsonl(const Dataset& dataset);
Dataset from_jsonl(const std::string& text);

SynthConfig parse_synth_config(const std::string& json_text);

} // namespace ordreg
