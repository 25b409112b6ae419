#include "ordreg/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ordreg/json_util.hpp"
#include "ordreg/rng.hpp"

namespace ordreg {

std::vector<std::string> default_finding_names(int n_findings) {
    if (n_findings == 7) {
        // the usual bedside-radiograph conditions, left/right where applicable
        return {"atelectasis_left",          "atelectasis_right",
                "congestion",                "pleural_effusion_left",
                "pleural_effusion_right",    "pneumonic_infiltrates_left",
                "pneumonic_infiltrates_right"};
    }
    const int width = static_cast<int>(std::to_string(n_findings).size());
    std::vector<std::string> names;
    for (int i = 1; i <= n_findings; ++i) {
        std::string num = std::to_string(i);
        names.push_back("finding_" + std::string(width - num.size(), '0') + num);
    }
    return names;
}

namespace {

void check_synth_config(const SynthConfig& config) {
    if (config.n_patients < 1 || config.samples_per_patient < 1 || config.n_findings < 1 ||
        config.feature_dim < 1) {
        throw ConfigError("synthetic generator counts must all be >= 1");
    }
    if (config.class_count < 2) {
        throw InvalidScaleError("synthetic generator needs class_count >= 2");
    }
    if (config.label_noise_prob < 0.0 || config.label_noise_prob > 1.0) {
        throw ConfigError("label_noise_prob must lie in [0, 1]");
    }
    if (config.feature_noise_sd < 0.0) {
        throw ConfigError("feature_noise_sd must be >= 0");
    }
}

int latent_class(double z, int class_count) {
    const int k = 1 + static_cast<int>(z * class_count);
    return std::min(k, class_count);
}

} // namespace

Dataset generate(const SynthConfig& config, SynthTrace* trace) {
    check_synth_config(config);
    Rng rng(config.seed);

    std::vector<std::vector<double>> feature_map(
        static_cast<std::size_t>(config.feature_dim),
        std::vector<double>(static_cast<std::size_t>(config.n_findings)));
    for (auto& row : feature_map) {
        for (double& v : row) {
            v = rng.normal();
        }
    }

    Dataset dataset;
    dataset.findings = default_finding_names(config.n_findings);
    std::sort(dataset.findings.begin(), dataset.findings.end());

    if (trace != nullptr) {
        trace->latents.clear();
        trace->latent_classes.clear();
        trace->feature_map = feature_map;
    }

    std::vector<double> latents(static_cast<std::size_t>(config.n_findings));
    for (int patient = 1; patient <= config.n_patients; ++patient) {
        for (int s = 0; s < config.samples_per_patient; ++s) {
            Sample sample;
            sample.patient_id = patient;

            for (double& z : latents) {
                z = rng.uniform();
            }
            sample.features.resize(static_cast<std::size_t>(config.feature_dim));
            for (int f = 0; f < config.feature_dim; ++f) {
                double v = 0.0;
                for (int l = 0; l < config.n_findings; ++l) {
                    v += feature_map[static_cast<std::size_t>(f)][static_cast<std::size_t>(l)] *
                         latents[static_cast<std::size_t>(l)];
                }
                if (config.feature_noise_sd > 0.0) {
                    v += rng.normal(0.0, config.feature_noise_sd);
                }
                sample.features[static_cast<std::size_t>(f)] = v;
            }

            std::vector<int> classes(latents.size());
            for (int l = 0; l < config.n_findings; ++l) {
                const int truth = latent_class(latents[static_cast<std::size_t>(l)],
                                               config.class_count);
                classes[static_cast<std::size_t>(l)] = truth;
                int stored = truth;
                if (rng.bernoulli(config.label_noise_prob)) {
                    // shift one class; at the ends the only in-range move is inward
                    if (truth == 1) {
                        stored = 2;
                    } else if (truth == config.class_count) {
                        stored = truth - 1;
                    } else {
                        stored = rng.bernoulli(0.5) ? truth + 1 : truth - 1;
                    }
                }
                sample.labels[dataset.findings[static_cast<std::size_t>(l)]] = stored;
            }

            if (trace != nullptr) {
                trace->latents.push_back(
                    std::vector<double>(latents.begin(), latents.end()));
                trace->latent_classes.push_back(classes);
            }
            dataset.samples.push_back(std::move(sample));
        }
    }
    return dataset;
}

namespace {

std::string format_feature(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string sample_to_json_line(const Sample& sample) {
    std::string line = "{\"patient_id\":" + std::to_string(sample.patient_id) + ",\"features\":[";
    for (std::size_t i = 0; i < sample.features.size(); ++i) {
        if (i > 0) {
            line += ',';
        }
        line += format_feature(sample.features[i]);
    }
    line += "],\"labels\":{";
    bool first = true;
    for (const auto& [name, k] : sample.labels) {
        if (!first) {
            line += ',';
        }
        first = false;
        line += nlohmann::json(name).dump();
        line += ':';
        line += std::to_string(k);
    }
    line += "}}";
    return line;
}

} // namespace

std::string to_jsonl(const Dataset& dataset) {
    std::string text;
    for (const Sample& sample : dataset.samples) {
        text += sample_to_json_line(sample);
        text += '\n';
    }
    return text;
}

Dataset from_jsonl(const std::string& text) {
    Dataset dataset;
    std::istringstream stream(text);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        if (line.empty()) {
            continue;
        }
        nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded()) {
            throw ParseError("malformed dataset line", line_number);
        }
        if (!doc.is_object() || !doc.contains("patient_id") || !doc.contains("features") ||
            !doc.contains("labels")) {
            throw ParseError("dataset line missing patient_id/features/labels", line_number);
        }

        Sample sample;
        try {
            sample.patient_id = doc.at("patient_id").get<std::int64_t>();
            sample.features = doc.at("features").get<std::vector<double>>();
            sample.labels = doc.at("labels").get<std::map<std::string, int>>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad dataset field: ") + e.what(), line_number);
        }

        if (dataset.samples.empty()) {
            for (const auto& [name, k] : sample.labels) {
                dataset.findings.push_back(name);
            }
        } else {
            if (sample.labels.size() != dataset.findings.size()) {
                throw SchemaError("sample on line " + std::to_string(line_number) +
                                  " does not carry the expected findings");
            }
            for (const std::string& name : dataset.findings) {
                if (!sample.labels.contains(name)) {
                    throw SchemaError("sample on line " + std::to_string(line_number) +
                                      " is missing finding \"" + name + "\"");
                }
            }
        }
        dataset.samples.push_back(std::move(sample));
    }
    return dataset;
}

void save(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot open " + path.string() + " for writing");
    }
    out << to_jsonl(dataset);
    if (!out) {
        throw DataError("failed writing " + path.string());
    }
}

Dataset load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_jsonl(buffer.str());
}

SynthConfig parse_synth_config(const std::string& json_text) {
    nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, false);
    if (doc.is_discarded()) {
        throw ConfigError("synthetic config is not valid JSON");
    }
    return synth_config_from_json(doc);
}

SynthConfig synth_config_from_json(const nlohmann::json& doc) {
    require_keys(doc, {"n_patients", "samples_per_patient", "n_findings", "class_count",
                       "feature_dim", "feature_noise_sd", "label_noise_prob", "seed"},
                 "synthetic config");
    SynthConfig config;
    config.n_patients = require_field<int>(doc, "n_patients", "synthetic config");
    config.samples_per_patient =
        require_field<int>(doc, "samples_per_patient", "synthetic config");
    config.n_findings = optional_field<int>(doc, "n_findings", config.n_findings);
    config.class_count = optional_field<int>(doc, "class_count", config.class_count);
    config.feature_dim = optional_field<int>(doc, "feature_dim", config.feature_dim);
    config.feature_noise_sd =
        optional_field<double>(doc, "feature_noise_sd", config.feature_noise_sd);
    config.label_noise_prob =
        optional_field<double>(doc, "label_noise_prob", config.label_noise_prob);
    config.seed = optional_field<std::uint64_t>(doc, "seed", config.seed);
    check_synth_config(config);
    return config;
}

} // namespace ordreg
