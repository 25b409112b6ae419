#include "ordreg/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ordreg/json_util.hpp"

namespace ordreg {

namespace {

constexpr const char* kFormatTag = "ordreg-checkpoint-v1";

} // namespace

std::string checkpoint_to_json(const Checkpoint& checkpoint) {
    nlohmann::json doc;
    doc["format"] = kFormatTag;
    doc["encoding"] = {{"kind", encoding_name(checkpoint.encoding.kind)},
                       {"sigma_squared", checkpoint.encoding.sigma_squared}};
    doc["scale"] = {{"class_count", checkpoint.class_count},
                    {"labels", checkpoint.scale_labels}};
    doc["findings"] = checkpoint.findings;
    doc["mlp"] = {{"input_dim", checkpoint.mlp.input_dim},
                  {"hidden_dims", checkpoint.mlp.hidden_dims},
                  {"output_dim", checkpoint.mlp.output_dim},
                  {"init_seed", checkpoint.mlp.init_seed}};
    doc["train_seed"] = checkpoint.train_seed;
    nlohmann::json layers = nlohmann::json::array();
    for (const Layer& layer : checkpoint.params.layers) {
        layers.push_back({{"rows", layer.rows},
                          {"cols", layer.cols},
                          {"weights", layer.weights},
                          {"bias", layer.bias}});
    }
    doc["layers"] = std::move(layers);
    return doc.dump();
}

Checkpoint checkpoint_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        throw DataError("checkpoint is not valid JSON");
    }
    require_keys(doc, {"format", "encoding", "scale", "findings", "mlp", "train_seed", "layers"},
                 "checkpoint");
    if (require_field<std::string>(doc, "format", "checkpoint") != kFormatTag) {
        throw DataError("unknown checkpoint format tag");
    }

    Checkpoint checkpoint;
    const auto& enc = doc.at("encoding");
    require_keys(enc, {"kind", "sigma_squared"}, "checkpoint encoding");
    checkpoint.encoding.kind =
        parse_encoding_kind(require_field<std::string>(enc, "kind", "checkpoint encoding"));
    checkpoint.encoding.sigma_squared =
        require_field<double>(enc, "sigma_squared", "checkpoint encoding");

    const auto& scale = doc.at("scale");
    require_keys(scale, {"class_count", "labels"}, "checkpoint scale");
    checkpoint.class_count = require_field<int>(scale, "class_count", "checkpoint scale");
    checkpoint.scale_labels =
        require_field<std::vector<std::string>>(scale, "labels", "checkpoint scale");

    checkpoint.findings =
        require_field<std::vector<std::string>>(doc, "findings", "checkpoint");

    const auto& mlp = doc.at("mlp");
    require_keys(mlp, {"input_dim", "hidden_dims", "output_dim", "init_seed"}, "checkpoint mlp");
    checkpoint.mlp.input_dim = require_field<int>(mlp, "input_dim", "checkpoint mlp");
    checkpoint.mlp.hidden_dims =
        require_field<std::vector<int>>(mlp, "hidden_dims", "checkpoint mlp");
    checkpoint.mlp.output_dim = require_field<int>(mlp, "output_dim", "checkpoint mlp");
    checkpoint.mlp.init_seed = require_field<std::uint64_t>(mlp, "init_seed", "checkpoint mlp");

    checkpoint.train_seed = require_field<std::uint64_t>(doc, "train_seed", "checkpoint");

    if (!doc.at("layers").is_array()) {
        throw DataError("checkpoint \"layers\" must be an array");
    }
    for (const auto& entry : doc.at("layers")) {
        require_keys(entry, {"rows", "cols", "weights", "bias"}, "checkpoint layer");
        Layer layer;
        layer.rows = require_field<int>(entry, "rows", "checkpoint layer");
        layer.cols = require_field<int>(entry, "cols", "checkpoint layer");
        layer.weights = require_field<std::vector<double>>(entry, "weights", "checkpoint layer");
        layer.bias = require_field<std::vector<double>>(entry, "bias", "checkpoint layer");
        if (layer.weights.size() !=
                static_cast<std::size_t>(layer.rows) * static_cast<std::size_t>(layer.cols) ||
            layer.bias.size() != static_cast<std::size_t>(layer.rows)) {
            throw DataError("checkpoint layer arrays do not match the declared shape");
        }
        checkpoint.params.layers.push_back(std::move(layer));
    }
    return checkpoint;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot open " + path.string() + " for writing");
    }
    out << checkpoint_to_json(checkpoint) << '\n';
    if (!out) {
        throw DataError("failed writing " + path.string());
    }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return checkpoint_from_json(buffer.str());
}

} // namespace ordreg
