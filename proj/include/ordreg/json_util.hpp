#pragma once

#include <initializer_list>
#include <string>

#include <nlohmann/json.hpp>

#include "ordreg/dataset.hpp"
#include "ordreg/error.hpp"

namespace ordreg {

// Config documents are strict: a key outside the schema is an error, not a
// silent no-op.
inline void require_keys(const nlohmann::json& obj,
                         std::initializer_list<const char*> allowed,
                         const std::string& context) {
    if (!obj.is_object()) {
        throw ConfigError(context + " must be a JSON object");
    }
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* name : allowed) {
            if (key == name) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError(context + " has unknown key \"" + key + "\"");
        }
    }
}

template <typename T>
T require_field(const nlohmann::json& obj, const char* key, const std::string& context) {
    if (!obj.contains(key)) {
        throw ConfigError(context + " is missing \"" + std::string(key) + "\"");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(context + " has a malformed \"" + std::string(key) + "\"");
    }
}

template <typename T>
T optional_field(const nlohmann::json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("malformed \"" + std::string(key) + "\"");
    }
}

SynthConfig synth_config_from_json(const nlohmann::json& doc);

} // namespace ordreg
