#pragma once

#include <fstream>
#include <initializer_list>
#include <string>

#include "json.hpp"
#include "neurostream/errors.hpp"

namespace neurostream {

using json = nlohmann::json;

// Rejects unknown keys so config typos surface as usage errors.
inline void require_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& context) {
    if (!j.is_object()) throw ConfigError(context + ": expected a JSON object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed) {
            if (item.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError(context + ": unknown key '" + item.key() + "'");
    }
}

template <typename T>
T json_get(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

inline json parse_json_file(const std::string& path, const std::string& context) {
    std::ifstream in(path);
    if (!in) throw ConfigError(context + ": cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(context + ": invalid JSON in " + path + ": " + e.what());
    }
}

}  // namespace neurostream
