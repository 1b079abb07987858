// Copyright 2026 The decpos Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DECPOS_IO_JSON_UTIL_HPP
#define DECPOS_IO_JSON_UTIL_HPP

#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace decpos {

using Json = nlohmann::json;

/// Schema error in a configuration or policy file.
class SchemaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Rejects unknown keys; silent misconfiguration would invalidate
/// experiments, so every object's key set is closed.
inline void require_keys_subset(const Json& object,
                                std::initializer_list<const char*> allowed,
                                const std::string& where) {
    if (!object.is_object())
        throw SchemaError(where + ": expected an object");
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known)
            throw SchemaError(where + ": unknown key \"" + key + "\"");
    }
}

inline const Json& require_key(const Json& object, const char* key,
                               const std::string& where) {
    auto it = object.find(key);
    if (it == object.end())
        throw SchemaError(where + ": missing key \"" + key + "\"");
    return *it;
}

/// Checks the self-describing header of a versioned file.
inline void require_format(const Json& object, const std::string& format,
                           int version, const std::string& where) {
    if (!object.is_object())
        throw SchemaError(where + ": expected a top-level object");
    const Json& fmt = require_key(object, "format", where);
    if (!fmt.is_string() || fmt.get<std::string>() != format)
        throw SchemaError(where + ": expected format \"" + format + "\"");
    const Json& ver = require_key(object, "version", where);
    if (!ver.is_number_integer() || ver.get<int>() != version)
        throw SchemaError(where + ": unsupported version (expected " +
                          std::to_string(version) + ")");
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw SchemaError("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return j;
}

inline void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace decpos

#endif
