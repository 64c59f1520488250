#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

// Just enough of JSON Schema draft-07 to validate the CLI's published
// schemas: type / properties / required / items / enum / oneOf /
// additionalProperties:false and local $ref into #/definitions.
namespace schemacheck {

using nlohmann::json;

inline bool type_matches(const json& value, const std::string& type) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "integer") return value.is_number_integer();
    if (type == "number") return value.is_number();
    if (type == "boolean") return value.is_boolean();
    if (type == "null") return value.is_null();
    return false;
}

// Returns "" when valid, otherwise a path-prefixed description of the first
// violation found.
inline std::string validate_node(const json& schema, const json& value, const json& root,
                                 const std::string& path) {
    if (schema.contains("$ref")) {
        const std::string ref = schema["$ref"].get<std::string>();
        const std::string prefix = "#/definitions/";
        if (ref.rfind(prefix, 0) != 0) return path + ": unsupported $ref '" + ref + "'";
        const std::string name = ref.substr(prefix.size());
        if (!root.contains("definitions") || !root["definitions"].contains(name))
            return path + ": unresolved $ref '" + ref + "'";
        return validate_node(root["definitions"][name], value, root, path);
    }

    if (schema.contains("oneOf")) {
        int matches = 0;
        for (const json& sub : schema["oneOf"])
            if (validate_node(sub, value, root, path).empty()) ++matches;
        if (matches != 1)
            return path + ": matched " + std::to_string(matches) + " of the oneOf branches";
        return "";
    }

    if (schema.contains("type")) {
        const json& type = schema["type"];
        bool ok = false;
        if (type.is_string()) {
            ok = type_matches(value, type.get<std::string>());
        } else {
            for (const json& t : type)
                if (type_matches(value, t.get<std::string>())) ok = true;
        }
        if (!ok) return path + ": type mismatch (got " + std::string(value.type_name()) + ")";
    }

    if (schema.contains("enum")) {
        bool ok = false;
        for (const json& candidate : schema["enum"])
            if (candidate == value) ok = true;
        if (!ok) return path + ": value not in enum: " + value.dump();
    }

    if (value.is_object()) {
        if (schema.contains("required"))
            for (const json& key : schema["required"])
                if (!value.contains(key.get<std::string>()))
                    return path + ": missing required key '" + key.get<std::string>() + "'";
        const json props = schema.value("properties", json::object());
        for (const auto& [key, sub] : value.items()) {
            if (props.contains(key)) {
                std::string err = validate_node(props[key], sub, root, path + "." + key);
                if (!err.empty()) return err;
            } else if (schema.value("additionalProperties", json(true)) == json(false)) {
                return path + ": unexpected key '" + key + "'";
            }
        }
    }

    if (value.is_array() && schema.contains("items")) {
        for (std::size_t i = 0; i < value.size(); ++i) {
            std::string err = validate_node(schema["items"], value[i], root,
                                            path + "[" + std::to_string(i) + "]");
            if (!err.empty()) return err;
        }
    }

    return "";
}

inline std::string validate(const json& schema, const json& value) {
    return validate_node(schema, value, schema, "$");
}

inline json load_schema(const std::string& name) {
    std::ifstream in(std::string(RANKRATIO_SCHEMA_DIR) + "/" + name);
    return json::parse(in);
}

}  // namespace schemacheck
