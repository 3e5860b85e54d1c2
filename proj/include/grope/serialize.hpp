#pragma once

#include <string>

#include "grope/model.hpp"
#include "json.hpp"

namespace grope {

/// Serializes a model to JSON.  Optional fields are omitted when absent, so
/// two equal models always produce identical documents.
nlohmann::json to_json(const Model& m);

/// Rebuilds a model from its JSON form.  Throws ParseError on missing or
/// ill-typed keys, duplicate ids or unknown kind names; semantic rules are
/// left to validate().
Model model_from_json(const nlohmann::json& j);

/// Canonical text form: sorted keys, two-space indent, trailing newline.
/// print(parse(print(m))) == print(m) byte for byte.
std::string print_model(const Model& m);

/// Parses a JSON document.  Throws ParseError on malformed input.
Model parse_model(const std::string& text);

Model load_model(const std::string& path);
void save_model(const Model& m, const std::string& path);

}  // namespace grope
