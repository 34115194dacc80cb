#pragma once

#include <string>

#include <json.hpp>

#include "larglab/larg.hpp"
#include "larglab/sampling.hpp"

namespace larglab {

inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::json func_to_json(const Func& f);
Func func_from_json(const nlohmann::json& j);

nlohmann::json family_to_json(const FunctionFamily& fam);
FunctionFamily family_from_json(const nlohmann::json& j);

nlohmann::json graph_to_json(const LargGraph& g);
LargGraph graph_from_json(const nlohmann::json& j);

// FNV-1a over the canonical functions serialization; identifies the family
// a graph was built on.
std::string family_hash(const FunctionFamily& fam);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace larglab
