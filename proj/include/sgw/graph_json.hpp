#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "sgw/graph.hpp"

namespace sgw {

// Complete, deterministic JSON form of a graph (the CLI's dump format).
nlohmann::json graph_to_json(const SemanticGraph& graph);
SemanticGraph graph_from_json(const nlohmann::json& doc);

std::string dump_graph(const SemanticGraph& graph);
SemanticGraph load_graph(std::string_view text);

nlohmann::json attribute_to_json(const AttributeValue& value);

}  // namespace sgw
