#pragma once

#include <string>

#include "json.hpp"
#include "sgw/graph.hpp"

namespace sgw {

// Name if set, else the IRI tail after the last '/' or '#', else the id.
std::string concept_label(const Concept& c);

/// UI wire format:
///   {"nodes":   [{"id", "label", "class", "degree"}],
///    "edges":   [{"id", "source", "target", "rtype"}],
///    "classes": [{"id", "label", "count"}]}
/// Nodes and edges are ordered by id, classes by class id.
nlohmann::json view_graph(const SemanticGraph& graph);

// Everything known about one concept, for detail panels.
nlohmann::json concept_detail(const SemanticGraph& graph, ConceptId id);

}  // namespace sgw
