#include "sgw/view.hpp"

#include "sgw/graph_json.hpp"

namespace sgw {

using nlohmann::json;

std::string concept_label(const Concept& c) {
  if (c.name) return *c.name;
  if (c.iri) {
    const auto cut = c.iri->find_last_of("/#");
    if (cut == std::string::npos || cut + 1 == c.iri->size()) return *c.iri;
    return c.iri->substr(cut + 1);
  }
  return std::to_string(c.id.value);
}

namespace {

std::size_t degree(const SemanticGraph& graph, ConceptId id) {
  return graph.outgoing(id).size() + graph.incoming(id).size();
}

}  // namespace

json view_graph(const SemanticGraph& graph) {
  json nodes = json::array();
  std::map<std::string, std::size_t> counts;
  for (const auto& [id, c] : graph.concepts()) {
    nodes.push_back({{"id", id.value},
                     {"label", concept_label(c)},
                     {"class", c.class_id},
                     {"degree", degree(graph, id)}});
    ++counts[c.class_id];
  }
  json edges = json::array();
  for (const auto& [id, r] : graph.relations()) {
    edges.push_back(
        {{"id", id.value}, {"source", r.from.value}, {"target", r.to.value}, {"rtype", r.rtype}});
  }
  json classes = json::array();
  for (const auto& [id, cls] : graph.classes()) {
    const auto it = counts.find(id);
    classes.push_back({{"id", id},
                       {"label", cls.label},
                       {"count", it == counts.end() ? 0 : it->second}});
  }
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"classes", std::move(classes)}};
}

json concept_detail(const SemanticGraph& graph, ConceptId id) {
  const Concept& c = graph.concept_at(id);
  json attributes = json::array();
  for (const AttributeValue& a : c.attributes) attributes.push_back(attribute_to_json(a));
  json accessions = json::array();
  for (const Accession& a : c.accessions) accessions.push_back({{"ns", a.ns}, {"value", a.value}});
  return {{"id", id.value},
          {"iri", c.iri ? json(*c.iri) : json(nullptr)},
          {"name", c.name ? json(*c.name) : json(nullptr)},
          {"label", concept_label(c)},
          {"class", c.class_id},
          {"degree", degree(graph, id)},
          {"attributes", std::move(attributes)},
          {"accessions", std::move(accessions)},
          {"sources", c.sources}};
}

}  // namespace sgw
