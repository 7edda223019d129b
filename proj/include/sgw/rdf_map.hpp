#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sgw/graph.hpp"
#include "sgw/rdf.hpp"

namespace sgw {

struct SkippedTriple {
  Triple triple;
  std::string reason;

  bool operator==(const SkippedTriple&) const = default;
};

struct ImportReport {
  std::size_t triples_seen = 0;
  std::size_t concepts_created = 0;
  std::size_t concepts_merged = 0;
  std::size_t relations_created = 0;
  std::size_t attributes_added = 0;
  std::size_t classes_registered = 0;
  std::vector<SkippedTriple> skipped;

  bool operator==(const ImportReport&) const = default;
};

// Items left out of an export because they sit outside the shared subset.
struct ExportReport {
  std::size_t triples = 0;
  std::size_t non_iri_attributes = 0;
  std::size_t relation_attributes = 0;
  std::size_t non_iri_relations = 0;
  std::size_t accessions = 0;
  std::size_t source_tags = 0;
};

struct ExportResult {
  TripleSet triples;
  ExportReport report;
};

/// Replaces every blank node `_:label` by `urn:skolem:<scope>:<label>`.
TripleSet skolemize(const TripleSet& triples, std::string_view scope);

std::string skolem_iri(std::string_view scope, std::string_view label);

/// Maps triples onto the graph, in set order, one rule per triple:
///   (s rdf:type C)           concept s gets class C; if s is already typed,
///                            the smallest class IRI wins and the others are
///                            kept as rdf:type attributes (datatype xsd:anyURI)
///   (C1 rdfs:subClassOf C2)  class hierarchy edge; no concepts
///   (s rdfs:label "plain")   concept name, first label wins; later labels and
///                            tagged/typed labels become attributes
///   (s p literal)            attribute (p, lexical, datatype/lang)
///   (s p o)                  relation s -> o typed p
/// Untyped concepts get class "Thing". Re-importing the same triples leaves
/// the graph unchanged. Throws BlankNodePresent if any term is a blank node.
ImportReport import_triples(SemanticGraph& graph, const TripleSet& triples,
                            std::string_view source);

/// Inverse of import_triples over the shared subset. Concepts without an IRI
/// are written as `urn:concept:<id>`.
ExportResult export_graph_with_report(const SemanticGraph& graph);
TripleSet export_graph(const SemanticGraph& graph);

nlohmann::json report_to_json(const ImportReport& report);
nlohmann::json report_to_json(const ExportReport& report);

}  // namespace sgw
