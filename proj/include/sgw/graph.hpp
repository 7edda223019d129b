#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace sgw {

template <class Tag>
struct StrongId {
  std::uint64_t value = 0;

  auto operator<=>(const StrongId&) const = default;
  bool operator==(const StrongId&) const = default;
};

using ConceptId = StrongId<struct ConceptTag>;
using RelationId = StrongId<struct RelationTag>;

// Reserved relation type produced by matchers and consumed by collapse.
inline constexpr std::string_view kEquRelation = "equ";
// Class given to concepts that have not been typed yet.
inline constexpr std::string_view kDefaultClass = "Thing";

struct ConceptClass {
  std::string id;
  std::string label;
  std::optional<std::string> parent;

  bool operator==(const ConceptClass&) const = default;
};

struct RelationType {
  std::string id;
  std::string label;
  std::optional<std::string> parent;

  bool operator==(const RelationType&) const = default;
};

struct Accession {
  std::string ns;
  std::string value;

  auto operator<=>(const Accession&) const = default;
  bool operator==(const Accession&) const = default;
};

// `lang` carries the language tag of a language-tagged literal; it is empty
// otherwise and is mutually exclusive with `datatype`.
struct AttributeValue {
  std::string name;
  std::string lexical;
  std::optional<std::string> datatype;
  std::string lang;

  auto operator<=>(const AttributeValue&) const = default;
  bool operator==(const AttributeValue&) const = default;
};

struct Concept {
  ConceptId id;
  std::optional<std::string> iri;
  std::optional<std::string> name;
  std::string class_id;
  std::set<Accession> accessions;
  std::set<AttributeValue> attributes;
  std::set<std::string> sources;

  bool operator==(const Concept&) const = default;
};

struct Relation {
  RelationId id;
  ConceptId from;
  ConceptId to;
  std::string rtype;
  std::set<AttributeValue> attributes;
  std::set<std::string> sources;

  bool operator==(const Relation&) const = default;
};

enum class Direction { In, Out, Both };

struct GraphOptions {
  // Register unknown class and relation type ids on first use (label = id).
  bool auto_register = true;
};

/// Ontology-annotated property graph. Concepts and relations carry graph-local
/// ids that are allocated monotonically and never reused. A concept IRI is a
/// merge key: creating a concept with an indexed IRI returns the existing one.
/// At most one relation exists per (from, to, rtype).
///
/// Single-writer value type; no internal synchronization.
class SemanticGraph {
 public:
  explicit SemanticGraph(GraphOptions options = {});

  ConceptId create_concept(std::optional<std::string> iri, std::string_view class_id,
                           std::string_view source);
  RelationId add_relation(ConceptId from, ConceptId to, std::string_view rtype,
                          std::string_view source);

  // Folds `drop` into `keep`; see README for the exact merge rules.
  void merge_concepts(ConceptId keep, ConceptId drop);

  std::set<ConceptId> neighbors(ConceptId id, Direction direction) const;
  bool is_subclass_of(std::string_view sub, std::string_view super) const;
  bool is_subtype_of(std::string_view sub, std::string_view super) const;

  // Class and relation type registries. Re-registering an id with the same
  // parent is a no-op; set_*_parent rejects cycles with HierarchyCycle.
  void register_class(std::string_view id, std::string_view label = {},
                      std::optional<std::string> parent = std::nullopt);
  void set_class_parent(std::string_view id, std::string_view parent);
  void register_relation_type(std::string_view id, std::string_view label = {},
                              std::optional<std::string> parent = std::nullopt);
  void set_relation_type_parent(std::string_view id, std::string_view parent);

  void set_concept_class(ConceptId id, std::string_view class_id);
  void set_concept_name(ConceptId id, std::string name);
  bool add_concept_attribute(ConceptId id, AttributeValue value);
  bool add_accession(ConceptId id, Accession accession);
  void add_concept_source(ConceptId id, std::string_view source);
  bool add_relation_attribute(RelationId id, AttributeValue value);

  void remove_concept(ConceptId id);
  void remove_relation(RelationId id);

  const Concept& concept_at(ConceptId id) const;
  const Relation& relation_at(RelationId id) const;
  bool has_concept(ConceptId id) const { return concepts_.contains(id); }
  bool has_class(std::string_view id) const { return classes_.contains(std::string(id)); }
  bool has_relation_type(std::string_view id) const {
    return rtypes_.contains(std::string(id));
  }
  std::optional<ConceptId> find_by_iri(std::string_view iri) const;
  std::optional<RelationId> find_relation(ConceptId from, ConceptId to,
                                          std::string_view rtype) const;

  // Ids of relations whose source (out) or target (in) is `id`.
  const std::set<RelationId>& outgoing(ConceptId id) const;
  const std::set<RelationId>& incoming(ConceptId id) const;

  const std::map<ConceptId, Concept>& concepts() const { return concepts_; }
  const std::map<RelationId, Relation>& relations() const { return relations_; }
  const std::map<std::string, ConceptClass>& classes() const { return classes_; }
  const std::map<std::string, RelationType>& relation_types() const { return rtypes_; }
  const std::map<std::string, ConceptId>& iri_index() const { return iri_index_; }
  std::uint64_t next_concept_id() const { return next_concept_; }
  std::uint64_t next_relation_id() const { return next_relation_; }
  const GraphOptions& options() const { return options_; }

  std::size_t concept_count() const { return concepts_.size(); }
  std::size_t relation_count() const { return relations_.size(); }

  // Describes every broken structural invariant; empty means consistent.
  std::vector<std::string> check_invariants() const;

  // Rebuilds a graph from raw parts, as stored in a dump. Validates the
  // result and throws InvalidArgument on inconsistency.
  static SemanticGraph restore(GraphOptions options, std::vector<ConceptClass> classes,
                               std::vector<RelationType> rtypes, std::vector<Concept> concepts,
                               std::vector<Relation> relations,
                               std::map<std::string, ConceptId> iri_index,
                               std::uint64_t next_concept, std::uint64_t next_relation);

  bool operator==(const SemanticGraph& other) const;

 private:
  using EdgeKey = std::tuple<ConceptId, ConceptId, std::string>;

  Concept& concept_mut(ConceptId id);
  void ensure_class(std::string_view id);
  void ensure_relation_type(std::string_view id);
  void index_relation(const Relation& relation);
  void unindex_relation(const Relation& relation);

  GraphOptions options_;
  std::map<ConceptId, Concept> concepts_;
  std::map<RelationId, Relation> relations_;
  std::map<std::string, ConceptClass> classes_;
  std::map<std::string, RelationType> rtypes_;
  std::map<std::string, ConceptId> iri_index_;
  std::map<EdgeKey, RelationId> edge_index_;
  std::map<ConceptId, std::set<RelationId>> out_;
  std::map<ConceptId, std::set<RelationId>> in_;
  std::uint64_t next_concept_ = 1;
  std::uint64_t next_relation_ = 1;
};

}  // namespace sgw
