#include "sgw/graph.hpp"

#include <algorithm>

#include "sgw/error.hpp"

namespace sgw {

namespace {

std::string id_text(ConceptId id) { return std::to_string(id.value); }

const std::set<RelationId>& empty_relation_set() {
  static const std::set<RelationId> empty;
  return empty;
}

// Walks parent links of a class-like registry. Returns true when `target`
// is reachable from `start` (reflexively).
template <class Registry>
bool reaches(const Registry& registry, const std::string& start, const std::string& target) {
  std::string current = start;
  for (std::size_t steps = 0; steps <= registry.size(); ++steps) {
    if (current == target) return true;
    auto it = registry.find(current);
    if (it == registry.end() || !it->second.parent) return false;
    current = *it->second.parent;
  }
  return false;  // cyclic registry; reported by check_invariants
}

template <class Registry>
void set_parent_checked(Registry& registry, std::string_view id, std::string_view parent,
                        const char* what) {
  const std::string child(id);
  if (reaches(registry, std::string(parent), child)) {
    throw Error(ErrorKind::HierarchyCycle, std::string(what) + " hierarchy cycle: making '" +
                                               std::string(parent) + "' the parent of '" +
                                               child + "'");
  }
  registry.at(child).parent = std::string(parent);
}

}  // namespace

SemanticGraph::SemanticGraph(GraphOptions options) : options_(options) {
  const std::string equ(kEquRelation);
  rtypes_.emplace(equ, RelationType{equ, "equivalent", std::nullopt});
}

void SemanticGraph::ensure_class(std::string_view id) {
  if (id.empty()) throw Error(ErrorKind::InvalidArgument, "empty class id");
  if (classes_.contains(std::string(id))) return;
  if (!options_.auto_register) {
    throw Error(ErrorKind::UnknownClass, "unknown concept class '" + std::string(id) + "'");
  }
  classes_.emplace(std::string(id), ConceptClass{std::string(id), std::string(id), std::nullopt});
}

void SemanticGraph::ensure_relation_type(std::string_view id) {
  if (id.empty()) throw Error(ErrorKind::InvalidArgument, "empty relation type id");
  if (rtypes_.contains(std::string(id))) return;
  if (!options_.auto_register) {
    throw Error(ErrorKind::UnknownRelationType,
                "unknown relation type '" + std::string(id) + "'");
  }
  rtypes_.emplace(std::string(id), RelationType{std::string(id), std::string(id), std::nullopt});
}

Concept& SemanticGraph::concept_mut(ConceptId id) {
  auto it = concepts_.find(id);
  if (it == concepts_.end()) {
    throw Error(ErrorKind::UnknownConcept, "unknown concept " + id_text(id));
  }
  return it->second;
}

const Concept& SemanticGraph::concept_at(ConceptId id) const {
  auto it = concepts_.find(id);
  if (it == concepts_.end()) {
    throw Error(ErrorKind::UnknownConcept, "unknown concept " + id_text(id));
  }
  return it->second;
}

const Relation& SemanticGraph::relation_at(RelationId id) const {
  auto it = relations_.find(id);
  if (it == relations_.end()) {
    throw Error(ErrorKind::InvalidArgument, "unknown relation " + std::to_string(id.value));
  }
  return it->second;
}

ConceptId SemanticGraph::create_concept(std::optional<std::string> iri,
                                        std::string_view class_id, std::string_view source) {
  ensure_class(class_id);
  if (iri) {
    if (iri->empty()) throw Error(ErrorKind::InvalidArgument, "empty concept IRI");
    if (auto existing = find_by_iri(*iri)) {
      if (!source.empty()) concepts_.at(*existing).sources.emplace(source);
      return *existing;
    }
  }
  const ConceptId id{next_concept_++};
  Concept c;
  c.id = id;
  c.iri = iri;
  c.class_id = std::string(class_id);
  if (!source.empty()) c.sources.emplace(source);
  if (iri) iri_index_.emplace(*iri, id);
  concepts_.emplace(id, std::move(c));
  return id;
}

void SemanticGraph::index_relation(const Relation& r) {
  edge_index_.emplace(EdgeKey{r.from, r.to, r.rtype}, r.id);
  out_[r.from].insert(r.id);
  in_[r.to].insert(r.id);
}

void SemanticGraph::unindex_relation(const Relation& r) {
  edge_index_.erase(EdgeKey{r.from, r.to, r.rtype});
  if (auto it = out_.find(r.from); it != out_.end()) {
    it->second.erase(r.id);
    if (it->second.empty()) out_.erase(it);
  }
  if (auto it = in_.find(r.to); it != in_.end()) {
    it->second.erase(r.id);
    if (it->second.empty()) in_.erase(it);
  }
}

RelationId SemanticGraph::add_relation(ConceptId from, ConceptId to, std::string_view rtype,
                                       std::string_view source) {
  if (!has_concept(from) || !has_concept(to)) {
    throw Error(ErrorKind::DanglingEndpoint, "relation endpoint missing: " + id_text(from) +
                                                 " -> " + id_text(to));
  }
  ensure_relation_type(rtype);
  if (auto existing = find_relation(from, to, rtype)) {
    if (!source.empty()) relations_.at(*existing).sources.emplace(source);
    return *existing;
  }
  Relation r;
  r.id = RelationId{next_relation_++};
  r.from = from;
  r.to = to;
  r.rtype = std::string(rtype);
  if (!source.empty()) r.sources.emplace(source);
  index_relation(r);
  const RelationId id = r.id;
  relations_.emplace(id, std::move(r));
  return id;
}

void SemanticGraph::merge_concepts(ConceptId keep, ConceptId drop) {
  if (keep == drop) {
    throw Error(ErrorKind::SelfMerge, "cannot merge concept " + id_text(keep) + " into itself");
  }
  concept_at(drop);
  Concept& kept = concept_mut(keep);
  Concept dropped = concepts_.at(drop);

  kept.accessions.merge(dropped.accessions);
  kept.attributes.merge(dropped.attributes);
  kept.sources.merge(dropped.sources);
  if (!kept.name) kept.name = dropped.name;
  if (!kept.iri && dropped.iri) kept.iri = dropped.iri;

  std::set<RelationId> incident;
  if (auto it = out_.find(drop); it != out_.end()) incident.insert(it->second.begin(), it->second.end());
  if (auto it = in_.find(drop); it != in_.end()) incident.insert(it->second.begin(), it->second.end());

  for (RelationId rid : incident) {
    Relation r = std::move(relations_.at(rid));
    relations_.erase(rid);
    unindex_relation(r);
    if (r.from == drop) r.from = keep;
    if (r.to == drop) r.to = keep;
    if (r.from == r.to && r.rtype == kEquRelation) continue;
    if (auto existing = edge_index_.find(EdgeKey{r.from, r.to, r.rtype});
        existing != edge_index_.end()) {
      Relation& target = relations_.at(existing->second);
      target.attributes.merge(r.attributes);
      target.sources.merge(r.sources);
      continue;
    }
    index_relation(r);
    relations_.emplace(rid, std::move(r));
  }

  concepts_.erase(drop);
  for (auto& [iri, owner] : iri_index_) {
    if (owner == drop) owner = keep;
  }
}

std::set<ConceptId> SemanticGraph::neighbors(ConceptId id, Direction direction) const {
  concept_at(id);
  std::set<ConceptId> result;
  if (direction != Direction::In) {
    for (RelationId rid : outgoing(id)) result.insert(relations_.at(rid).to);
  }
  if (direction != Direction::Out) {
    for (RelationId rid : incoming(id)) result.insert(relations_.at(rid).from);
  }
  return result;
}

bool SemanticGraph::is_subclass_of(std::string_view sub, std::string_view super) const {
  for (std::string_view c : {sub, super}) {
    if (!has_class(c)) {
      throw Error(ErrorKind::UnknownClass, "unknown concept class '" + std::string(c) + "'");
    }
  }
  return reaches(classes_, std::string(sub), std::string(super));
}

bool SemanticGraph::is_subtype_of(std::string_view sub, std::string_view super) const {
  for (std::string_view t : {sub, super}) {
    if (!has_relation_type(t)) {
      throw Error(ErrorKind::UnknownRelationType,
                  "unknown relation type '" + std::string(t) + "'");
    }
  }
  return reaches(rtypes_, std::string(sub), std::string(super));
}

void SemanticGraph::register_class(std::string_view id, std::string_view label,
                                   std::optional<std::string> parent) {
  if (id.empty()) throw Error(ErrorKind::InvalidArgument, "empty class id");
  auto [it, inserted] = classes_.try_emplace(std::string(id));
  if (inserted) {
    it->second.id = std::string(id);
    it->second.label = label.empty() ? std::string(id) : std::string(label);
  } else if (!label.empty()) {
    it->second.label = std::string(label);
  }
  if (parent) set_class_parent(id, *parent);
}

void SemanticGraph::set_class_parent(std::string_view id, std::string_view parent) {
  ensure_class(id);
  ensure_class(parent);
  set_parent_checked(classes_, id, parent, "class");
}

void SemanticGraph::register_relation_type(std::string_view id, std::string_view label,
                                           std::optional<std::string> parent) {
  if (id.empty()) throw Error(ErrorKind::InvalidArgument, "empty relation type id");
  auto [it, inserted] = rtypes_.try_emplace(std::string(id));
  if (inserted) {
    it->second.id = std::string(id);
    it->second.label = label.empty() ? std::string(id) : std::string(label);
  } else if (!label.empty()) {
    it->second.label = std::string(label);
  }
  if (parent) set_relation_type_parent(id, *parent);
}

void SemanticGraph::set_relation_type_parent(std::string_view id, std::string_view parent) {
  ensure_relation_type(id);
  ensure_relation_type(parent);
  set_parent_checked(rtypes_, id, parent, "relation type");
}

void SemanticGraph::set_concept_class(ConceptId id, std::string_view class_id) {
  Concept& c = concept_mut(id);
  ensure_class(class_id);
  c.class_id = std::string(class_id);
}

void SemanticGraph::set_concept_name(ConceptId id, std::string name) {
  concept_mut(id).name = std::move(name);
}

bool SemanticGraph::add_concept_attribute(ConceptId id, AttributeValue value) {
  if (value.name.empty()) throw Error(ErrorKind::InvalidArgument, "empty attribute name");
  return concept_mut(id).attributes.insert(std::move(value)).second;
}

bool SemanticGraph::add_accession(ConceptId id, Accession accession) {
  if (accession.ns.empty() || accession.value.empty()) {
    throw Error(ErrorKind::InvalidArgument, "accession namespace and value must be non-empty");
  }
  return concept_mut(id).accessions.insert(std::move(accession)).second;
}

void SemanticGraph::add_concept_source(ConceptId id, std::string_view source) {
  if (!source.empty()) concept_mut(id).sources.emplace(source);
}

bool SemanticGraph::add_relation_attribute(RelationId id, AttributeValue value) {
  if (value.name.empty()) throw Error(ErrorKind::InvalidArgument, "empty attribute name");
  auto it = relations_.find(id);
  if (it == relations_.end()) {
    throw Error(ErrorKind::InvalidArgument, "unknown relation " + std::to_string(id.value));
  }
  return it->second.attributes.insert(std::move(value)).second;
}

void SemanticGraph::remove_relation(RelationId id) {
  auto it = relations_.find(id);
  if (it == relations_.end()) return;
  unindex_relation(it->second);
  relations_.erase(it);
}

void SemanticGraph::remove_concept(ConceptId id) {
  concept_at(id);
  std::set<RelationId> incident;
  if (auto it = out_.find(id); it != out_.end()) incident.insert(it->second.begin(), it->second.end());
  if (auto it = in_.find(id); it != in_.end()) incident.insert(it->second.begin(), it->second.end());
  for (RelationId rid : incident) remove_relation(rid);
  std::erase_if(iri_index_, [id](const auto& entry) { return entry.second == id; });
  concepts_.erase(id);
}

std::optional<ConceptId> SemanticGraph::find_by_iri(std::string_view iri) const {
  auto it = iri_index_.find(std::string(iri));
  if (it == iri_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationId> SemanticGraph::find_relation(ConceptId from, ConceptId to,
                                                       std::string_view rtype) const {
  auto it = edge_index_.find(EdgeKey{from, to, std::string(rtype)});
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

const std::set<RelationId>& SemanticGraph::outgoing(ConceptId id) const {
  auto it = out_.find(id);
  return it == out_.end() ? empty_relation_set() : it->second;
}

const std::set<RelationId>& SemanticGraph::incoming(ConceptId id) const {
  auto it = in_.find(id);
  return it == in_.end() ? empty_relation_set() : it->second;
}

std::vector<std::string> SemanticGraph::check_invariants() const {
  std::vector<std::string> problems;
  auto report = [&problems](std::string message) { problems.push_back(std::move(message)); };

  for (const auto& [id, c] : concepts_) {
    if (c.id != id) report("concept key " + id_text(id) + " holds id " + id_text(c.id));
    if (id.value == 0 || id.value >= next_concept_) {
      report("concept id " + id_text(id) + " outside allocated range");
    }
    if (!classes_.contains(c.class_id)) {
      report("concept " + id_text(id) + " has unregistered class '" + c.class_id + "'");
    }
    if (c.iri) {
      auto it = iri_index_.find(*c.iri);
      if (it == iri_index_.end() || it->second != id) {
        report("concept " + id_text(id) + " IRI '" + *c.iri + "' not indexed to it");
      }
    }
    for (const Accession& a : c.accessions) {
      if (a.ns.empty() || a.value.empty()) report("concept " + id_text(id) + " has empty accession");
    }
  }
  for (const auto& [iri, owner] : iri_index_) {
    if (!concepts_.contains(owner)) report("IRI '" + iri + "' indexed to missing concept");
  }

  std::set<EdgeKey> seen;
  for (const auto& [id, r] : relations_) {
    const std::string rid = std::to_string(id.value);
    if (r.id != id) report("relation key " + rid + " holds a different id");
    if (id.value == 0 || id.value >= next_relation_) {
      report("relation id " + rid + " outside allocated range");
    }
    if (!concepts_.contains(r.from) || !concepts_.contains(r.to)) {
      report("relation " + rid + " has a dangling endpoint");
    }
    if (!rtypes_.contains(r.rtype)) report("relation " + rid + " has unregistered type");
    if (!seen.insert(EdgeKey{r.from, r.to, r.rtype}).second) {
      report("duplicate relation (from, to, rtype) at " + rid);
    }
    auto idx = edge_index_.find(EdgeKey{r.from, r.to, r.rtype});
    if (idx == edge_index_.end() || idx->second != id) {
      report("relation " + rid + " missing from edge index");
    }
    if (!outgoing(r.from).contains(id) || !incoming(r.to).contains(id)) {
      report("relation " + rid + " missing from adjacency");
    }
  }
  if (edge_index_.size() != relations_.size()) report("edge index size mismatch");

  for (const auto& [cid, c] : classes_) {
    if (c.parent && !classes_.contains(*c.parent)) report("class '" + cid + "' has unknown parent");
    if (c.parent && reaches(classes_, *c.parent, cid)) report("class '" + cid + "' is on a cycle");
  }
  for (const auto& [tid, t] : rtypes_) {
    if (t.parent && !rtypes_.contains(*t.parent)) {
      report("relation type '" + tid + "' has unknown parent");
    }
    if (t.parent && reaches(rtypes_, *t.parent, tid)) {
      report("relation type '" + tid + "' is on a cycle");
    }
  }
  return problems;
}

SemanticGraph SemanticGraph::restore(GraphOptions options, std::vector<ConceptClass> classes,
                                     std::vector<RelationType> rtypes,
                                     std::vector<Concept> concepts,
                                     std::vector<Relation> relations,
                                     std::map<std::string, ConceptId> iri_index,
                                     std::uint64_t next_concept, std::uint64_t next_relation) {
  SemanticGraph g(options);
  for (ConceptClass& c : classes) {
    const std::string key = c.id;
    g.classes_.insert_or_assign(key, std::move(c));
  }
  for (RelationType& t : rtypes) {
    const std::string key = t.id;
    g.rtypes_.insert_or_assign(key, std::move(t));
  }
  for (Concept& c : concepts) {
    const ConceptId id = c.id;
    if (!g.concepts_.emplace(id, std::move(c)).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate concept id " + id_text(id));
    }
  }
  for (Relation& r : relations) {
    const RelationId id = r.id;
    if (g.edge_index_.contains(EdgeKey{r.from, r.to, r.rtype})) {
      throw Error(ErrorKind::InvalidArgument, "duplicate relation " + std::to_string(id.value));
    }
    g.index_relation(r);
    if (!g.relations_.emplace(id, std::move(r)).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate relation id " + std::to_string(id.value));
    }
  }
  g.iri_index_ = std::move(iri_index);
  g.next_concept_ = next_concept;
  g.next_relation_ = next_relation;
  if (auto problems = g.check_invariants(); !problems.empty()) {
    throw Error(ErrorKind::InvalidArgument, "inconsistent graph: " + problems.front());
  }
  return g;
}

bool SemanticGraph::operator==(const SemanticGraph& other) const {
  return concepts_ == other.concepts_ && relations_ == other.relations_ &&
         classes_ == other.classes_ && rtypes_ == other.rtypes_ &&
         iri_index_ == other.iri_index_ && next_concept_ == other.next_concept_ &&
         next_relation_ == other.next_relation_;
}

}  // namespace sgw
