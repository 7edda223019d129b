#include "sgw/rdf_map.hpp"

#include "sgw/error.hpp"

namespace sgw {

std::string skolem_iri(std::string_view scope, std::string_view label) {
  return "urn:skolem:" + std::string(scope) + ":" + std::string(label);
}

TripleSet skolemize(const TripleSet& triples, std::string_view scope) {
  if (scope.empty()) throw Error(ErrorKind::InvalidArgument, "skolem scope must be non-empty");
  auto fix = [scope](const Term& t) {
    return t.is_blank() ? Term::iri(skolem_iri(scope, t.value)) : t;
  };
  TripleSet out;
  for (const Triple& t : triples) out.insert(Triple{fix(t.s), t.p, fix(t.o)});
  return out;
}

namespace {

class Importer {
 public:
  Importer(SemanticGraph& graph, std::string_view source) : graph_(graph), source_(source) {}

  ImportReport run(const TripleSet& triples) {
    for (const Triple& t : triples) {
      ++report_.triples_seen;
      apply(t);
    }
    return std::move(report_);
  }

 private:
  void skip(const Triple& t, std::string reason) {
    report_.skipped.push_back({t, std::move(reason)});
  }

  ConceptId ensure(const std::string& iri) {
    if (auto id = graph_.find_by_iri(iri)) {
      ++report_.concepts_merged;
      graph_.add_concept_source(*id, source_);
      return *id;
    }
    ++report_.concepts_created;
    return graph_.create_concept(iri, kDefaultClass, source_);
  }

  void ensure_class(const std::string& id) {
    if (!graph_.has_class(id)) {
      graph_.register_class(id);
      ++report_.classes_registered;
    }
  }

  void add_attribute(ConceptId id, AttributeValue value) {
    if (graph_.add_concept_attribute(id, std::move(value))) ++report_.attributes_added;
  }

  static AttributeValue literal_attribute(const std::string& name, const Term& lit) {
    AttributeValue v;
    v.name = name;
    v.lexical = lit.value;
    if (!lit.datatype.empty()) v.datatype = lit.datatype;
    v.lang = lit.lang;
    return v;
  }

  void apply(const Triple& t) {
    const std::string& p = t.p.value;
    if (p == vocab::kRdfType) {
      if (!t.o.is_iri()) return skip(t, "rdf:type object must be an IRI");
      return apply_type(t);
    }
    if (p == vocab::kRdfsSubClassOf) {
      if (!t.o.is_iri()) return skip(t, "rdfs:subClassOf object must be an IRI");
      return apply_subclass(t);
    }
    if (p == vocab::kRdfsLabel && t.o.is_literal() && t.o.datatype.empty() && t.o.lang.empty()) {
      const ConceptId id = ensure(t.s.value);
      const Concept& c = graph_.concept_at(id);
      if (!c.name) {
        graph_.set_concept_name(id, t.o.value);
      } else if (*c.name != t.o.value) {
        add_attribute(id, literal_attribute(p, t.o));
      }
      return;
    }
    if (t.o.is_literal()) {
      add_attribute(ensure(t.s.value), literal_attribute(p, t.o));
      return;
    }
    const ConceptId from = ensure(t.s.value);
    const ConceptId to = ensure(t.o.value);
    if (!graph_.find_relation(from, to, p)) ++report_.relations_created;
    graph_.add_relation(from, to, p, source_);
  }

  void apply_type(const Triple& t) {
    const ConceptId id = ensure(t.s.value);
    const std::string& cls = t.o.value;
    ensure_class(cls);
    const std::string current = graph_.concept_at(id).class_id;
    if (current == cls) return;
    if (!has_iri_scheme(current)) {
      graph_.set_concept_class(id, cls);
      return;
    }
    const std::string demoted = cls < current ? current : cls;
    if (cls < current) graph_.set_concept_class(id, cls);
    add_attribute(id, AttributeValue{std::string(vocab::kRdfType), demoted,
                                     std::string(vocab::kXsdAnyUri), {}});
  }

  void apply_subclass(const Triple& t) {
    const std::string& sub = t.s.value;
    const std::string& super = t.o.value;
    if (sub == super) return skip(t, "class cannot be its own superclass");
    if (graph_.has_class(sub)) {
      const auto& parent = graph_.classes().at(sub).parent;
      if (parent && *parent == super) return;
      if (parent) return skip(t, "class already has superclass <" + *parent + ">");
    }
    if (graph_.has_class(sub) && graph_.has_class(super) && graph_.is_subclass_of(super, sub)) {
      return skip(t, "edge would close a subclass cycle");
    }
    ensure_class(sub);
    ensure_class(super);
    graph_.set_class_parent(sub, super);
  }

  SemanticGraph& graph_;
  std::string source_;
  ImportReport report_;
};

}  // namespace

ImportReport import_triples(SemanticGraph& graph, const TripleSet& triples,
                            std::string_view source) {
  for (const Triple& t : triples) {
    if (t.s.is_blank() || t.o.is_blank()) {
      throw Error(ErrorKind::BlankNodePresent,
                  "blank node in import input (skolemize first): " + to_ntriples(t));
    }
  }
  return Importer(graph, source).run(triples);
}

ExportResult export_graph_with_report(const SemanticGraph& graph) {
  ExportResult result;
  TripleSet& out = result.triples;
  ExportReport& report = result.report;

  auto concept_iri = [&graph](ConceptId id) {
    const Concept& c = graph.concept_at(id);
    return c.iri ? *c.iri : "urn:concept:" + std::to_string(id.value);
  };
  const Term type = Term::iri(std::string(vocab::kRdfType));
  const Term label = Term::iri(std::string(vocab::kRdfsLabel));
  const Term subclass = Term::iri(std::string(vocab::kRdfsSubClassOf));

  for (const auto& [id, c] : graph.concepts()) {
    const Term subject = Term::iri(concept_iri(id));
    if (c.class_id != kDefaultClass && has_iri_scheme(c.class_id)) {
      out.insert({subject, type, Term::iri(c.class_id)});
    }
    if (c.name) out.insert({subject, label, Term::literal(*c.name)});
    for (const AttributeValue& a : c.attributes) {
      if (!has_iri_scheme(a.name)) {
        ++report.non_iri_attributes;
        continue;
      }
      Term object;
      if (a.name == vocab::kRdfType && a.datatype == vocab::kXsdAnyUri &&
          has_iri_scheme(a.lexical)) {
        object = Term::iri(a.lexical);
      } else if (!a.lang.empty()) {
        object = Term::lang_literal(a.lexical, a.lang);
      } else {
        object = Term::literal(a.lexical, a.datatype.value_or(""));
      }
      out.insert({subject, Term::iri(a.name), std::move(object)});
    }
    report.accessions += c.accessions.size();
    report.source_tags += c.sources.size();
  }
  for (const auto& [id, r] : graph.relations()) {
    report.relation_attributes += r.attributes.size();
    if (!has_iri_scheme(r.rtype)) {
      ++report.non_iri_relations;
      continue;
    }
    out.insert({Term::iri(concept_iri(r.from)), Term::iri(r.rtype), Term::iri(concept_iri(r.to))});
  }
  for (const auto& [id, cls] : graph.classes()) {
    if (cls.parent && has_iri_scheme(id) && has_iri_scheme(*cls.parent)) {
      out.insert({Term::iri(id), subclass, Term::iri(*cls.parent)});
    }
  }
  report.triples = out.size();
  return result;
}

TripleSet export_graph(const SemanticGraph& graph) {
  return export_graph_with_report(graph).triples;
}

nlohmann::json report_to_json(const ImportReport& r) {
  nlohmann::json skipped = nlohmann::json::array();
  for (const SkippedTriple& s : r.skipped) {
    skipped.push_back({{"triple", to_ntriples(s.triple)}, {"reason", s.reason}});
  }
  return {{"triples_seen", r.triples_seen},
          {"concepts_created", r.concepts_created},
          {"concepts_merged", r.concepts_merged},
          {"relations_created", r.relations_created},
          {"attributes_added", r.attributes_added},
          {"classes_registered", r.classes_registered},
          {"skipped", std::move(skipped)}};
}

nlohmann::json report_to_json(const ExportReport& r) {
  return {{"triples", r.triples},
          {"non_iri_attributes", r.non_iri_attributes},
          {"relation_attributes", r.relation_attributes},
          {"non_iri_relations", r.non_iri_relations},
          {"accessions", r.accessions},
          {"source_tags", r.source_tags}};
}

}  // namespace sgw
