#include "sgw/graph_json.hpp"

#include "sgw/error.hpp"

namespace sgw {

using nlohmann::json;

namespace {

constexpr std::string_view kFormat = "sgw-graph/1";

json optional_string(const std::optional<std::string>& value) {
  return value ? json(*value) : json(nullptr);
}

std::optional<std::string> read_optional(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

json attributes_to_json(const std::set<AttributeValue>& values) {
  json out = json::array();
  for (const AttributeValue& v : values) out.push_back(attribute_to_json(v));
  return out;
}

std::set<AttributeValue> attributes_from_json(const json& arr) {
  std::set<AttributeValue> out;
  for (const json& a : arr) {
    AttributeValue v;
    v.name = a.at("name").get<std::string>();
    v.lexical = a.at("lexical").get<std::string>();
    v.datatype = read_optional(a, "datatype");
    v.lang = a.value("lang", "");
    out.insert(std::move(v));
  }
  return out;
}

}  // namespace

json attribute_to_json(const AttributeValue& v) {
  json a = {{"name", v.name}, {"lexical", v.lexical}};
  if (v.datatype) a["datatype"] = *v.datatype;
  if (!v.lang.empty()) a["lang"] = v.lang;
  return a;
}

json graph_to_json(const SemanticGraph& graph) {
  json doc;
  doc["format"] = kFormat;
  doc["auto_register"] = graph.options().auto_register;
  doc["next_concept"] = graph.next_concept_id();
  doc["next_relation"] = graph.next_relation_id();

  json& classes = doc["classes"] = json::array();
  for (const auto& [id, c] : graph.classes()) {
    classes.push_back({{"id", c.id}, {"label", c.label}, {"parent", optional_string(c.parent)}});
  }
  json& rtypes = doc["relation_types"] = json::array();
  for (const auto& [id, t] : graph.relation_types()) {
    rtypes.push_back({{"id", t.id}, {"label", t.label}, {"parent", optional_string(t.parent)}});
  }
  json& concepts = doc["concepts"] = json::array();
  for (const auto& [id, c] : graph.concepts()) {
    json accessions = json::array();
    for (const Accession& a : c.accessions) accessions.push_back({{"ns", a.ns}, {"value", a.value}});
    concepts.push_back({{"id", id.value},
                        {"iri", optional_string(c.iri)},
                        {"name", optional_string(c.name)},
                        {"class", c.class_id},
                        {"accessions", std::move(accessions)},
                        {"attributes", attributes_to_json(c.attributes)},
                        {"sources", c.sources}});
  }
  json& relations = doc["relations"] = json::array();
  for (const auto& [id, r] : graph.relations()) {
    relations.push_back({{"id", id.value},
                         {"from", r.from.value},
                         {"to", r.to.value},
                         {"rtype", r.rtype},
                         {"attributes", attributes_to_json(r.attributes)},
                         {"sources", r.sources}});
  }
  json& index = doc["iri_index"] = json::object();
  for (const auto& [iri, id] : graph.iri_index()) index[iri] = id.value;
  return doc;
}

SemanticGraph graph_from_json(const json& doc) {
  try {
    if (doc.value("format", "") != kFormat) {
      throw Error(ErrorKind::Schema, "not a graph dump (missing format \"sgw-graph/1\")");
    }
    GraphOptions options;
    options.auto_register = doc.value("auto_register", true);

    std::vector<ConceptClass> classes;
    for (const json& c : doc.at("classes")) {
      classes.push_back({c.at("id").get<std::string>(), c.at("label").get<std::string>(),
                         read_optional(c, "parent")});
    }
    std::vector<RelationType> rtypes;
    for (const json& t : doc.at("relation_types")) {
      rtypes.push_back({t.at("id").get<std::string>(), t.at("label").get<std::string>(),
                        read_optional(t, "parent")});
    }
    std::vector<Concept> concepts;
    for (const json& j : doc.at("concepts")) {
      Concept c;
      c.id = ConceptId{j.at("id").get<std::uint64_t>()};
      c.iri = read_optional(j, "iri");
      c.name = read_optional(j, "name");
      c.class_id = j.at("class").get<std::string>();
      for (const json& a : j.at("accessions")) {
        c.accessions.insert({a.at("ns").get<std::string>(), a.at("value").get<std::string>()});
      }
      c.attributes = attributes_from_json(j.at("attributes"));
      c.sources = j.at("sources").get<std::set<std::string>>();
      concepts.push_back(std::move(c));
    }
    std::vector<Relation> relations;
    for (const json& j : doc.at("relations")) {
      Relation r;
      r.id = RelationId{j.at("id").get<std::uint64_t>()};
      r.from = ConceptId{j.at("from").get<std::uint64_t>()};
      r.to = ConceptId{j.at("to").get<std::uint64_t>()};
      r.rtype = j.at("rtype").get<std::string>();
      r.attributes = attributes_from_json(j.at("attributes"));
      r.sources = j.at("sources").get<std::set<std::string>>();
      relations.push_back(std::move(r));
    }
    std::map<std::string, ConceptId> index;
    for (const auto& [iri, id] : doc.at("iri_index").items()) {
      index.emplace(iri, ConceptId{id.get<std::uint64_t>()});
    }
    return SemanticGraph::restore(options, std::move(classes), std::move(rtypes),
                                  std::move(concepts), std::move(relations), std::move(index),
                                  doc.at("next_concept").get<std::uint64_t>(),
                                  doc.at("next_relation").get<std::uint64_t>());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("malformed graph dump: ") + e.what());
  }
}

std::string dump_graph(const SemanticGraph& graph) { return graph_to_json(graph).dump(2) + "\n"; }

SemanticGraph load_graph(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorKind::Json, "graph dump is not valid JSON");
  return graph_from_json(doc);
}

}  // namespace sgw
