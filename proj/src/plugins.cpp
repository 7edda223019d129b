#include "sgw/plugins.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <limits>
#include <numeric>

namespace sgw {

using nlohmann::json;

std::string_view to_string(PluginKind kind) {
  switch (kind) {
    case PluginKind::Filter: return "filter";
    case PluginKind::Transformer: return "transformer";
    case PluginKind::Matcher: return "matcher";
    case PluginKind::Analysis: return "analysis";
  }
  return "analysis";
}

std::string_view to_string(ParamType type) {
  switch (type) {
    case ParamType::String: return "string";
    case ParamType::Int: return "int";
    case ParamType::Bool: return "bool";
    case ParamType::StringList: return "string-list";
  }
  return "string";
}

namespace {

std::string join_violations(const std::vector<ParamViolation>& violations) {
  std::string out = "invalid parameters:";
  for (const ParamViolation& v : violations) out += " " + v.param + ": " + v.message + ";";
  return out;
}

json param_value_to_json(const ParamValue& value) {
  return std::visit([](const auto& v) { return json(v); }, value);
}

}  // namespace

ParamError::ParamError(std::vector<ParamViolation> violations)
    : Error(ErrorKind::InvalidParam, join_violations(violations)),
      violations_(std::move(violations)) {}

std::vector<ParamViolation> bind_params(const std::vector<ParamSpec>& schema,
                                        const json& params, ParamMap& out) {
  std::vector<ParamViolation> violations;
  out.clear();
  if (!params.is_null() && !params.is_object()) {
    violations.push_back({"params", "must be a JSON object"});
    return violations;
  }
  const json empty = json::object();
  const json& obj = params.is_null() ? empty : params;
  for (const auto& [key, value] : obj.items()) {
    const bool known = std::any_of(schema.begin(), schema.end(),
                                   [&key](const ParamSpec& p) { return p.name == key; });
    if (!known) violations.push_back({key, "unknown parameter"});
  }
  for (const ParamSpec& spec : schema) {
    auto it = obj.find(spec.name);
    if (it == obj.end()) {
      if (spec.default_value) {
        out.emplace(spec.name, *spec.default_value);
      } else if (spec.required) {
        violations.push_back({spec.name, "missing required parameter"});
      }
      continue;
    }
    const json& v = *it;
    const std::string expected = "expected " + std::string(to_string(spec.type));
    switch (spec.type) {
      case ParamType::String:
        if (!v.is_string()) {
          violations.push_back({spec.name, expected});
        } else {
          out.emplace(spec.name, v.get<std::string>());
        }
        break;
      case ParamType::Int:
        if (!v.is_number_integer()) {
          violations.push_back({spec.name, expected});
        } else if (spec.min && v.get<std::int64_t>() < *spec.min) {
          violations.push_back({spec.name, "must be >= " + std::to_string(*spec.min)});
        } else {
          out.emplace(spec.name, v.get<std::int64_t>());
        }
        break;
      case ParamType::Bool:
        if (!v.is_boolean()) {
          violations.push_back({spec.name, expected});
        } else {
          out.emplace(spec.name, v.get<bool>());
        }
        break;
      case ParamType::StringList: {
        const bool ok = v.is_array() && std::all_of(v.begin(), v.end(),
                                                    [](const json& e) { return e.is_string(); });
        if (!ok) {
          violations.push_back({spec.name, expected});
        } else {
          out.emplace(spec.name, v.get<std::vector<std::string>>());
        }
        break;
      }
    }
  }
  return violations;
}

json descriptor_to_json(const PluginDescriptor& d) {
  json params = json::array();
  for (const ParamSpec& p : d.params) {
    json j = {{"name", p.name}, {"type", to_string(p.type)}, {"required", p.required}};
    if (p.default_value) j["default"] = param_value_to_json(*p.default_value);
    if (p.min) j["min"] = *p.min;
    params.push_back(std::move(j));
  }
  return {{"name", d.name}, {"kind", to_string(d.kind)}, {"params", std::move(params)}};
}

json outcome_summary_json(const PluginOutcome& outcome) {
  return {{"metrics", outcome.metrics}, {"notes", outcome.notes}};
}

ConceptId resolve_concept_ref(const SemanticGraph& graph, std::string_view ref) {
  const bool numeric = !ref.empty() && std::all_of(ref.begin(), ref.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
  if (numeric) {
    const ConceptId id{std::stoull(std::string(ref))};
    graph.concept_at(id);
    return id;
  }
  if (auto id = graph.find_by_iri(ref)) return *id;
  throw Error(ErrorKind::UnknownConcept, "no concept with IRI '" + std::string(ref) + "'");
}

// ---------------------------------------------------------------------------

namespace {

// Undirected (or directed) adjacency with neighbor lists in ascending id order.
std::map<ConceptId, std::vector<ConceptId>> adjacency(const SemanticGraph& g, bool directed) {
  std::map<ConceptId, std::vector<ConceptId>> adj;
  for (const auto& [id, c] : g.concepts()) {
    auto& list = adj[id];
    for (ConceptId n : g.neighbors(id, directed ? Direction::Out : Direction::Both)) {
      list.push_back(n);
    }
  }
  return adj;
}

std::map<ConceptId, std::size_t> bfs_distances(
    const std::map<ConceptId, std::vector<ConceptId>>& adj, const std::vector<ConceptId>& seeds,
    std::size_t limit = std::numeric_limits<std::size_t>::max()) {
  std::map<ConceptId, std::size_t> dist;
  std::deque<ConceptId> queue;
  for (ConceptId s : seeds) {
    if (dist.emplace(s, 0).second) queue.push_back(s);
  }
  while (!queue.empty()) {
    const ConceptId u = queue.front();
    queue.pop_front();
    const std::size_t d = dist.at(u);
    if (d == limit) continue;
    for (ConceptId v : adj.at(u)) {
      if (dist.emplace(v, d + 1).second) queue.push_back(v);
    }
  }
  return dist;
}

class DisjointSets {
 public:
  ConceptId find(ConceptId x) {
    auto [it, inserted] = parent_.try_emplace(x, x);
    if (it->second == x) return x;
    const ConceptId root = find(it->second);
    parent_[x] = root;
    return root;
  }
  // The smaller id becomes the root.
  void unite(ConceptId a, ConceptId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::map<ConceptId, ConceptId> parent_;
};

}  // namespace

PluginOutcome filter_by_concept_class(const SemanticGraph& graph,
                                      const std::vector<std::string>& classes,
                                      bool include_subclasses) {
  for (const std::string& c : classes) {
    if (!graph.has_class(c)) throw Error(ErrorKind::UnknownClass, "unknown concept class '" + c + "'");
  }
  PluginOutcome out{graph, {}, {}};
  std::size_t removed = 0;
  for (const auto& [id, c] : graph.concepts()) {
    const bool keep = std::any_of(classes.begin(), classes.end(), [&](const std::string& cls) {
      return c.class_id == cls || (include_subclasses && graph.is_subclass_of(c.class_id, cls));
    });
    if (!keep) {
      out.graph.remove_concept(id);
      ++removed;
    }
  }
  out.metrics["kept"] = static_cast<double>(out.graph.concept_count());
  out.metrics["removed"] = static_cast<double>(removed);
  return out;
}

PluginOutcome filter_by_relation_type(const SemanticGraph& graph,
                                      const std::vector<std::string>& rtypes) {
  for (const std::string& t : rtypes) {
    if (!graph.has_relation_type(t)) {
      throw Error(ErrorKind::UnknownRelationType, "unknown relation type '" + t + "'");
    }
  }
  PluginOutcome out{graph, {}, {}};
  std::size_t removed = 0;
  for (const auto& [id, r] : graph.relations()) {
    if (std::find(rtypes.begin(), rtypes.end(), r.rtype) == rtypes.end()) {
      out.graph.remove_relation(id);
      ++removed;
    }
  }
  out.metrics["kept"] = static_cast<double>(out.graph.relation_count());
  out.metrics["removed"] = static_cast<double>(removed);
  return out;
}

PluginOutcome neighborhood(const SemanticGraph& graph, const std::vector<ConceptId>& seeds,
                           std::int64_t depth) {
  if (depth < 0) {
    throw Error(ErrorKind::NegativeDepth, "neighborhood depth must be >= 0, got " +
                                              std::to_string(depth));
  }
  for (ConceptId s : seeds) graph.concept_at(s);
  const auto dist = bfs_distances(adjacency(graph, false), seeds, static_cast<std::size_t>(depth));
  PluginOutcome out{graph, {}, {}};
  for (const auto& [id, c] : graph.concepts()) {
    if (!dist.contains(id)) out.graph.remove_concept(id);
  }
  out.metrics["radius_used"] = static_cast<double>(depth);
  out.metrics["kept"] = static_cast<double>(out.graph.concept_count());
  return out;
}

PluginOutcome connected_components(const SemanticGraph& graph) {
  PluginOutcome out{graph, {}, {}};
  const auto adj = adjacency(graph, false);
  std::map<ConceptId, std::size_t> component;
  std::size_t k = 0;
  // Concepts are visited in ascending id order, so component ids follow the
  // smallest member.
  for (const auto& [id, c] : graph.concepts()) {
    if (component.contains(id)) continue;
    ++k;
    for (const auto& [member, d] : bfs_distances(adj, {id})) component[member] = k;
  }
  for (const auto& [id, comp] : component) {
    out.notes.push_back("concept " + std::to_string(id.value) + " component " +
                        std::to_string(comp));
  }
  out.metrics["components"] = static_cast<double>(k);
  return out;
}

PluginOutcome degree_stats(const SemanticGraph& graph) {
  PluginOutcome out{graph, {}, {}};
  double min = 0, max = 0, sum = 0;
  bool first = true;
  for (const auto& [id, c] : graph.concepts()) {
    const auto degree = static_cast<double>(graph.outgoing(id).size() + graph.incoming(id).size());
    min = first ? degree : std::min(min, degree);
    max = first ? degree : std::max(max, degree);
    sum += degree;
    first = false;
  }
  out.metrics["min"] = min;
  out.metrics["max"] = max;
  out.metrics["mean"] = graph.concept_count() == 0 ? 0.0 : sum / static_cast<double>(graph.concept_count());
  return out;
}

PluginOutcome shortest_path(const SemanticGraph& graph, ConceptId from, ConceptId to,
                            bool directed) {
  graph.concept_at(from);
  graph.concept_at(to);
  PluginOutcome out{graph, {}, {}};

  // Distances to the target along reversed edges; the walk from the source
  // then takes the smallest-id neighbor that is one step closer.
  std::map<ConceptId, std::vector<ConceptId>> reverse;
  for (const auto& [id, c] : graph.concepts()) {
    auto& list = reverse[id];
    for (ConceptId n : graph.neighbors(id, directed ? Direction::In : Direction::Both)) {
      list.push_back(n);
    }
  }
  const auto dist = bfs_distances(reverse, {to});
  auto it = dist.find(from);
  if (it == dist.end()) {
    out.metrics["length"] = -1;
    out.notes.push_back("unreachable");
    return out;
  }
  std::string path = "path " + std::to_string(from.value);
  ConceptId current = from;
  while (current != to) {
    const std::size_t d = dist.at(current);
    for (ConceptId n : graph.neighbors(current, directed ? Direction::Out : Direction::Both)) {
      auto nd = dist.find(n);
      if (nd != dist.end() && nd->second + 1 == d) {
        current = n;
        break;
      }
    }
    path += " " + std::to_string(current.value);
  }
  out.metrics["length"] = static_cast<double>(it->second);
  out.notes.push_back(std::move(path));
  return out;
}

PluginOutcome accession_map(const SemanticGraph& graph, bool require_same_class) {
  PluginOutcome out{graph, {}, {}};
  std::map<Accession, std::vector<ConceptId>> by_accession;
  for (const auto& [id, c] : graph.concepts()) {
    for (const Accession& a : c.accessions) by_accession[a].push_back(id);
  }
  std::set<std::pair<ConceptId, ConceptId>> candidates;
  for (const auto& [acc, ids] : by_accession) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) candidates.emplace(ids[i], ids[j]);
    }
  }
  std::size_t matches = 0;
  for (const auto& [a, b] : candidates) {
    const Concept& ca = graph.concept_at(a);
    const Concept& cb = graph.concept_at(b);
    if (require_same_class && ca.class_id != cb.class_id) continue;
    const bool overlapping = std::any_of(ca.sources.begin(), ca.sources.end(),
                                         [&cb](const std::string& s) { return cb.sources.contains(s); });
    if (overlapping) continue;
    if (graph.find_relation(a, b, kEquRelation) || graph.find_relation(b, a, kEquRelation)) continue;
    out.graph.add_relation(a, b, kEquRelation, "accession_map");
    out.notes.push_back("equ " + std::to_string(a.value) + " " + std::to_string(b.value));
    ++matches;
  }
  out.metrics["matches"] = static_cast<double>(matches);
  return out;
}

PluginOutcome collapse_equivalences(const SemanticGraph& graph) {
  PluginOutcome out{graph, {}, {}};
  DisjointSets sets;
  for (const auto& [id, r] : graph.relations()) {
    if (r.rtype == kEquRelation) sets.unite(r.from, r.to);
  }
  std::size_t collapsed = 0;
  for (const auto& [id, c] : graph.concepts()) {
    const ConceptId root = sets.find(id);
    if (root == id) continue;
    out.graph.merge_concepts(root, id);
    out.notes.push_back("merged " + std::to_string(id.value) + " into " + std::to_string(root.value));
    ++collapsed;
  }
  std::vector<RelationId> loops;
  for (const auto& [id, r] : out.graph.relations()) {
    if (r.rtype == kEquRelation) loops.push_back(id);
  }
  for (RelationId id : loops) out.graph.remove_relation(id);
  out.metrics["collapsed"] = static_cast<double>(collapsed);
  return out;
}

PluginOutcome accessions_from_attribute(const SemanticGraph& graph, std::string_view attribute,
                                        std::string_view ns) {
  PluginOutcome out{graph, {}, {}};
  std::size_t added = 0;
  for (const auto& [id, c] : graph.concepts()) {
    for (const AttributeValue& a : c.attributes) {
      if (a.name == attribute && !a.lexical.empty() &&
          out.graph.add_accession(id, Accession{std::string(ns), a.lexical})) {
        ++added;
      }
    }
  }
  out.metrics["accessions_added"] = static_cast<double>(added);
  return out;
}

// ---------------------------------------------------------------------------

void PluginRegistry::add(PluginDescriptor descriptor, Runner runner) {
  std::string name = descriptor.name;
  if (entries_.contains(name)) {
    throw Error(ErrorKind::InvalidArgument, "plug-in '" + name + "' registered twice");
  }
  entries_.emplace(std::move(name), Entry{std::move(descriptor), std::move(runner)});
}

bool PluginRegistry::contains(std::string_view name) const {
  return entries_.find(name) != entries_.end();
}

const PluginDescriptor& PluginRegistry::lookup(std::string_view name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw Error(ErrorKind::UnknownPlugin, "unknown plug-in '" + std::string(name) + "'");
  }
  return it->second.descriptor;
}

std::vector<PluginDescriptor> PluginRegistry::list() const {
  std::vector<PluginDescriptor> out;
  for (const auto& [name, entry] : entries_) out.push_back(entry.descriptor);
  return out;
}

PluginOutcome PluginRegistry::run(std::string_view name, const SemanticGraph& graph,
                                  const json& params) const {
  const PluginDescriptor& descriptor = lookup(name);
  ParamMap bound;
  if (auto violations = bind_params(descriptor.params, params, bound); !violations.empty()) {
    throw ParamError(std::move(violations));
  }
  return entries_.find(name)->second.runner(graph, bound);
}

namespace {

template <class T>
const T& param(const ParamMap& params, const std::string& name) {
  return std::get<T>(params.at(name));
}

PluginRegistry make_builtin() {
  using P = ParamType;
  PluginRegistry r;
  r.add({"accession_map", PluginKind::Matcher,
         {{"require_same_class", P::Bool, false, ParamValue{false}, {}}}},
        [](const SemanticGraph& g, const ParamMap& p) {
          return accession_map(g, param<bool>(p, "require_same_class"));
        });
  r.add({"collapse_equivalences", PluginKind::Transformer, {}},
        [](const SemanticGraph& g, const ParamMap&) { return collapse_equivalences(g); });
  r.add({"connected_components", PluginKind::Analysis, {}},
        [](const SemanticGraph& g, const ParamMap&) { return connected_components(g); });
  r.add({"degree_stats", PluginKind::Analysis, {}},
        [](const SemanticGraph& g, const ParamMap&) { return degree_stats(g); });
  r.add({"filter_by_concept_class", PluginKind::Filter,
         {{"classes", P::StringList, true, {}, {}},
          {"include_subclasses", P::Bool, false, ParamValue{false}, {}}}},
        [](const SemanticGraph& g, const ParamMap& p) {
          return filter_by_concept_class(g, param<std::vector<std::string>>(p, "classes"),
                                         param<bool>(p, "include_subclasses"));
        });
  r.add({"filter_by_relation_type", PluginKind::Filter,
         {{"rtypes", P::StringList, true, {}, {}}}},
        [](const SemanticGraph& g, const ParamMap& p) {
          return filter_by_relation_type(g, param<std::vector<std::string>>(p, "rtypes"));
        });
  r.add({"neighborhood", PluginKind::Filter,
         {{"seeds", P::StringList, true, {}, {}}, {"depth", P::Int, true, {}, 0}}},
        [](const SemanticGraph& g, const ParamMap& p) {
          std::vector<ConceptId> seeds;
          for (const std::string& s : param<std::vector<std::string>>(p, "seeds")) {
            seeds.push_back(resolve_concept_ref(g, s));
          }
          return neighborhood(g, seeds, param<std::int64_t>(p, "depth"));
        });
  r.add({"shortest_path", PluginKind::Analysis,
         {{"a", P::String, true, {}, {}},
          {"b", P::String, true, {}, {}},
          {"directed", P::Bool, false, ParamValue{false}, {}}}},
        [](const SemanticGraph& g, const ParamMap& p) {
          return shortest_path(g, resolve_concept_ref(g, param<std::string>(p, "a")),
                               resolve_concept_ref(g, param<std::string>(p, "b")),
                               param<bool>(p, "directed"));
        });
  return r;
}

}  // namespace

const PluginRegistry& PluginRegistry::builtin() {
  static const PluginRegistry registry = make_builtin();
  return registry;
}

const PluginDescriptor& registry_lookup(std::string_view name) {
  return PluginRegistry::builtin().lookup(name);
}

}  // namespace sgw
