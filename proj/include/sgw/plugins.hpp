#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sgw/error.hpp"
#include "sgw/graph.hpp"

namespace sgw {

struct PluginOutcome {
  SemanticGraph graph;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
};

enum class PluginKind { Filter, Transformer, Matcher, Analysis };
enum class ParamType { String, Int, Bool, StringList };

std::string_view to_string(PluginKind kind);
std::string_view to_string(ParamType type);

using ParamValue = std::variant<std::string, std::int64_t, bool, std::vector<std::string>>;
using ParamMap = std::map<std::string, ParamValue>;

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::String;
  bool required = false;
  std::optional<ParamValue> default_value;
  std::optional<std::int64_t> min;  // Int only
};

struct PluginDescriptor {
  std::string name;
  PluginKind kind = PluginKind::Analysis;
  std::vector<ParamSpec> params;
};

struct ParamViolation {
  std::string param;
  std::string message;

  bool operator==(const ParamViolation&) const = default;
};

// Parameter validation failure; kind() is InvalidParam.
class ParamError : public Error {
 public:
  explicit ParamError(std::vector<ParamViolation> violations);
  const std::vector<ParamViolation>& violations() const noexcept { return violations_; }

 private:
  std::vector<ParamViolation> violations_;
};

/// Checks a JSON params object against a schema and fills `out` with typed
/// values (defaults included). Unknown keys, missing required params, type
/// mismatches and range violations are reported; `out` is only meaningful
/// when the result is empty.
std::vector<ParamViolation> bind_params(const std::vector<ParamSpec>& schema,
                                        const nlohmann::json& params, ParamMap& out);

nlohmann::json descriptor_to_json(const PluginDescriptor& descriptor);
nlohmann::json outcome_summary_json(const PluginOutcome& outcome);

// A decimal string names a concept id; anything else is looked up as an IRI.
ConceptId resolve_concept_ref(const SemanticGraph& graph, std::string_view ref);

// --- built-in plug-ins ---------------------------------------------------

PluginOutcome filter_by_concept_class(const SemanticGraph& graph,
                                      const std::vector<std::string>& classes,
                                      bool include_subclasses);
PluginOutcome filter_by_relation_type(const SemanticGraph& graph,
                                      const std::vector<std::string>& rtypes);
PluginOutcome neighborhood(const SemanticGraph& graph, const std::vector<ConceptId>& seeds,
                           std::int64_t depth);
PluginOutcome connected_components(const SemanticGraph& graph);
PluginOutcome degree_stats(const SemanticGraph& graph);
PluginOutcome shortest_path(const SemanticGraph& graph, ConceptId from, ConceptId to,
                            bool directed);
PluginOutcome accession_map(const SemanticGraph& graph, bool require_same_class);
PluginOutcome collapse_equivalences(const SemanticGraph& graph);

// Not a registered plug-in: turns literal attributes named `attribute` into
// accessions (ns, lexical). Lets RDF-imported data feed accession_map.
PluginOutcome accessions_from_attribute(const SemanticGraph& graph, std::string_view attribute,
                                        std::string_view ns);

class PluginRegistry {
 public:
  using Runner = std::function<PluginOutcome(const SemanticGraph&, const ParamMap&)>;

  static const PluginRegistry& builtin();

  void add(PluginDescriptor descriptor, Runner runner);
  bool contains(std::string_view name) const;
  // Throws Error(UnknownPlugin).
  const PluginDescriptor& lookup(std::string_view name) const;
  std::vector<PluginDescriptor> list() const;  // sorted by name

  // Validates params (throws ParamError) and runs the plug-in.
  PluginOutcome run(std::string_view name, const SemanticGraph& graph,
                    const nlohmann::json& params) const;

 private:
  struct Entry {
    PluginDescriptor descriptor;
    Runner runner;
  };
  std::map<std::string, Entry, std::less<>> entries_;
};

const PluginDescriptor& registry_lookup(std::string_view name);

}  // namespace sgw
