#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sgw/endpoint.hpp"
#include "sgw/graph.hpp"
#include "sgw/plugins.hpp"

namespace sgw {

// Step ops that are not plug-ins.
inline constexpr std::string_view kImportRdfFile = "import.rdf_file";
inline constexpr std::string_view kImportSparql = "import.sparql";
inline constexpr std::string_view kExportNTriples = "export.ntriples";

struct WorkflowStep {
  std::string op;
  nlohmann::json params = nlohmann::json::object();
};

struct WorkflowSpec {
  std::string name;
  std::vector<WorkflowStep> steps;
};

struct WorkflowViolation {
  std::size_t step = 0;
  std::string param;  // empty when the violation concerns the op itself
  std::string message;

  std::string describe() const;
  bool operator==(const WorkflowViolation&) const = default;
};

enum class StepStatus { Ok, Failed, Skipped };
std::string_view to_string(StepStatus status);

struct StepReport {
  std::string op;
  double duration_ms = 0;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
  StepStatus status = StepStatus::Skipped;
  std::string error;
};

struct RunReport {
  std::string name;
  std::vector<StepReport> steps;
  std::size_t concepts = 0;
  std::size_t relations = 0;

  bool ok() const;
};

struct RunResult {
  SemanticGraph graph;
  RunReport report;
};

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

struct RunOptions {
  // Relative file paths in step params resolve against this directory.
  std::filesystem::path base_dir = ".";
  const PluginRegistry* registry = nullptr;  // builtin() when null
  EndpointClient client;
  EnvLookup env;  // process environment when empty
};

/// Decodes `{"name": ..., "steps": [{"op": ..., "params": {...}}]}`. Unknown
/// keys are rejected. Throws Error(Json) for malformed JSON and Error(Schema)
/// naming the step index and key for structural problems.
WorkflowSpec parse_workflow(std::string_view text);
WorkflowSpec workflow_from_json(const nlohmann::json& doc);

// Param schema of the import/export ops; nullptr for anything else.
const std::vector<ParamSpec>* builtin_op_schema(std::string_view op);

std::vector<WorkflowViolation> validate_workflow(
    const WorkflowSpec& spec, const PluginRegistry& registry = PluginRegistry::builtin());

/// Runs the steps in order. Step failures are captured in the report: the
/// failing step is marked failed, later steps skipped, and the graph from the
/// last successful step is returned. Throws Error(Schema) only when the spec
/// does not validate.
RunResult run_workflow(const WorkflowSpec& spec, std::optional<SemanticGraph> initial = {},
                       const RunOptions& options = {});

// Replaces ${NAME} occurrences; throws InvalidArgument for undefined names.
std::string substitute_env(std::string_view text, const EnvLookup& env);

nlohmann::json run_report_to_json(const RunReport& report, bool include_durations = true);

}  // namespace sgw
