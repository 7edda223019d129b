#include "sgw/workflow.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sgw/rdf.hpp"
#include "sgw/rdf_map.hpp"

namespace sgw {

using nlohmann::json;

std::string WorkflowViolation::describe() const {
  std::string out = "steps[" + std::to_string(step) + "]";
  if (!param.empty()) out += ".params." + param;
  return out + ": " + message;
}

std::string_view to_string(StepStatus status) {
  switch (status) {
    case StepStatus::Ok: return "ok";
    case StepStatus::Failed: return "failed";
    case StepStatus::Skipped: return "skipped";
  }
  return "skipped";
}

bool RunReport::ok() const {
  return std::all_of(steps.begin(), steps.end(),
                     [](const StepReport& s) { return s.status == StepStatus::Ok; });
}

namespace {

[[noreturn]] void schema_error(const std::string& message) {
  throw Error(ErrorKind::Schema, message);
}

const std::vector<ParamSpec> kImportRdfFileSchema = {
    {"path", ParamType::String, true, {}, {}},
    {"format", ParamType::String, false, {}, {}},
    {"source", ParamType::String, false, {}, {}},
};

const std::vector<ParamSpec> kImportSparqlSchema = {
    {"endpoint", ParamType::String, true, {}, {}},
    {"query", ParamType::String, true, {}, {}},
    {"source", ParamType::String, false, {}, {}},
    {"timeout_ms", ParamType::Int, false, {}, 1},
    {"retries", ParamType::Int, false, {}, 0},
};

const std::vector<ParamSpec> kExportSchema = {
    {"path", ParamType::String, true, {}, {}},
};

}  // namespace

const std::vector<ParamSpec>* builtin_op_schema(std::string_view op) {
  if (op == kImportRdfFile) return &kImportRdfFileSchema;
  if (op == kImportSparql) return &kImportSparqlSchema;
  if (op == kExportNTriples) return &kExportSchema;
  return nullptr;
}

WorkflowSpec workflow_from_json(const json& doc) {
  if (!doc.is_object()) schema_error("workflow must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "name" && key != "steps") schema_error("unknown top-level key '" + key + "'");
  }
  WorkflowSpec spec;
  auto name = doc.find("name");
  if (name == doc.end() || !name->is_string()) schema_error("'name' must be a string");
  spec.name = name->get<std::string>();

  auto steps = doc.find("steps");
  if (steps == doc.end() || !steps->is_array()) schema_error("'steps' must be an array");
  if (steps->empty()) schema_error("'steps' must not be empty");
  for (std::size_t i = 0; i < steps->size(); ++i) {
    const json& s = (*steps)[i];
    const std::string where = "steps[" + std::to_string(i) + "]";
    if (!s.is_object()) schema_error(where + ": step must be an object");
    for (const auto& [key, value] : s.items()) {
      if (key != "op" && key != "params") schema_error(where + ": unknown key '" + key + "'");
    }
    auto op = s.find("op");
    if (op == s.end() || !op->is_string()) schema_error(where + ".op: must be a string");
    WorkflowStep step;
    step.op = op->get<std::string>();
    if (auto params = s.find("params"); params != s.end()) {
      if (!params->is_object()) schema_error(where + ".params: must be an object");
      step.params = *params;
    }
    spec.steps.push_back(std::move(step));
  }
  return spec;
}

WorkflowSpec parse_workflow(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorKind::Json, "workflow is not valid JSON");
  return workflow_from_json(doc);
}

std::vector<WorkflowViolation> validate_workflow(const WorkflowSpec& spec,
                                                 const PluginRegistry& registry) {
  std::vector<WorkflowViolation> out;
  if (spec.steps.empty()) out.push_back({0, "", "workflow has no steps"});
  for (std::size_t i = 0; i < spec.steps.size(); ++i) {
    const WorkflowStep& step = spec.steps[i];
    const std::vector<ParamSpec>* schema = builtin_op_schema(step.op);
    if (!schema && registry.contains(step.op)) schema = &registry.lookup(step.op).params;
    if (!schema) {
      out.push_back({i, "", "unknown op '" + step.op + "'"});
      continue;
    }
    ParamMap bound;
    for (ParamViolation& v : bind_params(*schema, step.params, bound)) {
      out.push_back({i, std::move(v.param), std::move(v.message)});
    }
    if (step.op == kImportRdfFile) {
      if (auto it = bound.find("format"); it != bound.end()) {
        const auto& f = std::get<std::string>(it->second);
        if (f != "ntriples" && f != "turtle") {
          out.push_back({i, "format", "expected \"ntriples\" or \"turtle\""});
        }
      }
    }
  }
  return out;
}

std::string substitute_env(std::string_view text, const EnvLookup& env) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const auto start = text.find("${", pos);
    if (start == std::string_view::npos) break;
    const auto end = text.find('}', start + 2);
    if (end == std::string_view::npos) break;
    out.append(text.substr(pos, start - pos));
    const std::string_view name = text.substr(start + 2, end - start - 2);
    auto value = env(name);
    if (!value) {
      throw Error(ErrorKind::InvalidArgument,
                  "undefined environment variable ${" + std::string(name) + "}");
    }
    out += *value;
    pos = end + 1;
  }
  out.append(text.substr(pos));
  return out;
}

namespace {

json substitute_all(const json& value, const EnvLookup& env) {
  if (value.is_string()) return substitute_env(value.get<std::string>(), env);
  if (value.is_array() || value.is_object()) {
    json copy = value;
    for (auto& element : copy) element = substitute_all(element, env);
    return copy;
  }
  return value;
}

std::optional<std::string> process_env(std::string_view name) {
  const char* v = std::getenv(std::string(name).c_str());
  if (!v) return std::nullopt;
  return std::string(v);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write file '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorKind::Io, "failed writing file '" + path.string() + "'");
}

void add_import_metrics(StepReport& step, const ImportReport& r) {
  step.metrics["triples_seen"] = static_cast<double>(r.triples_seen);
  step.metrics["concepts_created"] = static_cast<double>(r.concepts_created);
  step.metrics["concepts_merged"] = static_cast<double>(r.concepts_merged);
  step.metrics["relations_created"] = static_cast<double>(r.relations_created);
  step.metrics["attributes_added"] = static_cast<double>(r.attributes_added);
  step.metrics["classes_registered"] = static_cast<double>(r.classes_registered);
  step.metrics["skipped"] = static_cast<double>(r.skipped.size());
  for (const SkippedTriple& s : r.skipped) {
    step.notes.push_back("skipped " + to_ntriples(s.triple) + " (" + s.reason + ")");
  }
}

class StepRunner {
 public:
  StepRunner(const RunOptions& options, const PluginRegistry& registry, EnvLookup env)
      : options_(options), registry_(registry), env_(std::move(env)) {}

  // Returns the graph after the step; throws on failure.
  SemanticGraph run(const WorkflowStep& step, const SemanticGraph& graph, StepReport& report) {
    const json params = substitute_all(step.params, env_);
    if (step.op == kImportRdfFile) return import_file(params, graph, report);
    if (step.op == kImportSparql) return import_sparql(params, graph, report);
    if (step.op == kExportNTriples) return export_file(params, graph, report);
    PluginOutcome outcome = registry_.run(step.op, graph, params);
    report.metrics = std::move(outcome.metrics);
    report.notes = std::move(outcome.notes);
    return std::move(outcome.graph);
  }

 private:
  std::filesystem::path resolve(const std::string& path) const {
    const std::filesystem::path p(path);
    return p.is_absolute() ? p : options_.base_dir / p;
  }

  SemanticGraph import_file(const json& params, const SemanticGraph& graph, StepReport& report) {
    const std::string path = params.at("path").get<std::string>();
    const std::string format = params.value("format", "");
    const RdfFormat fmt = format.empty()   ? format_from_path(path)
                          : format == "turtle" ? RdfFormat::Turtle
                                               : RdfFormat::NTriples;
    const std::string source =
        params.value("source", std::filesystem::path(path).filename().string());
    const TripleSet triples = skolemize(parse_rdf(read_file(resolve(path)), fmt), source);
    SemanticGraph next = graph;
    add_import_metrics(report, import_triples(next, triples, source));
    return next;
  }

  SemanticGraph import_sparql(const json& params, const SemanticGraph& graph, StepReport& report) {
    EndpointConfig ep = EndpointConfig::from_url(params.at("endpoint").get<std::string>());
    if (params.contains("timeout_ms")) {
      ep.timeout = std::chrono::milliseconds(params.at("timeout_ms").get<std::int64_t>());
    }
    if (params.contains("retries")) ep.retries = params.at("retries").get<int>();
    const std::string source = params.value("source", ep.url);
    SemanticGraph next = graph;
    add_import_metrics(report, import_from_endpoint(next, ep, params.at("query").get<std::string>(),
                                                    source, options_.client));
    return next;
  }

  SemanticGraph export_file(const json& params, const SemanticGraph& graph, StepReport& report) {
    const ExportResult exported = export_graph_with_report(graph);
    write_file(resolve(params.at("path").get<std::string>()), serialize_ntriples(exported.triples));
    report.metrics["triples"] = static_cast<double>(exported.triples.size());
    return graph;
  }

  const RunOptions& options_;
  const PluginRegistry& registry_;
  EnvLookup env_;
};

}  // namespace

RunResult run_workflow(const WorkflowSpec& spec, std::optional<SemanticGraph> initial,
                       const RunOptions& options) {
  const PluginRegistry& registry = options.registry ? *options.registry : PluginRegistry::builtin();
  if (auto violations = validate_workflow(spec, registry); !violations.empty()) {
    std::string message = "invalid workflow:";
    for (const WorkflowViolation& v : violations) message += " " + v.describe() + ";";
    throw Error(ErrorKind::Schema, message);
  }

  RunResult result{initial ? std::move(*initial) : SemanticGraph(), {}};
  result.report.name = spec.name;
  StepRunner runner(options, registry, options.env ? options.env : EnvLookup(process_env));
  bool failed = false;
  for (const WorkflowStep& step : spec.steps) {
    StepReport& sr = result.report.steps.emplace_back();
    sr.op = step.op;
    if (failed) continue;
    const auto started = std::chrono::steady_clock::now();
    try {
      result.graph = runner.run(step, result.graph, sr);
      sr.status = StepStatus::Ok;
    } catch (const std::exception& e) {
      sr.status = StepStatus::Failed;
      sr.error = e.what();
      failed = true;
    }
    sr.duration_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started).count();
  }
  result.report.concepts = result.graph.concept_count();
  result.report.relations = result.graph.relation_count();
  return result;
}

json run_report_to_json(const RunReport& report, bool include_durations) {
  json steps = json::array();
  for (std::size_t i = 0; i < report.steps.size(); ++i) {
    const StepReport& s = report.steps[i];
    json j = {{"index", i},
              {"op", s.op},
              {"status", to_string(s.status)},
              {"metrics", s.metrics},
              {"notes", s.notes}};
    if (include_durations) j["duration_ms"] = s.duration_ms;
    if (!s.error.empty()) j["error"] = s.error;
    steps.push_back(std::move(j));
  }
  return {{"name", report.name},
          {"status", report.ok() ? "ok" : "failed"},
          {"steps", std::move(steps)},
          {"graph", {{"concepts", report.concepts}, {"relations", report.relations}}}};
}

}  // namespace sgw
