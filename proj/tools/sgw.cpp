// sgw command line: import, export, query, run, serve, stats.
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <pthread.h>

#include "CLI11.hpp"
#include "sgw/endpoint.hpp"
#include "sgw/graph_json.hpp"
#include "sgw/rdf.hpp"
#include "sgw/rdf_map.hpp"
#include "sgw/server.hpp"
#include "sgw/sparql.hpp"
#include "sgw/workflow.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sgw::Error(sgw::ErrorKind::Io, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << content)) throw sgw::Error(sgw::ErrorKind::Io, "cannot write '" + path + "'");
}

sgw::SemanticGraph load_dump(const std::string& path) {
  return sgw::load_graph(read_file(path));
}

void print(const json& j) { std::cout << j.dump(2, ' ', false, json::error_handler_t::replace) << "\n"; }

int cmd_import(const std::string& file, const std::string& dump, std::string source,
               const std::string& format) {
  const sgw::RdfFormat fmt = format.empty()       ? sgw::format_from_path(file)
                             : format == "turtle" ? sgw::RdfFormat::Turtle
                             : format == "ntriples"
                                 ? sgw::RdfFormat::NTriples
                                 : throw sgw::Error(sgw::ErrorKind::InvalidArgument,
                                                    "unknown format '" + format + "'");
  if (source.empty()) source = fs::path(file).filename().string();
  const sgw::TripleSet triples = sgw::skolemize(sgw::parse_rdf(read_file(file), fmt), source);
  sgw::SemanticGraph graph =
      !dump.empty() && fs::exists(dump) ? load_dump(dump) : sgw::SemanticGraph();
  const sgw::ImportReport report = sgw::import_triples(graph, triples, source);
  if (!dump.empty()) write_file(dump, sgw::dump_graph(graph));
  json out = sgw::report_to_json(report);
  out["graph"] = {{"concepts", graph.concept_count()}, {"relations", graph.relation_count()}};
  print(out);
  return 0;
}

int cmd_export(const std::string& dump, const std::string& out) {
  const sgw::ExportResult result = sgw::export_graph_with_report(load_dump(dump));
  write_file(out, sgw::serialize_ntriples(result.triples));
  print(sgw::report_to_json(result.report));
  return 0;
}

int cmd_query(const std::string& endpoint, const std::string& file, bool select, bool construct) {
  const std::string text = read_file(file);
  const sgw::QueryAst ast = sgw::parse_query(text);
  if (!select && !construct) {
    select = ast.is_select();
  } else if (select != ast.is_select()) {
    throw sgw::Error(sgw::ErrorKind::InvalidArgument,
                     std::string("query is a ") + (ast.is_select() ? "SELECT" : "CONSTRUCT") +
                         " but --" + (select ? "select" : "construct") + " was given");
  }
  const sgw::EndpointConfig ep = sgw::EndpointConfig::from_url(endpoint);
  if (select) {
    std::cout << sgw::results_to_json(sgw::select_remote(ep, text)) << "\n";
  } else {
    std::cout << sgw::serialize_ntriples(sgw::construct_remote(ep, text, endpoint));
  }
  return 0;
}

int cmd_run(const std::string& file, const std::string& dump) {
  const sgw::WorkflowSpec spec = sgw::parse_workflow(read_file(file));
  sgw::RunOptions options;
  options.base_dir = fs::path(file).parent_path();
  if (options.base_dir.empty()) options.base_dir = ".";
  std::optional<sgw::SemanticGraph> initial;
  if (!dump.empty() && fs::exists(dump)) initial = load_dump(dump);
  sgw::RunResult result = sgw::run_workflow(spec, std::move(initial), options);
  print(sgw::run_report_to_json(result.report));
  if (!result.report.ok()) {
    for (const sgw::StepReport& s : result.report.steps) {
      if (s.status == sgw::StepStatus::Failed) std::cerr << "sgw: step " << s.op << " failed: " << s.error << "\n";
    }
    return 1;
  }
  if (!dump.empty()) write_file(dump, sgw::dump_graph(result.graph));
  return 0;
}

int cmd_serve(std::optional<int> port) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  sgw::Server server;
  const int bound = server.start(port ? *port : sgw::default_port());
  std::cout << "LISTENING " << bound << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  server.stop();
  return 0;
}

int cmd_stats(const std::string& dump) {
  const sgw::SemanticGraph graph = load_dump(dump);
  std::map<std::string, std::size_t> by_class;
  std::map<std::string, std::size_t> by_rtype;
  std::map<std::string, std::size_t> by_source;
  for (const auto& [id, c] : graph.concepts()) {
    ++by_class[c.class_id];
    for (const std::string& s : c.sources) ++by_source[s];
  }
  for (const auto& [id, r] : graph.relations()) ++by_rtype[r.rtype];
  print({{"concepts", graph.concept_count()},
         {"relations", graph.relation_count()},
         {"classes", by_class},
         {"relation_types", by_rtype},
         {"sources", by_source}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic graph workbench"};
  app.require_subcommand(1);

  std::string file, dump, source, format, out, endpoint, query_file;
  bool select = false, construct = false;
  std::optional<int> port;

  auto* import = app.add_subcommand("import", "Import an RDF file (.nt or .ttl)");
  import->add_option("file", file, "RDF file")->required();
  import->add_option("--graph", dump, "Graph dump to extend and write back");
  import->add_option("--source", source, "Source tag (default: file name)");
  import->add_option("--format", format, "ntriples or turtle (default: by extension)");

  auto* exp = app.add_subcommand("export", "Export a graph dump as N-Triples");
  exp->add_option("dump", dump, "Graph dump")->required();
  exp->add_option("out", out, "Output .nt file")->required();

  auto* query = app.add_subcommand("query", "Run a query against a SPARQL endpoint");
  query->add_option("--endpoint", endpoint, "Endpoint URL")->required();
  query->add_option("--file", query_file, "Query file")->required();
  auto* sel = query->add_flag("--select", select, "Expect a SELECT query");
  query->add_flag("--construct", construct, "Expect a CONSTRUCT query")->excludes(sel);

  auto* run = app.add_subcommand("run", "Run a workflow file");
  run->add_option("workflow", file, "Workflow JSON")->required();
  run->add_option("--graph", dump, "Initial graph dump; written back on success");

  auto* serve = app.add_subcommand("serve", "Start the HTTP service");
  serve->add_option("--port", port, "Port (default: SGW_PORT or 8080; 0 = ephemeral)");

  auto* stats = app.add_subcommand("stats", "Summarize a graph dump");
  stats->add_option("dump", dump, "Graph dump")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*import) return cmd_import(file, dump, source, format);
    if (*exp) return cmd_export(dump, out);
    if (*query) return cmd_query(endpoint, query_file, select, construct);
    if (*run) return cmd_run(file, dump);
    if (*serve) return cmd_serve(port);
    if (*stats) return cmd_stats(dump);
  } catch (const sgw::Error& e) {
    std::cerr << "sgw: " << sgw::to_string(e.kind()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "sgw: internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
