#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgw/endpoint.hpp"
#include "sgw/graph.hpp"
#include "sgw/plugins.hpp"

namespace sgw {

struct ServerOptions {
  std::string host = "127.0.0.1";
  EndpointClient client;
  const PluginRegistry* registry = nullptr;  // builtin() when null
  // Relative paths in workflows posted to the service resolve here.
  std::filesystem::path workflow_dir = ".";
  // Called while a mutation holds its graph but before the new state is
  // committed. Tests use it to hold a mutation open.
  std::function<void(const std::string& graph_id)> before_commit;
};

// Port from SGW_PORT, or 8080.
int default_port();

/// HTTP service:
///   POST /graphs                         201 {"id"}
///   GET  /graphs                         200 {"graphs": [...]}
///   GET  /graphs/{id}/view               200 view JSON
///   GET  /graphs/{id}/concepts/{cid}     200 concept detail
///   POST /graphs/{id}/import/rdf         200 ImportReport (Content-Type picks
///                                        the parser, ?source= tags, default
///                                        "upload")
///   POST /graphs/{id}/import/sparql      200 ImportReport, body {endpoint,
///                                        query, source}
///   POST /graphs/{id}/plugins/{name}     200 {metrics, notes}
///   POST /graphs/{id}/workflow           200 RunReport
///   GET  /graphs/{id}/export.nt          200 canonical N-Triples
///   GET  /plugins                        200 descriptors
///   GET|POST /sparql                     SPARQL protocol over a local store
///   POST /sparql/data                    add N-Triples/Turtle to that store
///   DELETE /sparql/data                  clear it
/// Errors are {"error", "message", "violations"} with 400, 404, 409 or 502.
/// A mutation that finds another mutation of the same graph in flight is
/// answered with 409; mutations are all-or-nothing.
class Server {
 public:
  explicit Server(ServerOptions options = {});
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds (0 = ephemeral), starts serving on a background thread and returns
  // the bound port. Throws Error(Io) when binding fails.
  int start(int port);
  void stop();
  int port() const;

  // In-process access, mainly for tests and the CLI.
  std::string create_graph();
  std::optional<SemanticGraph> snapshot(std::string_view graph_id) const;
  std::size_t conflicts() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sgw
