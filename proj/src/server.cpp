#include "sgw/server.hpp"

#include <cstdlib>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "sgw/rdf.hpp"
#include "sgw/rdf_map.hpp"
#include "sgw/sparql.hpp"
#include "sgw/view.hpp"
#include "sgw/workflow.hpp"

namespace sgw {

using nlohmann::json;

int default_port() {
  if (const char* v = std::getenv("SGW_PORT"); v && *v) {
    try {
      const int port = std::stoi(v);
      if (port >= 0 && port <= 65535) return port;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::InvalidArgument, std::string("invalid SGW_PORT '") + v + "'");
  }
  return 8080;
}

namespace {

constexpr std::string_view kJson = "application/json";

struct GraphSlot {
  std::mutex mutation;
  mutable std::shared_mutex data;
  SemanticGraph graph;
};

// Raised inside handlers to produce a non-200 response.
struct HttpFailure {
  int status;
  json body;
};

std::string dump_json(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

HttpFailure failure(int status, std::string_view error, const std::string& message,
                    json violations = json::array()) {
  return {status, {{"error", error}, {"message", message}, {"violations", std::move(violations)}}};
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownPlugin: return 404;
    case ErrorKind::Http:
    case ErrorKind::Timeout:
    case ErrorKind::Protocol:
    case ErrorKind::Io: return 502;
    default: return 400;
  }
}

json violations_json(const std::vector<ParamViolation>& violations) {
  json out = json::array();
  for (const ParamViolation& v : violations) {
    out.push_back({{"param", v.param}, {"message", v.message}});
  }
  return out;
}

json violations_json(const std::vector<WorkflowViolation>& violations) {
  json out = json::array();
  for (const WorkflowViolation& v : violations) {
    out.push_back({{"step", v.step}, {"param", v.param}, {"message", v.message}});
  }
  return out;
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded()) throw failure(400, to_string(ErrorKind::Json), "body is not valid JSON");
  return body;
}

std::string media_type(const httplib::Request& req) {
  std::string type = req.get_header_value("Content-Type");
  if (auto semi = type.find(';'); semi != std::string::npos) type.resize(semi);
  while (!type.empty() && type.back() == ' ') type.pop_back();
  return type;
}

}  // namespace

struct Server::Impl {
  explicit Impl(ServerOptions opts) : options(std::move(opts)) {}

  const PluginRegistry& registry() const {
    return options.registry ? *options.registry : PluginRegistry::builtin();
  }

  std::string create_graph() {
    std::unique_lock lock(graphs_mutex);
    std::string id = "g" + std::to_string(next_graph++);
    graphs.emplace(id, std::make_shared<GraphSlot>());
    return id;
  }

  std::shared_ptr<GraphSlot> find(const std::string& id) const {
    std::shared_lock lock(graphs_mutex);
    auto it = graphs.find(id);
    if (it == graphs.end()) throw failure(404, "UnknownGraph", "no graph '" + id + "'");
    return it->second;
  }

  template <class Fn>
  json read(const std::string& id, Fn&& fn) const {
    auto slot = find(id);
    std::shared_lock lock(slot->data);
    return fn(slot->graph);
  }

  // `fn(graph&)` works on a private copy and returns {commit, body}. The copy
  // replaces the graph only after fn returns, and only when commit is set.
  template <class Fn>
  json mutate(const std::string& id, Fn&& fn) {
    auto slot = find(id);
    std::unique_lock guard(slot->mutation, std::try_to_lock);
    if (!guard.owns_lock()) {
      ++conflict_count;
      throw failure(409, "Conflict", "another mutation of graph '" + id + "' is in flight");
    }
    SemanticGraph working = [&] {
      std::shared_lock lock(slot->data);
      return slot->graph;
    }();
    auto [commit, body] = fn(working);
    if (options.before_commit) options.before_commit(id);
    if (commit) {
      std::unique_lock lock(slot->data);
      slot->graph = std::move(working);
    }
    return body;
  }

  void routes() {
    http.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    http.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type, Accept");
      res.status = 204;
    });

    http.Post("/graphs", wrap([this](const httplib::Request&, httplib::Response& res) {
      res.status = 201;
      return json{{"id", create_graph()}};
    }));
    http.Get("/graphs", wrap([this](const httplib::Request&, httplib::Response&) {
      std::shared_lock lock(graphs_mutex);
      json ids = json::array();
      for (const auto& [id, slot] : graphs) ids.push_back(id);
      return json{{"graphs", ids}};
    }));
    http.Get(R"(/graphs/([^/]+)/view)", wrap([this](const httplib::Request& req, httplib::Response&) {
      return read(req.matches[1], [](const SemanticGraph& g) { return view_graph(g); });
    }));
    http.Get(R"(/graphs/([^/]+)/concepts/(\d+))",
             wrap([this](const httplib::Request& req, httplib::Response&) {
               const ConceptId cid{std::stoull(req.matches[2])};
               return read(req.matches[1], [&](const SemanticGraph& g) {
                 if (!g.has_concept(cid)) {
                   throw failure(404, to_string(ErrorKind::UnknownConcept),
                                 "no concept " + std::to_string(cid.value));
                 }
                 return concept_detail(g, cid);
               });
             }));
    http.Get(R"(/graphs/([^/]+)/export\.nt)", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
      respond(res, [&] {
        auto slot = find(req.matches[1]);
        std::string body;
        {
          std::shared_lock lock(slot->data);
          body = serialize_ntriples(export_graph(slot->graph));
        }
        res.set_content(body, "application/n-triples");
      });
    });
    http.Post(R"(/graphs/([^/]+)/import/rdf)",
              wrap([this](const httplib::Request& req, httplib::Response&) {
                const RdfFormat format = format_from_media_type(media_type(req));
                const std::string source =
                    req.has_param("source") ? req.get_param_value("source") : "upload";
                const TripleSet triples = skolemize(parse_rdf(req.body, format), source);
                return mutate(req.matches[1], [&](SemanticGraph& g) {
                  return std::pair{true, report_to_json(import_triples(g, triples, source))};
                });
              }));
    http.Post(R"(/graphs/([^/]+)/import/sparql)",
              wrap([this](const httplib::Request& req, httplib::Response&) {
                const json body = parse_body(req);
                ParamMap params;
                if (auto v = bind_params(*builtin_op_schema(kImportSparql), body, params);
                    !v.empty()) {
                  throw ParamError(std::move(v));
                }
                EndpointConfig ep = EndpointConfig::from_url(std::get<std::string>(params.at("endpoint")));
                if (auto it = params.find("timeout_ms"); it != params.end()) {
                  ep.timeout = std::chrono::milliseconds(std::get<std::int64_t>(it->second));
                }
                if (auto it = params.find("retries"); it != params.end()) {
                  ep.retries = static_cast<int>(std::get<std::int64_t>(it->second));
                }
                const std::string source = params.contains("source")
                                               ? std::get<std::string>(params.at("source"))
                                               : ep.url;
                const std::string query = std::get<std::string>(params.at("query"));
                // Malformed remote data is the remote's fault: 502, not 400.
                try {
                  return mutate(req.matches[1], [&](SemanticGraph& g) {
                    return std::pair{true, report_to_json(import_from_endpoint(g, ep, query, source,
                                                                               options.client))};
                  });
                } catch (const SyntaxError& e) {
                  throw failure(502, to_string(e.kind()), e.what());
                }
              }));
    http.Post(R"(/graphs/([^/]+)/plugins/([^/]+))",
              wrap([this](const httplib::Request& req, httplib::Response&) {
                find(req.matches[1]);
                const std::string name = req.matches[2];
                registry().lookup(name);
                const json params = parse_body(req);
                return mutate(req.matches[1], [&](SemanticGraph& g) {
                  PluginOutcome outcome = registry().run(name, g, params);
                  json summary = outcome_summary_json(outcome);
                  g = std::move(outcome.graph);
                  return std::pair{true, std::move(summary)};
                });
              }));
    http.Post(R"(/graphs/([^/]+)/workflow)",
              wrap([this](const httplib::Request& req, httplib::Response&) {
                find(req.matches[1]);
                const WorkflowSpec spec = workflow_from_json(parse_body(req));
                if (auto v = validate_workflow(spec, registry()); !v.empty()) {
                  throw failure(400, to_string(ErrorKind::Schema), "invalid workflow",
                                violations_json(v));
                }
                RunOptions run;
                run.base_dir = options.workflow_dir;
                run.registry = &registry();
                run.client = options.client;
                return mutate(req.matches[1], [&](SemanticGraph& g) {
                  RunResult result = run_workflow(spec, g, run);
                  const bool ok = result.report.ok();
                  json body = run_report_to_json(result.report);
                  body["committed"] = ok;
                  if (ok) g = std::move(result.graph);
                  return std::pair{ok, std::move(body)};
                });
              }));
    http.Get("/plugins", wrap([this](const httplib::Request&, httplib::Response&) {
      json out = json::array();
      for (const PluginDescriptor& d : registry().list()) out.push_back(descriptor_to_json(d));
      return json{{"plugins", out}};
    }));

    http.Get("/sparql", [this](const httplib::Request& req, httplib::Response& res) {
      respond(res, [&] {
        if (!req.has_param("query")) {
          throw failure(400, to_string(ErrorKind::InvalidArgument), "missing 'query' parameter");
        }
        answer_query(req.get_param_value("query"), res);
      });
    });
    http.Post("/sparql", [this](const httplib::Request& req, httplib::Response& res) {
      respond(res, [&] {
        if (media_type(req) == "application/sparql-query") {
          answer_query(req.body, res);
        } else if (req.has_param("query")) {
          answer_query(req.get_param_value("query"), res);
        } else {
          throw failure(400, to_string(ErrorKind::InvalidArgument), "missing query");
        }
      });
    });
    http.Post("/sparql/data", wrap([this](const httplib::Request& req, httplib::Response&) {
      const TripleSet triples = parse_rdf(req.body, format_from_media_type(media_type(req)));
      std::unique_lock lock(store_mutex);
      std::size_t inserted = 0;
      for (const Triple& t : triples) inserted += store.insert(t) ? 1 : 0;
      return json{{"inserted", inserted}, {"size", store.size()}};
    }));
    http.Delete("/sparql/data", wrap([this](const httplib::Request&, httplib::Response&) {
      std::unique_lock lock(store_mutex);
      store.clear();
      return json{{"size", 0}};
    }));
  }

  void answer_query(const std::string& text, httplib::Response& res) {
    const QueryAst query = parse_query(text);
    std::shared_lock lock(store_mutex);
    if (query.is_select()) {
      SolutionTable table{query.select().vars, eval_select(store, query)};
      lock.unlock();
      res.set_content(results_to_json(table), "application/sparql-results+json");
    } else {
      const TripleSet triples = eval_construct(store, query);
      lock.unlock();
      res.set_content(serialize_ntriples(triples), "application/n-triples");
    }
  }

  template <class Body>
  void respond(httplib::Response& res, Body&& body) {
    try {
      body();
    } catch (const HttpFailure& f) {
      res.status = f.status;
      res.set_content(dump_json(f.body), std::string(kJson));
    } catch (const ParamError& e) {
      res.status = 400;
      res.set_content(dump_json(failure(400, to_string(e.kind()), e.what(),
                                        violations_json(e.violations()))
                                    .body),
                      std::string(kJson));
    } catch (const Error& e) {
      const HttpFailure f = failure(status_for(e.kind()), to_string(e.kind()), e.what());
      res.status = f.status;
      res.set_content(dump_json(f.body), std::string(kJson));
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(dump_json(failure(500, "Internal", e.what()).body), std::string(kJson));
    }
  }

  template <class Handler>
  httplib::Server::Handler wrap(Handler handler) {
    return [this, handler](const httplib::Request& req, httplib::Response& res) {
      respond(res, [&] {
        const json body = handler(req, res);
        res.set_content(dump_json(body), std::string(kJson));
      });
    };
  }

  ServerOptions options;
  httplib::Server http;
  std::thread thread;
  int bound_port = -1;

  mutable std::shared_mutex graphs_mutex;
  std::map<std::string, std::shared_ptr<GraphSlot>> graphs;
  std::uint64_t next_graph = 1;
  std::atomic<std::size_t> conflict_count{0};

  mutable std::shared_mutex store_mutex;
  TripleStore store;
};

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
  impl_->routes();
}

Server::~Server() { stop(); }

int Server::start(int port) {
  if (impl_->thread.joinable()) throw Error(ErrorKind::InvalidArgument, "server already started");
  auto& http = impl_->http;
  const std::string& host = impl_->options.host;
  int bound = port == 0 ? http.bind_to_any_port(host) : (http.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw Error(ErrorKind::Io, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->bound_port = bound;
  impl_->thread = std::thread([&http] { http.listen_after_bind(); });
  http.wait_until_ready();
  return bound;
}

void Server::stop() {
  if (!impl_ || !impl_->thread.joinable()) return;
  impl_->http.stop();
  impl_->thread.join();
}

int Server::port() const { return impl_->bound_port; }

std::string Server::create_graph() { return impl_->create_graph(); }

std::optional<SemanticGraph> Server::snapshot(std::string_view graph_id) const {
  std::shared_ptr<GraphSlot> slot;
  {
    std::shared_lock lock(impl_->graphs_mutex);
    auto it = impl_->graphs.find(std::string(graph_id));
    if (it == impl_->graphs.end()) return std::nullopt;
    slot = it->second;
  }
  std::shared_lock lock(slot->data);
  return slot->graph;
}

std::size_t Server::conflicts() const { return impl_->conflict_count.load(); }

}  // namespace sgw
