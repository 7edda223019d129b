#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgw/error.hpp"
#include "sgw/graph.hpp"
#include "sgw/rdf.hpp"
#include "sgw/rdf_map.hpp"
#include "sgw/sparql.hpp"

namespace sgw {

struct EndpointConfig {
  std::string url;
  std::chrono::milliseconds timeout{30000};
  int retries = 2;
  std::chrono::milliseconds backoff{250};

  // Default configuration for `url`; SGW_HTTP_TIMEOUT_MS overrides the
  // timeout when set.
  static EndpointConfig from_url(std::string url);
  void validate() const;
};

struct ParsedUrl {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string path;  // always starts with '/'
};

// Throws InvalidArgument for anything but absolute http(s) URLs.
ParsedUrl parse_url(std::string_view url);
std::string url_encode(std::string_view text);

struct HttpRequest {
  std::string url;  // full URL including query string
  std::map<std::string, std::string> headers;
  std::chrono::milliseconds timeout{30000};
};

struct HttpResponse {
  int status = 0;
  std::string content_type;
  std::string body;
};

/// One HTTP GET. Implementations report transport failures by throwing
/// Error(Timeout) or Error(Io); HTTP statuses are returned, not thrown.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const HttpRequest& request) = 0;
};

// cpp-httplib backed transport.
std::shared_ptr<HttpTransport> default_transport();

/// SPARQL 1.1 protocol client (GET binding). Retries transport failures, 5xx
/// and 429 up to `retries` times with exponential backoff.
class EndpointClient {
 public:
  EndpointClient() : transport_(default_transport()) {}
  explicit EndpointClient(std::shared_ptr<HttpTransport> transport)
      : transport_(std::move(transport)) {}

  SolutionTable select(const EndpointConfig& ep, std::string_view query) const;

  /// Result is skolemized with `skolem_scope`.
  TripleSet construct(const EndpointConfig& ep, std::string_view query,
                      std::string_view skolem_scope) const;

  // Raw GET with retries; returns the successful response.
  HttpResponse fetch(const EndpointConfig& ep, std::string_view query,
                     std::string_view accept) const;

 private:
  std::shared_ptr<HttpTransport> transport_;
};

SolutionTable select_remote(const EndpointConfig& ep, std::string_view query);
TripleSet construct_remote(const EndpointConfig& ep, std::string_view query,
                           std::string_view skolem_scope);

/// CONSTRUCT, skolemize with scope = source, import. All-or-nothing: the
/// graph is left untouched when any step fails.
ImportReport import_from_endpoint(SemanticGraph& graph, const EndpointConfig& ep,
                                  std::string_view query, std::string_view source,
                                  const EndpointClient& client = EndpointClient());

struct FederationEntry {
  EndpointConfig endpoint;
  std::string query;
  std::string source;
};

struct FederationPlan {
  std::vector<FederationEntry> entries;
  std::size_t parallelism = 4;

  // Throws InvalidArgument when empty or when source tags repeat.
  void validate() const;
};

struct FederationOutcome {
  std::string source;
  std::optional<ImportReport> report;
  std::optional<ErrorKind> error_kind;
  std::string error;

  bool ok() const { return report.has_value(); }
};

/// Fetches all entries (concurrently, bounded by plan.parallelism), then
/// imports them one by one in plan order. A failing entry is recorded in its
/// slot and does not affect the others.
std::vector<FederationOutcome> federated_import(SemanticGraph& graph, const FederationPlan& plan,
                                                const EndpointClient& client = EndpointClient());

}  // namespace sgw
