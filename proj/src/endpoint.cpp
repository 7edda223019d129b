#include "sgw/endpoint.hpp"

#include <atomic>
#include <cctype>
#include <cstdlib>
#include <thread>
#include <variant>

namespace sgw {

EndpointConfig EndpointConfig::from_url(std::string url) {
  EndpointConfig ep;
  ep.url = std::move(url);
  if (const char* env = std::getenv("SGW_HTTP_TIMEOUT_MS"); env && *env) {
    char* end = nullptr;
    const long long ms = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && ms > 0) ep.timeout = std::chrono::milliseconds(ms);
  }
  return ep;
}

void EndpointConfig::validate() const {
  parse_url(url);
  if (timeout.count() <= 0) throw Error(ErrorKind::InvalidArgument, "endpoint timeout must be > 0");
  if (retries < 0) throw Error(ErrorKind::InvalidArgument, "endpoint retries must be >= 0");
  if (backoff.count() < 0) throw Error(ErrorKind::InvalidArgument, "endpoint backoff must be >= 0");
}

ParsedUrl parse_url(std::string_view url) {
  ParsedUrl out;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(ErrorKind::InvalidArgument, "not an absolute URL: '" + std::string(url) + "'");
  }
  out.scheme = std::string(url.substr(0, scheme_end));
  for (char& c : out.scheme) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (out.scheme != "http" && out.scheme != "https") {
    throw Error(ErrorKind::InvalidArgument, "unsupported URL scheme '" + out.scheme + "'");
  }
  std::string_view rest = url.substr(scheme_end + 3);
  const auto path_start = rest.find_first_of("/?");
  std::string_view authority = rest.substr(0, path_start);
  out.path = path_start == std::string_view::npos ? "/" : std::string(rest.substr(path_start));
  if (out.path.starts_with('?')) out.path = "/" + out.path;
  out.port = out.scheme == "https" ? 443 : 80;
  if (authority.starts_with('[')) {
    const auto close = authority.find(']');
    if (close == std::string_view::npos) {
      throw Error(ErrorKind::InvalidArgument, "malformed host in URL '" + std::string(url) + "'");
    }
    out.host = std::string(authority.substr(1, close - 1));
    authority.remove_prefix(close + 1);
    if (!authority.starts_with(':')) authority = {};
  } else {
    const auto colon = authority.rfind(':');
    out.host = std::string(authority.substr(0, colon));
    authority = colon == std::string_view::npos ? std::string_view{} : authority.substr(colon);
  }
  if (!authority.empty()) {
    const std::string port(authority.substr(1));
    char* end = nullptr;
    const long value = std::strtol(port.c_str(), &end, 10);
    if (port.empty() || *end != '\0' || value <= 0 || value > 65535) {
      throw Error(ErrorKind::InvalidArgument, "invalid port in URL '" + std::string(url) + "'");
    }
    out.port = static_cast<int>(value);
  }
  if (out.host.empty()) {
    throw Error(ErrorKind::InvalidArgument, "missing host in URL '" + std::string(url) + "'");
  }
  return out;
}

std::string url_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(c);
    } else {
      out.push_back('%');
      out.push_back(kHex[u >> 4]);
      out.push_back(kHex[u & 0xF]);
    }
  }
  return out;
}

namespace {

bool retryable(int status) { return status >= 500 || status == 429; }

QueryAst parse_locally(std::string_view query, bool want_select) {
  QueryAst ast;
  try {
    ast = parse_query(query);
  } catch (const SyntaxError& e) {
    throw Error(ErrorKind::LocalSyntax, std::string("query rejected before sending: ") + e.what());
  }
  if (want_select != ast.is_select()) {
    throw Error(ErrorKind::LocalSyntax, want_select ? "query rejected before sending: expected SELECT"
                                                    : "query rejected before sending: expected CONSTRUCT");
  }
  return ast;
}

}  // namespace

HttpResponse EndpointClient::fetch(const EndpointConfig& ep, std::string_view query,
                                   std::string_view accept) const {
  ep.validate();
  HttpRequest request;
  request.url = ep.url + (ep.url.find('?') == std::string::npos ? "?" : "&") + "query=" +
                url_encode(query);
  request.headers["Accept"] = std::string(accept);
  request.timeout = ep.timeout;

  std::optional<Error> last;
  std::optional<HttpError> last_http;
  for (int attempt = 0; attempt <= ep.retries; ++attempt) {
    if (attempt > 0 && ep.backoff.count() > 0) {
      std::this_thread::sleep_for(ep.backoff * (1LL << std::min(attempt - 1, 16)));
    }
    HttpResponse response;
    try {
      response = transport_->get(request);
    } catch (const HttpError&) {
      throw;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Timeout && e.kind() != ErrorKind::Io) throw;
      last = e;
      last_http.reset();
      continue;
    }
    if (response.status >= 200 && response.status < 300) return response;
    HttpError error(response.status, "endpoint " + ep.url + " answered HTTP " +
                                         std::to_string(response.status));
    if (!retryable(response.status)) throw error;
    last_http = error;
    last.reset();
  }
  if (last_http) throw *last_http;
  throw *last;
}

SolutionTable EndpointClient::select(const EndpointConfig& ep, std::string_view query) const {
  parse_locally(query, true);
  const HttpResponse response = fetch(ep, query, "application/sparql-results+json");
  return results_from_json(response.body);
}

TripleSet EndpointClient::construct(const EndpointConfig& ep, std::string_view query,
                                    std::string_view skolem_scope) const {
  parse_locally(query, false);
  const HttpResponse response = fetch(ep, query, "application/n-triples");
  TripleSet triples;
  try {
    triples = parse_ntriples(response.body);
  } catch (const SyntaxError& e) {
    throw SyntaxError("in response from " + ep.url + ": " + e.reason(), e.line(), e.column(),
                      e.kind());
  }
  return skolemize(triples, skolem_scope);
}

SolutionTable select_remote(const EndpointConfig& ep, std::string_view query) {
  return EndpointClient().select(ep, query);
}

TripleSet construct_remote(const EndpointConfig& ep, std::string_view query,
                           std::string_view skolem_scope) {
  return EndpointClient().construct(ep, query, skolem_scope);
}

ImportReport import_from_endpoint(SemanticGraph& graph, const EndpointConfig& ep,
                                  std::string_view query, std::string_view source,
                                  const EndpointClient& client) {
  if (source.empty()) throw Error(ErrorKind::InvalidArgument, "import source tag must be non-empty");
  const TripleSet triples = client.construct(ep, query, source);
  SemanticGraph scratch = graph;
  ImportReport report = import_triples(scratch, triples, source);
  graph = std::move(scratch);
  return report;
}

void FederationPlan::validate() const {
  if (entries.empty()) throw Error(ErrorKind::InvalidArgument, "federation plan is empty");
  std::set<std::string> seen;
  for (const FederationEntry& e : entries) {
    if (e.source.empty()) throw Error(ErrorKind::InvalidArgument, "federation source tag is empty");
    if (!seen.insert(e.source).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate federation source tag '" + e.source + "'");
    }
  }
}

std::vector<FederationOutcome> federated_import(SemanticGraph& graph, const FederationPlan& plan,
                                                const EndpointClient& client) {
  plan.validate();
  struct Failure {
    ErrorKind kind;
    std::string message;
  };
  const std::size_t n = plan.entries.size();
  std::vector<std::variant<std::monostate, TripleSet, Failure>> fetched(n);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const FederationEntry& entry = plan.entries[i];
      try {
        fetched[i] = client.construct(entry.endpoint, entry.query, entry.source);
      } catch (const Error& e) {
        fetched[i] = Failure{e.kind(), e.what()};
      } catch (const std::exception& e) {
        fetched[i] = Failure{ErrorKind::Io, e.what()};
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t workers = std::max<std::size_t>(1, std::min(plan.parallelism, n));
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::vector<FederationOutcome> outcomes(n);
  for (std::size_t i = 0; i < n; ++i) {
    FederationOutcome& out = outcomes[i];
    out.source = plan.entries[i].source;
    if (const auto* failure = std::get_if<Failure>(&fetched[i])) {
      out.error_kind = failure->kind;
      out.error = failure->message;
      continue;
    }
    try {
      SemanticGraph scratch = graph;
      out.report = import_triples(scratch, std::get<TripleSet>(fetched[i]), out.source);
      graph = std::move(scratch);
    } catch (const Error& e) {
      out.error_kind = e.kind();
      out.error = e.what();
    }
  }
  return outcomes;
}

}  // namespace sgw
