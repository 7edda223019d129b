#include <chrono>

#include "httplib.h"
#include "sgw/endpoint.hpp"

namespace sgw {

namespace {

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse get(const HttpRequest& request) override {
    const ParsedUrl url = parse_url(request.url);
    const std::string origin = url.scheme + "://" +
                               (url.host.find(':') != std::string::npos ? "[" + url.host + "]"
                                                                        : url.host) +
                               ":" + std::to_string(url.port);
    httplib::Client client(origin);
    const auto timeout = request.timeout;
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers headers(request.headers.begin(), request.headers.end());
    const auto started = std::chrono::steady_clock::now();
    httplib::Result result = client.Get(url.path, headers);
    if (!result) {
      const auto elapsed = std::chrono::steady_clock::now() - started;
      const httplib::Error err = result.error();
      const std::string what = "request to " + request.url + " failed: " + httplib::to_string(err);
      if (err == httplib::Error::ConnectionTimeout ||
          ((err == httplib::Error::Read || err == httplib::Error::Unknown) &&
           elapsed >= timeout)) {
        throw Error(ErrorKind::Timeout, "timed out: " + what);
      }
      throw Error(ErrorKind::Io, what);
    }
    HttpResponse response;
    response.status = result->status;
    response.content_type = result->get_header_value("Content-Type");
    response.body = std::move(result->body);
    return response;
  }
};

}  // namespace

std::shared_ptr<HttpTransport> default_transport() {
  static const std::shared_ptr<HttpTransport> instance = std::make_shared<HttplibTransport>();
  return instance;
}

}  // namespace sgw
