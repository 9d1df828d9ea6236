#pragma once

#include <string>
#include <string_view>

#include <httplib.h>

#include "vulnchain/error.hpp"

namespace vulnchain {

struct HttpResponse {
  int status = 0;
  std::string body;
};

struct UrlParts {
  std::string origin;  // scheme://host[:port]
  std::string path;    // leading '/', may carry a query
};

inline UrlParts split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw TransportError("URL without scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

// One-shot GET. Transport-level failures (refused connection, DNS, TLS)
// surface as TransportError; any HTTP status is returned to the caller.
inline HttpResponse http_get(const std::string& url,
                             const httplib::Headers& headers = {}) {
  const UrlParts parts = split_url(url);
  httplib::Client client(parts.origin);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(60, 0);
  client.set_follow_location(true);
  auto res = client.Get(parts.path, headers);
  if (!res)
    throw TransportError("GET " + url + " failed: " +
                         httplib::to_string(res.error()));
  return {res->status, res->body};
}

inline std::string percent_encode(std::string_view value) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(value.size());
  for (unsigned char c : value) {
    const bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' ||
                      c == '.' || c == '~';
    if (keep) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xf];
    }
  }
  return out;
}

}  // namespace vulnchain
