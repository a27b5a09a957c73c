#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace anchorlight {

/// An absolute http(s) URL split into its RFC 3986 components.
struct Url {
  std::string scheme;  // "http" or "https", lowercase
  std::string host;    // lowercase
  int port = 0;        // 0 when the scheme default applies
  std::string path;    // always starts with '/'
  std::string query;   // without '?'; empty means no query

  /// Scheme default port when none is given explicitly.
  int effective_port() const { return port ? port : (scheme == "https" ? 443 : 80); }
  std::string authority() const;
  /// Path plus query, as sent in a request line.
  std::string target() const;
  std::string str() const;

  static std::optional<Url> parse(std::string_view absolute);
};

/// Resolves `href` against `base`, strips the fragment, lowercases scheme and
/// host, drops default ports, removes dot segments and repeated slashes.
/// Anything that is not http/https (mailto:, javascript:, ...) yields nullopt.
/// An empty href resolves to the base itself.
std::optional<std::string> normalize_url(std::string_view base, std::string_view href);

}  // namespace anchorlight
