#include "anchorlight/url.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace anchorlight {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

struct Reference {
  std::optional<std::string> scheme;
  std::optional<std::string> authority;
  std::string path;
  std::optional<std::string> query;
};

// Generic RFC 3986 split; the fragment is dropped.
Reference split(std::string_view s) {
  Reference r;
  if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
  auto colon = s.find(':');
  auto delim = s.find_first_of("/?");
  if (colon != std::string_view::npos && colon > 0 && (delim == std::string_view::npos || colon < delim) &&
      std::isalpha(static_cast<unsigned char>(s[0])) &&
      std::all_of(s.begin(), s.begin() + colon, [](unsigned char c) {
        return std::isalnum(c) || c == '+' || c == '-' || c == '.';
      })) {
    r.scheme = lower(s.substr(0, colon));
    s.remove_prefix(colon + 1);
  }
  if (s.starts_with("//")) {
    s.remove_prefix(2);
    auto end = s.find_first_of("/?");
    r.authority = std::string(s.substr(0, end));
    s = end == std::string_view::npos ? std::string_view() : s.substr(end);
  }
  if (auto q = s.find('?'); q != std::string_view::npos) {
    r.query = std::string(s.substr(q + 1));
    s = s.substr(0, q);
  }
  r.path = std::string(s);
  return r;
}

std::string collapse_slashes(std::string_view path) {
  std::string out;
  for (char c : path) {
    if (c == '/' && !out.empty() && out.back() == '/') continue;
    out += c;
  }
  return out;
}

std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string_view> out;
  bool absolute = path.starts_with('/');
  bool trailing = false;
  std::size_t i = absolute ? 1 : 0;
  while (i <= path.size()) {
    auto next = path.find('/', i);
    if (next == std::string_view::npos) next = path.size();
    std::string_view seg = path.substr(i, next - i);
    bool last = next == path.size();
    if (seg == ".") {
      trailing = last;
    } else if (seg == "..") {
      if (!out.empty()) out.pop_back();
      trailing = last;
    } else {
      out.push_back(seg);
      trailing = false;
    }
    i = next + 1;
  }
  std::string result = absolute ? "/" : "";
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k) result += '/';
    result += out[k];
  }
  if (trailing && !result.ends_with('/')) result += '/';
  return result;
}

std::string merge(const Url& base, std::string_view ref_path) {
  auto slash = base.path.rfind('/');
  return base.path.substr(0, slash + 1) + std::string(ref_path);
}

bool parse_authority(std::string_view authority, Url& url) {
  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
  std::string_view host = authority;
  std::string_view port;
  if (authority.starts_with('[')) {
    auto close = authority.find(']');
    if (close == std::string_view::npos) return false;
    host = authority.substr(0, close + 1);
    if (close + 1 < authority.size()) {
      if (authority[close + 1] != ':') return false;
      port = authority.substr(close + 2);
    }
  } else if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
    host = authority.substr(0, colon);
    port = authority.substr(colon + 1);
  }
  if (host.empty()) return false;
  url.host = lower(host);
  url.port = 0;
  if (!port.empty()) {
    if (port.size() > 5 || !std::all_of(port.begin(), port.end(), ::isdigit)) return false;
    int p = std::stoi(std::string(port));
    if (p <= 0 || p > 65535) return false;
    if (p != (url.scheme == "https" ? 443 : 80)) url.port = p;
  }
  return true;
}

}  // namespace

std::string Url::authority() const {
  return port ? host + ":" + std::to_string(port) : host;
}

std::string Url::target() const { return query.empty() ? path : path + "?" + query; }

std::string Url::str() const { return scheme + "://" + authority() + target(); }

std::optional<Url> Url::parse(std::string_view absolute) {
  Reference r = split(trim(absolute));
  if (!r.scheme || (*r.scheme != "http" && *r.scheme != "https") || !r.authority) return std::nullopt;
  Url url;
  url.scheme = *r.scheme;
  if (!parse_authority(*r.authority, url)) return std::nullopt;
  url.path = remove_dot_segments(collapse_slashes(r.path.empty() ? "/" : r.path));
  if (url.path.empty()) url.path = "/";
  url.query = r.query.value_or("");
  return url;
}

std::optional<std::string> normalize_url(std::string_view base_str, std::string_view href) {
  auto base = Url::parse(base_str);
  if (!base) return std::nullopt;
  href = trim(href);
  Reference ref = split(href);
  if (href.empty() || href.starts_with('#')) return base->str();

  Url target;
  if (ref.scheme) {
    if (*ref.scheme != "http" && *ref.scheme != "https") return std::nullopt;
    if (!ref.authority) {
      // "http:path" relative form; only meaningful with the base's scheme.
      if (*ref.scheme != base->scheme) return std::nullopt;
      ref.scheme.reset();
    } else {
      auto parsed = Url::parse(href);
      if (!parsed) return std::nullopt;
      return parsed->str();
    }
  }
  target.scheme = base->scheme;
  if (ref.authority) {
    if (!parse_authority(*ref.authority, target)) return std::nullopt;
    target.path = ref.path.empty() ? "/" : ref.path;
    target.query = ref.query.value_or("");
  } else {
    target.host = base->host;
    target.port = base->port;
    if (ref.path.empty()) {
      target.path = base->path;
      target.query = ref.query ? *ref.query : base->query;
    } else {
      target.path = ref.path.starts_with('/') ? ref.path : merge(*base, ref.path);
      target.query = ref.query.value_or("");
    }
  }
  target.path = remove_dot_segments(collapse_slashes(target.path));
  if (target.path.empty()) target.path = "/";
  return target.str();
}

}  // namespace anchorlight
