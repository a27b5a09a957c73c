#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace anchorlight::html {

struct Link {
  std::string url;  // normalized, absolute
  std::string anchor_text;

  friend bool operator==(const Link&, const Link&) = default;
};

struct Page {
  std::string text;  // visible text, whitespace collapsed
  std::vector<Link> links;
};

/// Charset named in a Content-Type value or a <meta> tag, lowercased; empty if none.
std::string charset_from_content_type(std::string_view content_type);
std::string sniff_meta_charset(std::string_view bytes);

/// Converts the body to UTF-8. nullopt when the bytes are not valid in the
/// declared (or default UTF-8) charset, or the charset is unsupported.
std::optional<std::string> decode(std::string_view bytes, std::string_view charset);

/// True when the leading bytes look like an HTML document.
bool looks_like_html(std::string_view bytes);

/// Visible text (script/style dropped, entities decoded) and anchors with
/// their visible text. Fragment-only and non-http(s) hrefs are dropped.
Page parse(std::string_view utf8, std::string_view base_url);

/// decode + parse; nullopt when the body cannot be decoded.
std::optional<Page> extract(std::string_view bytes, std::string_view base_url,
                            std::string_view charset = {});

}  // namespace anchorlight::html
