#include "anchorlight/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "anchorlight/url.hpp"

namespace anchorlight::html {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool iequals_prefix(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) != prefix[i]) return false;
  return true;
}

std::size_t ifind(std::string_view s, std::string_view needle, std::size_t from) {
  for (std::size_t i = from; i + needle.size() <= s.size(); ++i)
    if (iequals_prefix(s, i, needle)) return i;
  return std::string_view::npos;
}

void append_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x110000) {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    int extra;
    char32_t min;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      min = 0x10000;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    char32_t cp = c & (0x3F >> extra);
    for (int k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

// windows-1252 0x80..0x9F; zero marks an undefined byte.
constexpr std::array<char32_t, 32> kCp1252High = {
    0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021, 0x02C6, 0x2030, 0x0160,
    0x2039, 0x0152, 0,      0x017D, 0,      0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022,
    0x2013, 0x2014, 0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Entity {
  std::string_view name;
  char32_t cp;
};

constexpr std::array<Entity, 22> kEntities = {{
    {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},
    {"apos", '\''},    {"nbsp", 0xA0},    {"copy", 0xA9},    {"reg", 0xAE},
    {"mdash", 0x2014}, {"ndash", 0x2013}, {"hellip", 0x2026}, {"lsquo", 0x2018},
    {"rsquo", 0x2019}, {"ldquo", 0x201C}, {"rdquo", 0x201D}, {"middot", 0xB7},
    {"laquo", 0xAB},   {"raquo", 0xBB},   {"eacute", 0xE9},  {"uuml", 0xFC},
    {"ouml", 0xF6},    {"auml", 0xE4},
}};

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out += '&';
      continue;
    }
    std::string_view name = s.substr(i + 1, semi - i - 1);
    char32_t cp = 0;
    if (name.size() > 1 && name[0] == '#') {
      bool hex = name[1] == 'x' || name[1] == 'X';
      std::string digits(name.substr(hex ? 2 : 1));
      if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [hex](unsigned char c) {
            return hex ? std::isxdigit(c) : std::isdigit(c);
          }) && digits.size() <= 7) {
        cp = static_cast<char32_t>(std::stoul(digits, nullptr, hex ? 16 : 10));
      }
    } else {
      for (const auto& e : kEntities)
        if (e.name == name) cp = e.cp;
    }
    if (cp == 0 || cp > 0x10FFFF) {
      out += '&';
      continue;
    }
    append_utf8(cp, out);
    i = semi;
  }
  return out;
}

void append_text(std::string& out, std::string_view piece) {
  for (char c : piece) {
    bool ws = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (ws) {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else {
      out += c;
    }
  }
}

void break_text(std::string& out) {
  if (!out.empty() && out.back() != ' ') out += ' ';
}

std::string finish(std::string s) {
  auto t = trim(s);
  return std::string(t);
}

struct Tag {
  std::string name;
  bool closing = false;
  std::vector<std::pair<std::string, std::string>> attrs;

  std::optional<std::string> attr(std::string_view key) const {
    for (const auto& [k, v] : attrs)
      if (k == key) return v;
    return std::nullopt;
  }
};

// Parses the tag starting at s[pos] == '<'; returns the index just past '>'.
std::size_t parse_tag(std::string_view s, std::size_t pos, Tag& tag) {
  std::size_t i = pos + 1;
  if (i < s.size() && s[i] == '/') {
    tag.closing = true;
    ++i;
  }
  std::size_t start = i;
  while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '>' && s[i] != '/')
    ++i;
  tag.name = lower(s.substr(start, i - start));
  while (i < s.size() && s[i] != '>') {
    while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
    if (i >= s.size() || s[i] == '>') break;
    std::size_t ks = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '=' &&
           s[i] != '>' && s[i] != '/')
      ++i;
    std::string key = lower(s.substr(ks, i - ks));
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::string value;
    if (i < s.size() && s[i] == '=') {
      ++i;
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
        char q = s[i++];
        auto end = s.find(q, i);
        if (end == std::string_view::npos) end = s.size();
        value = decode_entities(s.substr(i, end - i));
        i = std::min(end + 1, s.size());
      } else {
        std::size_t vs = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '>') ++i;
        value = decode_entities(s.substr(vs, i - vs));
      }
    }
    if (!key.empty()) tag.attrs.emplace_back(std::move(key), std::move(value));
  }
  return std::min(i + 1, s.size());
}

bool is_block(std::string_view name) {
  static constexpr std::array<std::string_view, 34> kBlocks = {
      "p",  "div", "br",    "li",      "ul",     "ol",      "h1",     "h2",      "h3",
      "h4", "h5",  "h6",    "tr",      "td",     "th",      "table",  "section", "article",
      "header", "footer", "nav", "blockquote", "pre", "hr", "dd", "dt", "dl", "title",
      "body", "html", "head", "form", "option", "main"};
  return std::find(kBlocks.begin(), kBlocks.end(), name) != kBlocks.end();
}

}  // namespace

std::string charset_from_content_type(std::string_view content_type) {
  std::string ct = lower(content_type);
  auto pos = ct.find("charset=");
  if (pos == std::string::npos) return {};
  std::string_view v = std::string_view(ct).substr(pos + 8);
  auto end = v.find_first_of("; ");
  v = v.substr(0, end);
  if (!v.empty() && (v.front() == '"' || v.front() == '\'')) v.remove_prefix(1);
  if (!v.empty() && (v.back() == '"' || v.back() == '\'')) v.remove_suffix(1);
  return std::string(v);
}

std::string sniff_meta_charset(std::string_view bytes) {
  std::string_view head = bytes.substr(0, std::min<std::size_t>(bytes.size(), 2048));
  for (std::size_t pos = ifind(head, "<meta", 0); pos != std::string_view::npos;
       pos = ifind(head, "<meta", pos + 5)) {
    Tag tag;
    parse_tag(head, pos, tag);
    if (auto cs = tag.attr("charset")) return lower(trim(*cs));
    if (auto equiv = tag.attr("http-equiv"); equiv && lower(*equiv) == "content-type")
      if (auto content = tag.attr("content")) return charset_from_content_type(*content);
  }
  return {};
}

std::optional<std::string> decode(std::string_view bytes, std::string_view charset) {
  std::string cs = lower(charset);
  if (cs.empty() || cs == "utf-8" || cs == "utf8" || cs == "us-ascii" || cs == "ascii") {
    if (!valid_utf8(bytes)) return std::nullopt;
    std::string_view body = bytes;
    if (body.starts_with("\xEF\xBB\xBF")) body.remove_prefix(3);
    return std::string(body);
  }
  bool latin1 = cs == "iso-8859-1" || cs == "latin1" || cs == "latin-1" || cs == "iso8859-1";
  bool cp1252 = cs == "windows-1252" || cs == "cp1252";
  if (!latin1 && !cp1252) {
    if (valid_utf8(bytes)) return std::string(bytes);
    return std::nullopt;
  }
  std::string out;
  out.reserve(bytes.size());
  for (unsigned char c : bytes) {
    if (cp1252 && c >= 0x80 && c <= 0x9F) {
      char32_t cp = kCp1252High[c - 0x80];
      if (cp == 0) return std::nullopt;
      append_utf8(cp, out);
    } else {
      append_utf8(c, out);
    }
  }
  return out;
}

bool looks_like_html(std::string_view bytes) {
  std::string_view head = bytes.substr(0, std::min<std::size_t>(bytes.size(), 1024));
  for (std::string_view marker : {"<!doctype html", "<html", "<head", "<body", "<a ", "<p>", "<title"})
    if (ifind(head, marker, 0) != std::string_view::npos) return true;
  return false;
}

Page parse(std::string_view s, std::string_view base_url) {
  Page page;
  std::string base(base_url);
  std::optional<std::string> anchor_href;
  std::string anchor_text;

  auto close_anchor = [&] {
    if (!anchor_href) return;
    std::string_view href = trim(*anchor_href);
    if (!href.empty() && !href.starts_with('#')) {
      if (auto url = normalize_url(base, href))
        page.links.push_back({std::move(*url), finish(std::move(anchor_text))});
    }
    anchor_href.reset();
    anchor_text.clear();
  };

  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '<') {
      auto next = s.find('<', i);
      if (next == std::string_view::npos) next = s.size();
      std::string text = decode_entities(s.substr(i, next - i));
      append_text(page.text, text);
      if (anchor_href) append_text(anchor_text, text);
      i = next;
      continue;
    }
    if (s.substr(i).starts_with("<!--")) {
      auto end = s.find("-->", i + 4);
      i = end == std::string_view::npos ? s.size() : end + 3;
      continue;
    }
    if (i + 1 < s.size() && (s[i + 1] == '!' || s[i + 1] == '?')) {
      auto end = s.find('>', i);
      i = end == std::string_view::npos ? s.size() : end + 1;
      continue;
    }
    if (i + 1 >= s.size() ||
        !(std::isalpha(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '/')) {
      append_text(page.text, "<");
      if (anchor_href) append_text(anchor_text, "<");
      ++i;
      continue;
    }
    Tag tag;
    i = parse_tag(s, i, tag);
    if (!tag.closing && (tag.name == "script" || tag.name == "style" || tag.name == "noscript" ||
                         tag.name == "template")) {
      auto end = ifind(s, "</" + tag.name, i);
      if (end == std::string_view::npos) break;
      auto gt = s.find('>', end);
      i = gt == std::string_view::npos ? s.size() : gt + 1;
      break_text(page.text);
      continue;
    }
    if (tag.name == "a") {
      close_anchor();
      if (!tag.closing) {
        if (auto href = tag.attr("href")) {
          anchor_href = *href;
          anchor_text.clear();
        }
      }
      continue;
    }
    if (!tag.closing && tag.name == "base") {
      if (auto href = tag.attr("href"))
        if (auto resolved = normalize_url(base, *href)) base = *resolved;
      continue;
    }
    if (!tag.closing && tag.name == "img" && anchor_href) {
      if (auto alt = tag.attr("alt")) {
        break_text(anchor_text);
        append_text(anchor_text, *alt);
      }
      continue;
    }
    if (is_block(tag.name)) {
      break_text(page.text);
      if (anchor_href) break_text(anchor_text);
    }
  }
  close_anchor();
  page.text = finish(std::move(page.text));
  return page;
}

std::optional<Page> extract(std::string_view bytes, std::string_view base_url,
                            std::string_view charset) {
  std::string cs(charset);
  if (cs.empty()) cs = sniff_meta_charset(bytes);
  auto utf8 = decode(bytes, cs);
  if (!utf8) return std::nullopt;
  return parse(*utf8, base_url);
}

}  // namespace anchorlight::html
