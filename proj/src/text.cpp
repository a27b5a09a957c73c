#include "anchorlight/text.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "anchorlight/error.hpp"

namespace anchorlight::text {

// Generated from data/stopwords.txt at configure time.
extern const char* const kBundledStopList;

namespace {

struct CodePoint {
  char32_t value;
  std::size_t length;  // bytes consumed; 1 for invalid sequences
};

CodePoint decode(std::string_view s, std::size_t i) {
  auto c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) return {c, 1};
  int extra = c >= 0xF0 ? 3 : c >= 0xE0 ? 2 : c >= 0xC0 ? 1 : -1;
  if (extra < 0 || i + extra >= s.size()) return {0xFFFD, 1};
  char32_t cp = c & (0x3F >> extra);
  for (int k = 1; k <= extra; ++k) {
    auto cc = static_cast<unsigned char>(s[i + k]);
    if ((cc & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (cc & 0x3F);
  }
  return {cp, static_cast<std::size_t>(extra) + 1};
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_word_char(char32_t cp) {
  if (cp < 0x80) return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  if (cp == 0xFFFD) return false;
  if (cp >= 0x80 && cp <= 0xBF) return false;       // Latin-1 punctuation, nbsp
  if (cp == 0xD7 || cp == 0xF7) return false;       // multiplication, division
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;   // general punctuation, symbols, arrows
  if (cp >= 0x3000 && cp <= 0x303F) return false;   // CJK punctuation
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  return true;
}

// Simple one-to-one case folding for the common alphabets.
char32_t fold(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x100 && cp <= 0x137 && cp % 2 == 0) return cp + 1;
  if (cp >= 0x139 && cp <= 0x148 && cp % 2 == 1) return cp + 1;
  if (cp >= 0x14A && cp <= 0x177 && cp % 2 == 0) return cp + 1;
  if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

}  // namespace

TokenStream tokenize(std::string_view text, Source source) {
  TokenStream ts;
  ts.source = source;
  std::string current;
  bool truncated = false;
  auto flush = [&] {
    if (!current.empty()) ts.tokens.push_back(std::move(current));
    current.clear();
    truncated = false;
  };
  for (std::size_t i = 0; i < text.size();) {
    CodePoint cp = decode(text, i);
    i += cp.length;
    if (!is_word_char(cp.value)) {
      flush();
      continue;
    }
    if (truncated) continue;
    std::string piece;
    encode(fold(cp.value), piece);
    if (current.size() + piece.size() > kMaxTokenLength) {
      truncated = true;
      continue;
    }
    current += piece;
  }
  flush();
  return ts;
}

StopList::StopList(std::unordered_set<std::string> terms, std::string version)
    : terms_(std::move(terms)), version_(std::move(version)) {}

StopList StopList::parse(std::string_view contents) {
  std::unordered_set<std::string> terms;
  std::string version;
  std::istringstream in{std::string(contents)};
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string_view entry(line.data() + first, last - first + 1);
    if (entry.front() == '#') {
      constexpr std::string_view key = "# version:";
      if (entry.starts_with(key)) {
        auto v = entry.substr(key.size());
        v.remove_prefix(std::min(v.find_first_not_of(' '), v.size()));
        version = v;
      }
      continue;
    }
    for (auto& tok : tokenize(entry).tokens) terms.insert(std::move(tok));
  }
  return StopList(std::move(terms), std::move(version));
}

StopList StopList::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read stop list " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const StopList& StopList::standard() {
  static const StopList list = parse(kBundledStopList);
  return list;
}

TokenStream filter_stopwords(TokenStream ts, const StopList& stops) {
  std::erase_if(ts.tokens, [&](const std::string& t) { return stops.contains(t); });
  return ts;
}

TokenStream normalize(std::string_view text, bool stemming, const StopList& stops, Source source) {
  TokenStream ts = filter_stopwords(tokenize(text, source), stops);
  if (stemming) {
    for (auto& t : ts.tokens)
      if (is_ascii(t)) t = stem(t);
  }
  return ts;
}

}  // namespace anchorlight::text
