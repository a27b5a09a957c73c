#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace anchorlight::text {

enum class Source { Content, Anchor, Query };

struct TokenStream {
  std::vector<std::string> tokens;
  Source source = Source::Content;
};

inline constexpr std::size_t kMaxTokenLength = 64;

/// Splits on runs of non-alphanumeric characters and lowercases. Multi-byte
/// UTF-8 sequences count as letters; tokens are truncated to kMaxTokenLength bytes.
TokenStream tokenize(std::string_view text, Source source = Source::Content);

class StopList {
 public:
  StopList() = default;
  StopList(std::unordered_set<std::string> terms, std::string version);

  /// Bundled English list ("computer" excluded).
  static const StopList& standard();
  /// Newline-delimited; `#` starts a comment, `# version: X` sets the version.
  static StopList load(const std::filesystem::path& path);
  static StopList parse(std::string_view contents);

  bool contains(std::string_view term) const { return terms_.contains(std::string(term)); }
  const std::unordered_set<std::string>& terms() const { return terms_; }
  const std::string& version() const { return version_; }

 private:
  std::unordered_set<std::string> terms_;
  std::string version_;
};

TokenStream filter_stopwords(TokenStream ts, const StopList& stops);

/// Porter stemmer (the reference C implementation's behaviour, including its
/// "logi" and "bli" step-2 departures). Input is expected lowercase.
std::string stem(std::string_view term);

/// tokenize -> filter_stopwords -> stem. Identical for content, anchors and
/// queries so that index and query terms agree.
TokenStream normalize(std::string_view text, bool stemming, const StopList& stops,
                      Source source = Source::Content);

}  // namespace anchorlight::text
