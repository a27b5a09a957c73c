#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anchorlight/store.hpp"
#include "anchorlight/text.hpp"

namespace anchorlight::query {

enum class Scorer {
  Frequency,
  Location,
  Distance,
  Bm25,
  InboundCount,
  LinkText,
  PageRank,
  Authority,
  MyAuthority,
  Length,
  Anchor,
};

inline constexpr std::array<Scorer, 11> kScorers = {
    Scorer::Frequency,    Scorer::Location, Scorer::Distance,  Scorer::Bm25,
    Scorer::InboundCount, Scorer::LinkText, Scorer::PageRank,  Scorer::Authority,
    Scorer::MyAuthority,  Scorer::Length,   Scorer::Anchor};

std::string_view name(Scorer s);
/// Accepts the canonical name or the same name with a "score" suffix
/// ("anchorscore", "bm25score").
std::optional<Scorer> parse_scorer(std::string_view text);
/// Precomputable from the index alone; length counts as query-independent.
bool query_independent(Scorer s);
bool small_is_better(Scorer s);

enum class Mode { QueryDependent, QueryIndependentOnly };
std::string_view to_string(Mode m);
/// "qd" or "qi" (also "qi-only"); nullopt otherwise.
std::optional<Mode> parse_mode(std::string_view text);

struct ScorerWeights {
  std::map<Scorer, double> weights;
  int anchor_scheme = 4;
  double anchor_lambda = 0.5;

  double weight(Scorer s) const {
    auto it = weights.find(s);
    return it == weights.end() ? 0.0 : it->second;
  }
  /// Throws InvalidWeight (negative, non-finite or all zero) or InvalidScheme.
  void validate() const;
};

struct Preset {
  std::string name;
  std::map<Scorer, double> weights;
};

/// Named weight presets; the first is the default.
const std::vector<Preset>& presets();
const Preset* find_preset(std::string_view name);

struct Query {
  std::string raw;
  std::vector<std::string> terms;  // normalized, in query order
  std::vector<WordId> wordids;     // distinct terms present in wordlist
};

/// Runs the query through the same pipeline the index was built with.
Query parse_query(const IndexStore& store, std::string_view raw,
                  const text::StopList& stops = text::StopList::standard());

struct CandidateSet {
  std::vector<PageId> content_matches;  // contain every query term
  std::vector<PageId> anchor_matches;   // linked by an anchor with any query term
  /// For each content match, the locations of each query wordid (query order).
  std::map<PageId, std::vector<std::vector<std::int64_t>>> rows;

  /// Sorted union of both match lists.
  std::vector<PageId> universe() const;
};

/// Throws EmptyQuery when no terms survive normalization.
CandidateSet build_candidates(const IndexStore& store, const Query& q);

using ScoreMap = std::map<PageId, double>;

enum class ContentKind { Frequency, Location, Distance };
/// Raw content scores over the universe; pages without rows get the worst
/// value seen among pages with rows.
ScoreMap score_content(const CandidateSet& cs, ContentKind kind);

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};
/// Okapi BM25 with IDF = ln(1 + (N - n + 0.5) / (n + 0.5)). Throws NeedsAnalysis
/// when pagelength is empty.
ScoreMap score_bm25(const IndexStore& store, const Query& q, const CandidateSet& cs,
                    const Bm25Params& params = {});

enum class LinkKind { InboundCount, LinkText, PageRank, Authority, MyAuthority, Length };
ScoreMap score_link(const IndexStore& store, const Query& q, const CandidateSet& cs, LinkKind kind);

/// Anchor-text scores over the universe:
///   1  total occurrences of query terms in the page's inbound anchor bag
///   2  number of inbound links whose anchor has at least one query term
///   3  scheme 1 divided by the anchor bag size (0 for an empty bag)
///   4  sum over terms of ln((1-lambda) P(t|page anchors) + lambda P(t|all anchors))
/// Throws InvalidScheme outside 1..4.
ScoreMap score_anchor(const IndexStore& store, const Query& q, const CandidateSet& cs, int scheme,
                      double lambda = 0.5);

inline constexpr double kNormEpsilon = 1e-9;
/// Maps raw scores into [0,1]. Big-is-better: v / max; small-is-better: min / v,
/// with denominators (and a zero minimum) floored at kNormEpsilon.
ScoreMap normalize_scores(const ScoreMap& raw, bool small_is_better);

struct RankedResult {
  PageId urlid;
  std::string url;
  double combined = 0.0;
  std::map<Scorer, double> breakdown;  // normalized, evaluated scorers only
};

struct QueryResponse {
  std::string query;
  Mode mode = Mode::QueryDependent;
  ScorerWeights weights;
  std::vector<RankedResult> results;

  /// {query, mode, scheme, weights, results:[{urlid, url, combined, breakdown}]}
  std::string to_json() const;
};

/// Scorers evaluated for the given weights and mode, in kScorers order.
std::vector<Scorer> active_scorers(const ScorerWeights& weights, Mode mode);

/// Throws NeedsAnalysis naming the first missing score table.
void require_analysis(const IndexStore& store, const std::vector<Scorer>& scorers);

/// normalize -> candidates -> every weighted scorer -> normalize each ->
/// weighted sum -> sort (combined desc, urlid asc) -> first `limit`.
QueryResponse run_query(const IndexStore& store, std::string_view raw, const ScorerWeights& weights,
                        Mode mode = Mode::QueryDependent, std::size_t limit = 10);

}  // namespace anchorlight::query
