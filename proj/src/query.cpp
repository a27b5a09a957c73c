#include "anchorlight/query.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace anchorlight::query {

std::string_view name(Scorer s) {
  switch (s) {
    case Scorer::Frequency: return "frequency";
    case Scorer::Location: return "location";
    case Scorer::Distance: return "distance";
    case Scorer::Bm25: return "bm25";
    case Scorer::InboundCount: return "inboundcount";
    case Scorer::LinkText: return "linktext";
    case Scorer::PageRank: return "pagerank";
    case Scorer::Authority: return "authority";
    case Scorer::MyAuthority: return "myauthority";
    case Scorer::Length: return "length";
    case Scorer::Anchor: return "anchor";
  }
  return "";
}

std::optional<Scorer> parse_scorer(std::string_view text) {
  if (text.ends_with("score")) text.remove_suffix(5);
  for (Scorer s : kScorers)
    if (name(s) == text) return s;
  return std::nullopt;
}

bool query_independent(Scorer s) {
  switch (s) {
    case Scorer::InboundCount:
    case Scorer::PageRank:
    case Scorer::Authority:
    case Scorer::MyAuthority:
    case Scorer::Length:
      return true;
    default:
      return false;
  }
}

bool small_is_better(Scorer s) { return s == Scorer::Location || s == Scorer::Distance; }

std::string_view to_string(Mode m) { return m == Mode::QueryDependent ? "qd" : "qi"; }

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "qd") return Mode::QueryDependent;
  if (text == "qi" || text == "qi-only") return Mode::QueryIndependentOnly;
  return std::nullopt;
}

void ScorerWeights::validate() const {
  if (anchor_scheme < 1 || anchor_scheme > 4)
    throw Error(ErrorCode::InvalidScheme, "anchor scheme must be 1..4, got " + std::to_string(anchor_scheme));
  if (!(anchor_lambda > 0.0 && anchor_lambda < 1.0))
    throw Error(ErrorCode::InvalidWeight, "anchor lambda must lie in (0,1)");
  bool any = false;
  for (const auto& [scorer, w] : weights) {
    if (!std::isfinite(w) || w < 0.0)
      throw Error(ErrorCode::InvalidWeight, "weight for " + std::string(name(scorer)) + " must be >= 0");
    any = any || w > 0.0;
  }
  if (!any) throw Error(ErrorCode::InvalidWeight, "at least one scorer weight must be positive");
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = {
      {"descriptive-anchors",
       {{Scorer::Anchor, 2.0},
        {Scorer::LinkText, 1.5},
        {Scorer::Location, 1.0},
        {Scorer::Frequency, 0.2},
        {Scorer::Bm25, 0.2}}},
      {"content", {{Scorer::Bm25, 1.0}, {Scorer::Location, 0.5}, {Scorer::Distance, 0.5}}},
      {"link-structure", {{Scorer::PageRank, 1.0}, {Scorer::Authority, 1.0}, {Scorer::InboundCount, 0.5}}},
  };
  return list;
}

const Preset* find_preset(std::string_view preset_name) {
  for (const auto& p : presets())
    if (p.name == preset_name) return &p;
  return nullptr;
}

Query parse_query(const IndexStore& store, std::string_view raw, const text::StopList& stops) {
  Query q;
  q.raw = std::string(raw);
  q.terms = text::normalize(raw, store.meta().stemming_enabled, stops, text::Source::Query).tokens;
  std::set<std::int64_t> seen;
  for (const auto& term : q.terms)
    if (auto id = store.find_word(term); id && seen.insert(id->value).second) q.wordids.push_back(*id);
  return q;
}

std::vector<PageId> CandidateSet::universe() const {
  std::vector<PageId> all = content_matches;
  all.insert(all.end(), anchor_matches.begin(), anchor_matches.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

CandidateSet build_candidates(const IndexStore& store, const Query& q) {
  if (q.terms.empty()) throw Error(ErrorCode::EmptyQuery, "query has no searchable terms");
  CandidateSet cs;
  std::set<std::string> distinct_terms(q.terms.begin(), q.terms.end());
  bool all_present = q.wordids.size() == distinct_terms.size();

  if (all_present) {
    // page -> per-term location lists
    std::map<PageId, std::vector<std::vector<std::int64_t>>> rows;
    for (std::size_t t = 0; t < q.wordids.size(); ++t) {
      for (const auto& p : store.postings_for_word(q.wordids[t])) {
        auto& r = rows[p.urlid];
        if (r.size() < q.wordids.size()) r.resize(q.wordids.size());
        r[t].push_back(p.location);
      }
    }
    for (auto& [page, r] : rows) {
      bool complete = std::all_of(r.begin(), r.end(), [](const auto& locs) { return !locs.empty(); });
      if (!complete) continue;
      cs.content_matches.push_back(page);
      cs.rows.emplace(page, std::move(r));
    }
  }

  std::set<PageId> anchored;
  for (WordId w : q.wordids)
    for (const auto& hit : store.anchor_hits(w)) anchored.insert(hit.toid);
  cs.anchor_matches.assign(anchored.begin(), anchored.end());
  return cs;
}

namespace {

// Minimal sum of |gap| between consecutive terms over all location choices.
double min_alignment_distance(const std::vector<std::vector<std::int64_t>>& locs) {
  std::vector<double> best(locs[0].size(), 0.0);
  for (std::size_t t = 1; t < locs.size(); ++t) {
    std::vector<double> next(locs[t].size(), std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < locs[t].size(); ++j)
      for (std::size_t i = 0; i < locs[t - 1].size(); ++i)
        next[j] = std::min(next[j], best[i] + static_cast<double>(std::llabs(locs[t][j] - locs[t - 1][i])));
    best = std::move(next);
  }
  return *std::min_element(best.begin(), best.end());
}

void fill_missing(ScoreMap& scores, const std::vector<PageId>& universe, bool small_better) {
  double worst = 0.0;
  bool have = false;
  for (const auto& [page, v] : scores) {
    worst = have ? (small_better ? std::max(worst, v) : std::min(worst, v)) : v;
    have = true;
  }
  if (!have) worst = small_better ? 1.0 : 0.0;
  for (PageId p : universe) scores.try_emplace(p, worst);
}

ScoreTable table_for(Scorer s) {
  switch (s) {
    case Scorer::PageRank:
    case Scorer::LinkText:
      return ScoreTable::PageRank;
    case Scorer::Authority:
      return ScoreTable::AuthHits;
    case Scorer::MyAuthority:
      return ScoreTable::AuthMyHits;
    default:
      return ScoreTable::PageLength;
  }
}

bool needs_table(Scorer s) {
  return s == Scorer::PageRank || s == Scorer::LinkText || s == Scorer::Authority ||
         s == Scorer::MyAuthority || s == Scorer::Length || s == Scorer::Bm25;
}

void require_table(const IndexStore& store, ScoreTable table) {
  if (store.row_count(table_name(table)) == 0)
    throw Error(ErrorCode::NeedsAnalysis,
                "score table '" + std::string(table_name(table)) + "' is empty; run analyze first");
}

}  // namespace

ScoreMap score_content(const CandidateSet& cs, ContentKind kind) {
  ScoreMap scores;
  for (const auto& [page, locs] : cs.rows) {
    switch (kind) {
      case ContentKind::Frequency: {
        double n = 0;
        for (const auto& l : locs) n += static_cast<double>(l.size());
        scores[page] = n;
        break;
      }
      case ContentKind::Location: {
        double sum = 0;
        for (const auto& l : locs) sum += static_cast<double>(*std::min_element(l.begin(), l.end()));
        scores[page] = sum;
        break;
      }
      case ContentKind::Distance:
        scores[page] = locs.size() <= 1 ? 1.0 : min_alignment_distance(locs);
        break;
    }
  }
  if (kind == ContentKind::Distance && !cs.rows.empty() && cs.rows.begin()->second.size() <= 1) {
    for (PageId p : cs.universe()) scores[p] = 1.0;
    return scores;
  }
  fill_missing(scores, cs.universe(), kind != ContentKind::Frequency);
  return scores;
}

ScoreMap score_bm25(const IndexStore& store, const Query& q, const CandidateSet& cs, const Bm25Params& params) {
  require_table(store, ScoreTable::PageLength);
  auto lengths = store.all_scores(ScoreTable::PageLength);
  double avgdl = 0.0;
  for (const auto& [page, len] : lengths) avgdl += len;
  avgdl /= static_cast<double>(lengths.size());
  const double n_docs = static_cast<double>(store.indexed_page_count());

  auto universe = cs.universe();
  std::set<PageId> wanted(universe.begin(), universe.end());
  ScoreMap scores;
  for (PageId p : universe) scores[p] = 0.0;
  for (WordId w : q.wordids) {
    auto postings = store.postings_for_word(w);
    std::map<PageId, double> tf;
    for (const auto& p : postings) tf[p.urlid] += 1.0;
    const double df = static_cast<double>(tf.size());
    const double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
    for (const auto& [page, f] : tf) {
      if (!wanted.contains(page)) continue;
      auto it = lengths.find(page);
      double dl = it == lengths.end() ? 0.0 : it->second;
      double norm = avgdl > 0.0 ? dl / avgdl : 0.0;
      scores[page] += idf * (f * (params.k1 + 1.0)) / (f + params.k1 * (1.0 - params.b + params.b * norm));
    }
  }
  return scores;
}

ScoreMap score_link(const IndexStore& store, const Query& q, const CandidateSet& cs, LinkKind kind) {
  auto universe = cs.universe();
  ScoreMap scores;
  switch (kind) {
    case LinkKind::InboundCount:
      for (PageId p : universe) scores[p] = static_cast<double>(store.inbound_links(p).size());
      return scores;
    case LinkKind::LinkText: {
      require_table(store, ScoreTable::PageRank);
      std::set<PageId> wanted(universe.begin(), universe.end());
      std::map<std::int64_t, LinkRecord> matching;  // by linkid
      for (WordId w : q.wordids)
        for (const auto& hit : store.anchor_hits(w))
          if (wanted.contains(hit.toid)) matching.emplace(hit.linkid.value, LinkRecord{hit.linkid, hit.fromid, hit.toid});
      std::vector<PageId> sources;
      for (const auto& [id, link] : matching) sources.push_back(link.fromid);
      auto ranks = store.get_scores(ScoreTable::PageRank, sources);
      for (PageId p : universe) scores[p] = 0.0;
      for (const auto& [id, link] : matching) scores[link.toid] += ranks[link.fromid];
      return scores;
    }
    case LinkKind::PageRank:
    case LinkKind::Authority:
    case LinkKind::MyAuthority:
    case LinkKind::Length: {
      ScoreTable table = kind == LinkKind::PageRank    ? ScoreTable::PageRank
                         : kind == LinkKind::Authority ? ScoreTable::AuthHits
                         : kind == LinkKind::MyAuthority ? ScoreTable::AuthMyHits
                                                         : ScoreTable::PageLength;
      require_table(store, table);
      auto values = store.get_scores(table, universe);
      for (PageId p : universe) scores[p] = values[p];
      return scores;
    }
  }
  return scores;
}

ScoreMap score_anchor(const IndexStore& store, const Query& q, const CandidateSet& cs, int scheme, double lambda) {
  if (scheme < 1 || scheme > 4)
    throw Error(ErrorCode::InvalidScheme, "anchor scheme must be 1..4, got " + std::to_string(scheme));
  std::unordered_set<std::int64_t> query_words;
  for (WordId w : q.wordids) query_words.insert(w.value);

  std::map<std::int64_t, double> collection_counts;
  double collection_size = 0.0;
  if (scheme == 4) {
    collection_size = static_cast<double>(store.anchor_term_count());
    for (WordId w : q.wordids) collection_counts[w.value] = static_cast<double>(store.anchor_term_count(w));
  }

  ScoreMap scores;
  for (PageId p : cs.universe()) {
    auto bag = store.anchor_terms_to(p);
    std::map<std::int64_t, double> counts;
    std::set<std::int64_t> matching_links;
    for (const auto& term : bag) {
      if (!query_words.contains(term.wordid.value)) continue;
      counts[term.wordid.value] += 1.0;
      matching_links.insert(term.linkid.value);
    }
    double total = 0.0;
    for (const auto& [w, c] : counts) total += c;
    const double bag_size = static_cast<double>(bag.size());
    switch (scheme) {
      case 1:
        scores[p] = total;
        break;
      case 2:
        scores[p] = static_cast<double>(matching_links.size());
        break;
      case 3:
        scores[p] = bag_size > 0.0 ? total / bag_size : 0.0;
        break;
      case 4: {
        double logp = 0.0;
        for (WordId w : q.wordids) {
          double background = collection_counts[w.value];
          if (background <= 0.0) continue;  // term never used in an anchor
          double local = bag_size > 0.0 ? counts[w.value] / bag_size : 0.0;
          logp += std::log((1.0 - lambda) * local + lambda * background / collection_size);
        }
        scores[p] = logp;
        break;
      }
    }
  }
  return scores;
}

ScoreMap normalize_scores(const ScoreMap& raw, bool small_better) {
  ScoreMap out;
  if (raw.empty()) return out;
  if (small_better) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& [p, v] : raw) lo = std::min(lo, v);
    lo = std::max(lo, kNormEpsilon);
    for (const auto& [p, v] : raw) out[p] = lo / std::max(v, kNormEpsilon);
  } else {
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& [p, v] : raw) hi = std::max(hi, v);
    hi = std::max(hi, kNormEpsilon);
    for (const auto& [p, v] : raw) out[p] = std::clamp(v / hi, 0.0, 1.0);
  }
  return out;
}

std::vector<Scorer> active_scorers(const ScorerWeights& weights, Mode mode) {
  std::vector<Scorer> out;
  for (Scorer s : kScorers) {
    if (weights.weight(s) <= 0.0) continue;
    if (mode == Mode::QueryIndependentOnly && !query_independent(s)) continue;
    out.push_back(s);
  }
  return out;
}

void require_analysis(const IndexStore& store, const std::vector<Scorer>& scorers) {
  for (Scorer s : scorers)
    if (needs_table(s)) require_table(store, table_for(s));
}

namespace {

ScoreMap raw_scores(const IndexStore& store, const Query& q, const CandidateSet& cs, Scorer s,
                    const ScorerWeights& weights) {
  switch (s) {
    case Scorer::Frequency: return score_content(cs, ContentKind::Frequency);
    case Scorer::Location: return score_content(cs, ContentKind::Location);
    case Scorer::Distance: return score_content(cs, ContentKind::Distance);
    case Scorer::Bm25: return score_bm25(store, q, cs);
    case Scorer::InboundCount: return score_link(store, q, cs, LinkKind::InboundCount);
    case Scorer::LinkText: return score_link(store, q, cs, LinkKind::LinkText);
    case Scorer::PageRank: return score_link(store, q, cs, LinkKind::PageRank);
    case Scorer::Authority: return score_link(store, q, cs, LinkKind::Authority);
    case Scorer::MyAuthority: return score_link(store, q, cs, LinkKind::MyAuthority);
    case Scorer::Length: return score_link(store, q, cs, LinkKind::Length);
    case Scorer::Anchor: return score_anchor(store, q, cs, weights.anchor_scheme, weights.anchor_lambda);
  }
  return {};
}

// The anchor model yields log-likelihoods; compare pages by likelihood ratio
// against the best page instead.
ScoreMap likelihood_ratio(const ScoreMap& log_scores) {
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& [p, v] : log_scores) hi = std::max(hi, v);
  ScoreMap out;
  for (const auto& [p, v] : log_scores) out[p] = std::exp(v - hi);
  return out;
}

}  // namespace

QueryResponse run_query(const IndexStore& store, std::string_view raw, const ScorerWeights& weights, Mode mode,
                        std::size_t limit) {
  weights.validate();
  IndexStore::Snapshot snapshot(store);
  auto scorers = active_scorers(weights, mode);
  require_analysis(store, scorers);
  Query q = parse_query(store, raw);
  CandidateSet cs = build_candidates(store, q);
  auto universe = cs.universe();

  std::map<Scorer, ScoreMap> normalized;
  for (Scorer s : scorers) {
    ScoreMap r = raw_scores(store, q, cs, s, weights);
    if (s == Scorer::Anchor && weights.anchor_scheme == 4) r = likelihood_ratio(r);
    normalized[s] = normalize_scores(r, small_is_better(s));
  }

  std::vector<RankedResult> results;
  results.reserve(universe.size());
  for (PageId p : universe) {
    RankedResult r;
    r.urlid = p;
    for (Scorer s : scorers) {
      double v = normalized[s].at(p);
      r.breakdown[s] = v;
      r.combined += weights.weight(s) * v;
    }
    results.push_back(std::move(r));
  }
  std::sort(results.begin(), results.end(), [](const RankedResult& a, const RankedResult& b) {
    if (a.combined != b.combined) return a.combined > b.combined;
    return a.urlid < b.urlid;
  });
  if (results.size() > limit) results.resize(limit);
  for (auto& r : results) r.url = store.url_of(r.urlid);

  QueryResponse response;
  response.query = std::string(raw);
  response.mode = mode;
  response.weights = weights;
  response.results = std::move(results);
  return response;
}

std::string QueryResponse::to_json() const {
  nlohmann::ordered_json w = nlohmann::ordered_json::object();
  for (Scorer s : kScorers)
    if (weights.weight(s) > 0.0) w[std::string(name(s))] = weights.weight(s);
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json breakdown = nlohmann::ordered_json::object();
    for (const auto& [s, v] : r.breakdown) breakdown[std::string(name(s))] = v;
    list.push_back({{"urlid", r.urlid.value}, {"url", r.url}, {"combined", r.combined}, {"breakdown", breakdown}});
  }
  nlohmann::ordered_json j;
  j["query"] = query;
  j["mode"] = to_string(mode);
  j["scheme"] = weights.anchor_scheme;
  j["weights"] = std::move(w);
  j["results"] = std::move(list);
  return j.dump();
}

}  // namespace anchorlight::query
