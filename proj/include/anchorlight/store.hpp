#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "anchorlight/error.hpp"

namespace anchorlight {

/// Row identity in one of the rowid-keyed tables. Ids are dense and start at 1.
template <typename Tag>
struct Id {
  std::int64_t value = 0;

  constexpr explicit operator bool() const noexcept { return value != 0; }
  friend constexpr auto operator<=>(Id, Id) = default;
};

using PageId = Id<struct PageTag>;
using WordId = Id<struct WordTag>;
using LinkId = Id<struct LinkTag>;

struct IdHash {
  template <typename Tag>
  std::size_t operator()(Id<Tag> id) const noexcept {
    return std::hash<std::int64_t>{}(id.value);
  }
};

struct Posting {
  PageId urlid;
  WordId wordid;
  std::int64_t location = 0;
};

struct LinkRecord {
  LinkId linkid;
  PageId fromid;
  PageId toid;
};

/// One anchor term attached to one link row, joined with the link's endpoints.
struct AnchorTerm {
  LinkId linkid;
  PageId fromid;
  PageId toid;
  WordId wordid;
};

enum class ScoreTable {
  PageLength,
  PageRank,
  AuthHits,
  HubHits,
  AuthMyHits,
  HubMyHits,
  MyPageRank,
};

inline constexpr std::array<ScoreTable, 7> kScoreTables = {
    ScoreTable::PageLength, ScoreTable::PageRank,  ScoreTable::AuthHits,
    ScoreTable::HubHits,    ScoreTable::AuthMyHits, ScoreTable::HubMyHits,
    ScoreTable::MyPageRank};

std::string_view table_name(ScoreTable table);
/// Throws UnknownScoreTable.
ScoreTable parse_score_table(std::string_view name);
/// auth_myhits, hub_myhits and mypagerank carry a third `constant` column.
bool has_constant_column(ScoreTable table);

struct IndexMeta {
  bool stemming_enabled = true;
  std::string stop_list_version;
  std::string created_at;
  int schema_version = 0;
};

struct OpenOptions {
  bool create_if_missing = false;
  bool read_only = false;
  /// Applied only when a new index file is created.
  bool stemming = true;
  std::string stop_list_version;
};

inline constexpr int kSchemaVersion = 1;

/// The 12 schema tables, in schema order.
inline constexpr std::array<std::string_view, 12> kSchemaTables = {
    "urllist",  "wordlist", "wordlocation", "link",        "linkwords",  "pagelength",
    "pagerank", "auth_hits", "hub_hits",    "auth_myhits", "hub_myhits", "mypagerank"};

/// Single-file embedded index. One handle per thread; any number of read-only
/// handles may coexist with one writer.
class IndexStore {
 public:
  static IndexStore open(const std::filesystem::path& path, const OpenOptions& options = {});

  IndexStore(IndexStore&&) noexcept;
  IndexStore& operator=(IndexStore&&) noexcept;
  ~IndexStore();

  const std::filesystem::path& path() const;
  bool read_only() const;
  IndexMeta meta() const;
  /// Throws StemmingLocked once any page has been indexed.
  void set_stemming(bool enabled);

  PageId get_or_insert_url(std::string_view url);
  std::optional<PageId> find_url(std::string_view url) const;
  std::string url_of(PageId id) const;
  bool is_indexed(PageId id) const;
  void mark_indexed(PageId id);

  /// Throws InvalidTerm for an empty term.
  WordId get_or_insert_word(std::string_view term);
  std::optional<WordId> find_word(std::string_view term) const;

  /// Throws DanglingReference when urlid or wordid do not exist.
  void add_posting(const Posting& posting);
  LinkId add_link(PageId from, PageId to);
  void add_link_word(WordId word, LinkId link);

  /// Secondary indexes on linkwords(wordid) and linkwords(linkid). Idempotent.
  void create_hot_indexes();
  bool has_hot_indexes() const;
  void drop_hot_indexes();
  /// Engine query plan for the wordid lookup against linkwords.
  std::string explain_linkwords_lookup() const;
  std::vector<LinkId> linkwords_by_word(WordId word) const;

  /// Upsert. The constant must be supplied iff the table has a constant column.
  void put_score(ScoreTable table, PageId page, double score,
                 std::optional<double> constant = std::nullopt);
  void put_score(std::string_view table, PageId page, double score,
                 std::optional<double> constant = std::nullopt);
  /// Pages absent from the table map to 0.0.
  std::unordered_map<PageId, double, IdHash> get_scores(ScoreTable table,
                                                        std::span<const PageId> pages) const;
  std::unordered_map<PageId, double, IdHash> get_scores(std::string_view table,
                                                        std::span<const PageId> pages) const;
  std::unordered_map<PageId, double, IdHash> all_scores(ScoreTable table) const;
  std::unordered_map<PageId, double, IdHash> all_constants(ScoreTable table) const;
  void clear_scores(ScoreTable table);

  std::int64_t row_count(std::string_view table) const;
  std::int64_t page_count() const;
  std::int64_t indexed_page_count() const;
  std::int64_t word_count() const;

  std::vector<PageId> pages() const;
  std::vector<PageId> indexed_pages() const;
  std::vector<LinkRecord> links() const;
  std::vector<Posting> postings_for_word(WordId word) const;
  std::vector<Posting> postings_for_page(PageId page) const;
  std::int64_t document_frequency(WordId word) const;
  std::int64_t posting_count(PageId page) const;
  /// Anchor terms equal to `word`, with their link endpoints.
  std::vector<AnchorTerm> anchor_hits(WordId word) const;
  /// Every anchor term on links pointing at `page`.
  std::vector<AnchorTerm> anchor_terms_to(PageId page) const;
  std::vector<LinkRecord> inbound_links(PageId page) const;
  std::int64_t anchor_term_count() const;
  std::int64_t anchor_term_count(WordId word) const;

  /// RAII savepoint; rolls back unless committed. Nests.
  class Transaction {
   public:
    explicit Transaction(IndexStore& store);
    Transaction(const Transaction&) = delete;
    Transaction& operator=(const Transaction&) = delete;
    ~Transaction();
    void commit();

   private:
    IndexStore* store_;
    std::string name_;
    bool done_ = false;
  };

  Transaction transaction() { return Transaction(*this); }

  /// Read snapshot: every read between begin and end sees one consistent state.
  class Snapshot {
   public:
    explicit Snapshot(const IndexStore& store);
    Snapshot(const Snapshot&) = delete;
    Snapshot& operator=(const Snapshot&) = delete;
    ~Snapshot();

   private:
    const IndexStore* store_;
    bool active_ = false;
  };

 private:
  struct Impl;
  explicit IndexStore(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace anchorlight
