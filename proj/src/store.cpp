#include "anchorlight/store.hpp"

#include <sqlite3.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>

namespace anchorlight {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CorruptIndex: return "CorruptIndex";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::StorageFailure: return "StorageFailure";
    case ErrorCode::WriteRejected: return "WriteRejected";
    case ErrorCode::InvalidTerm: return "InvalidTerm";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::UnknownScoreTable: return "UnknownScoreTable";
    case ErrorCode::MissingConstant: return "MissingConstant";
    case ErrorCode::StemmingLocked: return "StemmingLocked";
    case ErrorCode::ReadOnly: return "ReadOnly";
    case ErrorCode::ZeroGraph: return "ZeroGraph";
    case ErrorCode::InvalidWeight: return "InvalidWeight";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::EmptyQuery: return "EmptyQuery";
    case ErrorCode::NeedsAnalysis: return "NeedsAnalysis";
    case ErrorCode::InvalidScheme: return "InvalidScheme";
    case ErrorCode::UnknownScorer: return "UnknownScorer";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

std::string_view table_name(ScoreTable table) {
  switch (table) {
    case ScoreTable::PageLength: return "pagelength";
    case ScoreTable::PageRank: return "pagerank";
    case ScoreTable::AuthHits: return "auth_hits";
    case ScoreTable::HubHits: return "hub_hits";
    case ScoreTable::AuthMyHits: return "auth_myhits";
    case ScoreTable::HubMyHits: return "hub_myhits";
    case ScoreTable::MyPageRank: return "mypagerank";
  }
  return "";
}

ScoreTable parse_score_table(std::string_view name) {
  for (ScoreTable t : kScoreTables)
    if (table_name(t) == name) return t;
  throw Error(ErrorCode::UnknownScoreTable, "unknown score table '" + std::string(name) + "'");
}

bool has_constant_column(ScoreTable table) {
  return table == ScoreTable::AuthMyHits || table == ScoreTable::HubMyHits ||
         table == ScoreTable::MyPageRank;
}

namespace {

// pagelength stores its value under `length`; the rest under `score`.
std::string_view value_column(ScoreTable table) {
  return table == ScoreTable::PageLength ? "length" : "score";
}

constexpr const char* kSchemaSql = R"sql(
CREATE TABLE IF NOT EXISTS meta (key TEXT PRIMARY KEY, value TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS urllist (
  id INTEGER PRIMARY KEY,
  url TEXT NOT NULL UNIQUE,
  indexed INTEGER NOT NULL DEFAULT 0);
CREATE TABLE IF NOT EXISTS wordlist (
  id INTEGER PRIMARY KEY,
  word TEXT NOT NULL UNIQUE);
CREATE TABLE IF NOT EXISTS wordlocation (
  urlid INTEGER NOT NULL REFERENCES urllist(id),
  wordid INTEGER NOT NULL REFERENCES wordlist(id),
  location INTEGER NOT NULL);
CREATE TABLE IF NOT EXISTS link (
  id INTEGER PRIMARY KEY,
  fromid INTEGER NOT NULL REFERENCES urllist(id),
  toid INTEGER NOT NULL REFERENCES urllist(id));
CREATE TABLE IF NOT EXISTS linkwords (
  wordid INTEGER NOT NULL REFERENCES wordlist(id),
  linkid INTEGER NOT NULL REFERENCES link(id));
CREATE TABLE IF NOT EXISTS pagelength (urlid INTEGER PRIMARY KEY REFERENCES urllist(id), length REAL NOT NULL);
CREATE TABLE IF NOT EXISTS pagerank (urlid INTEGER PRIMARY KEY REFERENCES urllist(id), score REAL NOT NULL);
CREATE TABLE IF NOT EXISTS auth_hits (urlid INTEGER PRIMARY KEY REFERENCES urllist(id), score REAL NOT NULL);
CREATE TABLE IF NOT EXISTS hub_hits (urlid INTEGER PRIMARY KEY REFERENCES urllist(id), score REAL NOT NULL);
CREATE TABLE IF NOT EXISTS auth_myhits (urlid INTEGER PRIMARY KEY REFERENCES urllist(id), score REAL NOT NULL, constant REAL NOT NULL);
CREATE TABLE IF NOT EXISTS hub_myhits (urlid INTEGER PRIMARY KEY REFERENCES urllist(id), score REAL NOT NULL, constant REAL NOT NULL);
CREATE TABLE IF NOT EXISTS mypagerank (urlid INTEGER PRIMARY KEY REFERENCES urllist(id), score REAL NOT NULL, constant REAL NOT NULL);
CREATE INDEX IF NOT EXISTS wordlocation_word_idx ON wordlocation(wordid);
CREATE INDEX IF NOT EXISTS wordlocation_url_idx ON wordlocation(urlid);
CREATE INDEX IF NOT EXISTS link_to_idx ON link(toid);
CREATE INDEX IF NOT EXISTS link_from_idx ON link(fromid);
)sql";

ErrorCode classify(int rc) {
  switch (rc & 0xff) {
    case SQLITE_CORRUPT:
    case SQLITE_NOTADB:
      return ErrorCode::CorruptIndex;
    case SQLITE_READONLY:
      return ErrorCode::ReadOnly;
    case SQLITE_CONSTRAINT:
      return rc == SQLITE_CONSTRAINT_FOREIGNKEY ? ErrorCode::DanglingReference
                                                : ErrorCode::WriteRejected;
    case SQLITE_FULL:
    case SQLITE_IOERR:
    case SQLITE_CANTOPEN:
    case SQLITE_NOMEM:
    case SQLITE_PERM:
      return ErrorCode::StorageFailure;
    default:
      return ErrorCode::WriteRejected;
  }
}

[[noreturn]] void fail(sqlite3* db, int rc, std::string_view what) {
  std::string msg(what);
  msg += ": ";
  msg += db ? sqlite3_errmsg(db) : sqlite3_errstr(rc);
  throw Error(classify(rc), msg);
}

class Statement {
 public:
  Statement(sqlite3* db, const std::string& sql) : db_(db) {
    int rc = sqlite3_prepare_v2(db, sql.c_str(), static_cast<int>(sql.size()), &stmt_, nullptr);
    if (rc != SQLITE_OK) fail(db, rc, "prepare");
  }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;
  ~Statement() { sqlite3_finalize(stmt_); }

  Statement& reset() {
    sqlite3_reset(stmt_);
    sqlite3_clear_bindings(stmt_);
    return *this;
  }
  Statement& bind(int i, std::int64_t v) {
    check(sqlite3_bind_int64(stmt_, i, v));
    return *this;
  }
  Statement& bind(int i, double v) {
    check(sqlite3_bind_double(stmt_, i, v));
    return *this;
  }
  Statement& bind(int i, std::string_view v) {
    check(sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
    return *this;
  }

  /// true while a row is available.
  bool step() {
    int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    sqlite3_reset(stmt_);
    fail(db_, rc, "step");
  }
  void run() {
    while (step()) {
    }
  }

  std::int64_t int64(int col) const { return sqlite3_column_int64(stmt_, col); }
  double real(int col) const { return sqlite3_column_double(stmt_, col); }
  std::string text(int col) const {
    auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, col));
    return p ? std::string(p, sqlite3_column_bytes(stmt_, col)) : std::string();
  }

 private:
  void check(int rc) {
    if (rc != SQLITE_OK) fail(db_, rc, "bind");
  }
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

std::uint32_t read_be(const unsigned char* p, int n) {
  std::uint32_t v = 0;
  for (int i = 0; i < n; ++i) v = (v << 8) | p[i];
  return v;
}

// Cheap structural check of the file header; sqlite itself only notices a
// truncated file once it touches a missing page.
void check_header(const std::filesystem::path& path) {
  std::error_code ec;
  auto size = std::filesystem::file_size(path, ec);
  if (ec || size == 0) return;
  std::array<unsigned char, 100> header{};
  std::ifstream in(path, std::ios::binary);
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in.gcount() < 100 || std::string_view(reinterpret_cast<char*>(header.data()), 16) !=
                               std::string_view("SQLite format 3\0", 16))
    throw Error(ErrorCode::CorruptIndex, "not an index file: " + path.string());
  auto wal = path;
  wal += "-wal";
  if (std::filesystem::exists(wal)) return;
  std::uint64_t page_size = read_be(&header[16], 2);
  if (page_size == 1) page_size = 65536;
  std::uint64_t pages = read_be(&header[28], 4);
  if (page_size * pages > size)
    throw Error(ErrorCode::CorruptIndex, "index file truncated: " + path.string());
}

std::string now_iso8601() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

struct IndexStore::Impl {
  sqlite3* db = nullptr;
  std::filesystem::path path;
  bool read_only = false;
  int savepoint_depth = 0;
  std::map<std::string, std::unique_ptr<Statement>, std::less<>> cache;

  ~Impl() {
    cache.clear();
    if (db) sqlite3_close_v2(db);
  }

  Statement& stmt(const std::string& sql) {
    auto it = cache.find(sql);
    if (it == cache.end()) it = cache.emplace(sql, std::make_unique<Statement>(db, sql)).first;
    return it->second->reset();
  }

  void exec(const std::string& sql) {
    char* err = nullptr;
    int rc = sqlite3_exec(db, sql.c_str(), nullptr, nullptr, &err);
    if (rc != SQLITE_OK) {
      std::string msg = err ? err : sqlite3_errstr(rc);
      sqlite3_free(err);
      throw Error(classify(rc), msg);
    }
  }

  std::int64_t scalar(const std::string& sql) {
    auto& s = stmt(sql);
    return s.step() ? s.int64(0) : 0;
  }

  void require_writable() const {
    if (read_only) throw Error(ErrorCode::ReadOnly, "index opened read-only");
  }

  std::string meta_value(std::string_view key) {
    auto& s = stmt("SELECT value FROM meta WHERE key = ?");
    s.bind(1, key);
    return s.step() ? s.text(0) : std::string();
  }

  void set_meta(std::string_view key, std::string_view value) {
    stmt("INSERT INTO meta(key, value) VALUES(?, ?) ON CONFLICT(key) DO UPDATE SET value = excluded.value")
        .bind(1, key)
        .bind(2, value)
        .run();
  }
};

IndexStore::IndexStore(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
IndexStore::IndexStore(IndexStore&&) noexcept = default;
IndexStore& IndexStore::operator=(IndexStore&&) noexcept = default;
IndexStore::~IndexStore() = default;

IndexStore IndexStore::open(const std::filesystem::path& path, const OpenOptions& options) {
  bool exists = std::filesystem::exists(path);
  if (!exists && !options.create_if_missing)
    throw Error(ErrorCode::StorageFailure, "index not found: " + path.string());
  if (!exists && options.read_only)
    throw Error(ErrorCode::StorageFailure, "cannot create a read-only index: " + path.string());
  if (exists) check_header(path);

  auto impl = std::make_unique<Impl>();
  impl->path = path;
  impl->read_only = options.read_only;
  int flags = options.read_only ? SQLITE_OPEN_READONLY : (SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE);
  int rc = sqlite3_open_v2(path.c_str(), &impl->db, flags | SQLITE_OPEN_NOMUTEX, nullptr);
  if (rc != SQLITE_OK) fail(impl->db, rc, "open " + path.string());
  sqlite3_busy_timeout(impl->db, 5000);
  sqlite3_extended_result_codes(impl->db, 1);

  try {
    impl->exec("PRAGMA foreign_keys = ON");
    if (!options.read_only) {
      impl->exec("PRAGMA journal_mode = WAL");
      impl->exec("PRAGMA synchronous = NORMAL");
    }
    bool has_meta =
        impl->scalar("SELECT count(*) FROM sqlite_master WHERE type = 'table' AND name = 'meta'") > 0;
    std::int64_t object_count = impl->scalar("SELECT count(*) FROM sqlite_master");
    if (!has_meta) {
      if (object_count > 0)
        throw Error(ErrorCode::SchemaMismatch, "file is not an anchorlight index: " + path.string());
      if (options.read_only)
        throw Error(ErrorCode::SchemaMismatch, "empty index file: " + path.string());
      impl->exec("BEGIN");
      impl->exec(kSchemaSql);
      impl->set_meta("schema_version", std::to_string(kSchemaVersion));
      impl->set_meta("stemming_enabled", options.stemming ? "1" : "0");
      impl->set_meta("stop_list_version", options.stop_list_version);
      impl->set_meta("created_at", now_iso8601());
      impl->exec("COMMIT");
    } else {
      std::string version = impl->meta_value("schema_version");
      if (version != std::to_string(kSchemaVersion))
        throw Error(ErrorCode::SchemaMismatch,
                    "index schema version '" + version + "', expected " + std::to_string(kSchemaVersion));
      for (std::string_view table : kSchemaTables) {
        auto& s = impl->stmt("SELECT count(*) FROM sqlite_master WHERE type = 'table' AND name = ?");
        s.bind(1, table);
        if (!s.step() || s.int64(0) == 0)
          throw Error(ErrorCode::SchemaMismatch, "index lacks table " + std::string(table));
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::WriteRejected || e.code() == ErrorCode::StorageFailure) {
      // Anything sqlite rejects while reading the schema means the file is unusable.
      throw Error(ErrorCode::CorruptIndex, e.what());
    }
    throw;
  }
  return IndexStore(std::move(impl));
}

const std::filesystem::path& IndexStore::path() const { return impl_->path; }
bool IndexStore::read_only() const { return impl_->read_only; }

IndexMeta IndexStore::meta() const {
  IndexMeta m;
  m.stemming_enabled = impl_->meta_value("stemming_enabled") == "1";
  m.stop_list_version = impl_->meta_value("stop_list_version");
  m.created_at = impl_->meta_value("created_at");
  m.schema_version = std::stoi(impl_->meta_value("schema_version"));
  return m;
}

void IndexStore::set_stemming(bool enabled) {
  impl_->require_writable();
  if (meta().stemming_enabled == enabled) return;
  if (indexed_page_count() > 0 || row_count("wordlist") > 0)
    throw Error(ErrorCode::StemmingLocked, "stemming flag is fixed once pages are indexed");
  impl_->set_meta("stemming_enabled", enabled ? "1" : "0");
}

PageId IndexStore::get_or_insert_url(std::string_view url) {
  if (auto id = find_url(url)) return *id;
  impl_->require_writable();
  impl_->stmt("INSERT INTO urllist(url) VALUES(?)").bind(1, url).run();
  return PageId{sqlite3_last_insert_rowid(impl_->db)};
}

std::optional<PageId> IndexStore::find_url(std::string_view url) const {
  auto& s = impl_->stmt("SELECT id FROM urllist WHERE url = ?");
  s.bind(1, url);
  if (s.step()) return PageId{s.int64(0)};
  return std::nullopt;
}

std::string IndexStore::url_of(PageId id) const {
  auto& s = impl_->stmt("SELECT url FROM urllist WHERE id = ?");
  s.bind(1, id.value);
  if (!s.step())
    throw Error(ErrorCode::DanglingReference, "no page with id " + std::to_string(id.value));
  return s.text(0);
}

bool IndexStore::is_indexed(PageId id) const {
  auto& s = impl_->stmt("SELECT indexed FROM urllist WHERE id = ?");
  s.bind(1, id.value);
  return s.step() && s.int64(0) != 0;
}

void IndexStore::mark_indexed(PageId id) {
  impl_->require_writable();
  impl_->stmt("UPDATE urllist SET indexed = 1 WHERE id = ?").bind(1, id.value).run();
  if (sqlite3_changes(impl_->db) == 0)
    throw Error(ErrorCode::DanglingReference, "no page with id " + std::to_string(id.value));
}

WordId IndexStore::get_or_insert_word(std::string_view term) {
  if (term.empty()) throw Error(ErrorCode::InvalidTerm, "empty term");
  if (auto id = find_word(term)) return *id;
  impl_->require_writable();
  impl_->stmt("INSERT INTO wordlist(word) VALUES(?)").bind(1, term).run();
  return WordId{sqlite3_last_insert_rowid(impl_->db)};
}

std::optional<WordId> IndexStore::find_word(std::string_view term) const {
  auto& s = impl_->stmt("SELECT id FROM wordlist WHERE word = ?");
  s.bind(1, term);
  if (s.step()) return WordId{s.int64(0)};
  return std::nullopt;
}

void IndexStore::add_posting(const Posting& p) {
  impl_->require_writable();
  if (p.location < 0) throw Error(ErrorCode::WriteRejected, "negative posting location");
  impl_->stmt("INSERT INTO wordlocation(urlid, wordid, location) VALUES(?, ?, ?)")
      .bind(1, p.urlid.value)
      .bind(2, p.wordid.value)
      .bind(3, p.location)
      .run();
}

LinkId IndexStore::add_link(PageId from, PageId to) {
  impl_->require_writable();
  impl_->stmt("INSERT INTO link(fromid, toid) VALUES(?, ?)").bind(1, from.value).bind(2, to.value).run();
  return LinkId{sqlite3_last_insert_rowid(impl_->db)};
}

void IndexStore::add_link_word(WordId word, LinkId link) {
  impl_->require_writable();
  impl_->stmt("INSERT INTO linkwords(wordid, linkid) VALUES(?, ?)")
      .bind(1, word.value)
      .bind(2, link.value)
      .run();
}

void IndexStore::create_hot_indexes() {
  impl_->require_writable();
  impl_->exec(
      "CREATE INDEX IF NOT EXISTS linkwords_word_idx ON linkwords(wordid);"
      "CREATE INDEX IF NOT EXISTS linkwords_link_idx ON linkwords(linkid);");
  impl_->cache.clear();  // re-plan cached statements
}

bool IndexStore::has_hot_indexes() const {
  return impl_->scalar(
             "SELECT count(*) FROM sqlite_master WHERE type = 'index' AND name IN "
             "('linkwords_word_idx', 'linkwords_link_idx')") == 2;
}

void IndexStore::drop_hot_indexes() {
  impl_->require_writable();
  impl_->exec(
      "DROP INDEX IF EXISTS linkwords_word_idx;"
      "DROP INDEX IF EXISTS linkwords_link_idx;");
  impl_->cache.clear();
}

std::string IndexStore::explain_linkwords_lookup() const {
  auto& s = impl_->stmt("EXPLAIN QUERY PLAN SELECT linkid FROM linkwords WHERE wordid = ?");
  s.bind(1, std::int64_t{1});
  std::string plan;
  while (s.step()) {
    if (!plan.empty()) plan += '\n';
    plan += s.text(3);
  }
  return plan;
}

std::vector<LinkId> IndexStore::linkwords_by_word(WordId word) const {
  auto& s = impl_->stmt("SELECT linkid FROM linkwords WHERE wordid = ? ORDER BY linkid");
  s.bind(1, word.value);
  std::vector<LinkId> out;
  while (s.step()) out.push_back(LinkId{s.int64(0)});
  return out;
}

void IndexStore::put_score(ScoreTable table, PageId page, double score,
                           std::optional<double> constant) {
  impl_->require_writable();
  std::string name(table_name(table));
  std::string col(value_column(table));
  if (has_constant_column(table) != constant.has_value())
    throw Error(ErrorCode::MissingConstant,
                has_constant_column(table) ? name + " requires a constant"
                                           : name + " has no constant column");
  if (constant) {
    impl_->stmt("INSERT INTO " + name + "(urlid, " + col + ", constant) VALUES(?, ?, ?) "
                "ON CONFLICT(urlid) DO UPDATE SET " + col + " = excluded." + col +
                ", constant = excluded.constant")
        .bind(1, page.value)
        .bind(2, score)
        .bind(3, *constant)
        .run();
  } else {
    impl_->stmt("INSERT INTO " + name + "(urlid, " + col + ") VALUES(?, ?) "
                "ON CONFLICT(urlid) DO UPDATE SET " + col + " = excluded." + col)
        .bind(1, page.value)
        .bind(2, score)
        .run();
  }
}

void IndexStore::put_score(std::string_view table, PageId page, double score,
                           std::optional<double> constant) {
  put_score(parse_score_table(table), page, score, constant);
}

std::unordered_map<PageId, double, IdHash> IndexStore::get_scores(
    ScoreTable table, std::span<const PageId> pages) const {
  std::string sql = "SELECT " + std::string(value_column(table)) + " FROM " +
                    std::string(table_name(table)) + " WHERE urlid = ?";
  std::unordered_map<PageId, double, IdHash> out;
  for (PageId p : pages) {
    auto& s = impl_->stmt(sql);
    s.bind(1, p.value);
    out[p] = s.step() ? s.real(0) : 0.0;
  }
  return out;
}

std::unordered_map<PageId, double, IdHash> IndexStore::get_scores(
    std::string_view table, std::span<const PageId> pages) const {
  return get_scores(parse_score_table(table), pages);
}

std::unordered_map<PageId, double, IdHash> IndexStore::all_scores(ScoreTable table) const {
  auto& s = impl_->stmt("SELECT urlid, " + std::string(value_column(table)) + " FROM " +
                        std::string(table_name(table)));
  std::unordered_map<PageId, double, IdHash> out;
  while (s.step()) out[PageId{s.int64(0)}] = s.real(1);
  return out;
}

std::unordered_map<PageId, double, IdHash> IndexStore::all_constants(ScoreTable table) const {
  if (!has_constant_column(table))
    throw Error(ErrorCode::MissingConstant,
                std::string(table_name(table)) + " has no constant column");
  auto& s = impl_->stmt("SELECT urlid, constant FROM " + std::string(table_name(table)));
  std::unordered_map<PageId, double, IdHash> out;
  while (s.step()) out[PageId{s.int64(0)}] = s.real(1);
  return out;
}

void IndexStore::clear_scores(ScoreTable table) {
  impl_->require_writable();
  impl_->exec("DELETE FROM " + std::string(table_name(table)));
}

std::int64_t IndexStore::row_count(std::string_view table) const {
  bool known = table == "meta";
  for (auto t : kSchemaTables) known = known || t == table;
  if (!known) throw Error(ErrorCode::UnknownScoreTable, "unknown table '" + std::string(table) + "'");
  return impl_->scalar("SELECT count(*) FROM " + std::string(table));
}

std::int64_t IndexStore::page_count() const { return row_count("urllist"); }
std::int64_t IndexStore::indexed_page_count() const {
  return impl_->scalar("SELECT count(*) FROM urllist WHERE indexed = 1");
}
std::int64_t IndexStore::word_count() const { return row_count("wordlist"); }

std::vector<PageId> IndexStore::pages() const {
  auto& s = impl_->stmt("SELECT id FROM urllist ORDER BY id");
  std::vector<PageId> out;
  while (s.step()) out.push_back(PageId{s.int64(0)});
  return out;
}

std::vector<PageId> IndexStore::indexed_pages() const {
  auto& s = impl_->stmt("SELECT id FROM urllist WHERE indexed = 1 ORDER BY id");
  std::vector<PageId> out;
  while (s.step()) out.push_back(PageId{s.int64(0)});
  return out;
}

std::vector<LinkRecord> IndexStore::links() const {
  auto& s = impl_->stmt("SELECT id, fromid, toid FROM link ORDER BY id");
  std::vector<LinkRecord> out;
  while (s.step()) out.push_back({LinkId{s.int64(0)}, PageId{s.int64(1)}, PageId{s.int64(2)}});
  return out;
}

std::vector<Posting> IndexStore::postings_for_word(WordId word) const {
  auto& s = impl_->stmt(
      "SELECT urlid, location FROM wordlocation WHERE wordid = ? ORDER BY urlid, location");
  s.bind(1, word.value);
  std::vector<Posting> out;
  while (s.step()) out.push_back({PageId{s.int64(0)}, word, s.int64(1)});
  return out;
}

std::vector<Posting> IndexStore::postings_for_page(PageId page) const {
  auto& s = impl_->stmt(
      "SELECT wordid, location FROM wordlocation WHERE urlid = ? ORDER BY location");
  s.bind(1, page.value);
  std::vector<Posting> out;
  while (s.step()) out.push_back({page, WordId{s.int64(0)}, s.int64(1)});
  return out;
}

std::int64_t IndexStore::document_frequency(WordId word) const {
  auto& s = impl_->stmt("SELECT count(DISTINCT urlid) FROM wordlocation WHERE wordid = ?");
  s.bind(1, word.value);
  return s.step() ? s.int64(0) : 0;
}

std::int64_t IndexStore::posting_count(PageId page) const {
  auto& s = impl_->stmt("SELECT count(*) FROM wordlocation WHERE urlid = ?");
  s.bind(1, page.value);
  return s.step() ? s.int64(0) : 0;
}

std::vector<AnchorTerm> IndexStore::anchor_hits(WordId word) const {
  auto& s = impl_->stmt(
      "SELECT link.id, link.fromid, link.toid FROM linkwords "
      "JOIN link ON link.id = linkwords.linkid WHERE linkwords.wordid = ? ORDER BY link.id");
  s.bind(1, word.value);
  std::vector<AnchorTerm> out;
  while (s.step())
    out.push_back({LinkId{s.int64(0)}, PageId{s.int64(1)}, PageId{s.int64(2)}, word});
  return out;
}

std::vector<AnchorTerm> IndexStore::anchor_terms_to(PageId page) const {
  auto& s = impl_->stmt(
      "SELECT link.id, link.fromid, linkwords.wordid FROM link "
      "JOIN linkwords ON linkwords.linkid = link.id WHERE link.toid = ? ORDER BY link.id");
  s.bind(1, page.value);
  std::vector<AnchorTerm> out;
  while (s.step())
    out.push_back({LinkId{s.int64(0)}, PageId{s.int64(1)}, page, WordId{s.int64(2)}});
  return out;
}

std::vector<LinkRecord> IndexStore::inbound_links(PageId page) const {
  auto& s = impl_->stmt("SELECT id, fromid, toid FROM link WHERE toid = ? ORDER BY id");
  s.bind(1, page.value);
  std::vector<LinkRecord> out;
  while (s.step()) out.push_back({LinkId{s.int64(0)}, PageId{s.int64(1)}, PageId{s.int64(2)}});
  return out;
}

std::int64_t IndexStore::anchor_term_count() const { return row_count("linkwords"); }

std::int64_t IndexStore::anchor_term_count(WordId word) const {
  auto& s = impl_->stmt("SELECT count(*) FROM linkwords WHERE wordid = ?");
  s.bind(1, word.value);
  return s.step() ? s.int64(0) : 0;
}

IndexStore::Transaction::Transaction(IndexStore& store) : store_(&store) {
  store.impl_->require_writable();
  name_ = "sp" + std::to_string(store.impl_->savepoint_depth++);
  store.impl_->exec("SAVEPOINT " + name_);
}

IndexStore::Transaction::~Transaction() {
  if (done_) return;
  try {
    store_->impl_->exec("ROLLBACK TO " + name_);
    store_->impl_->exec("RELEASE " + name_);
  } catch (...) {
  }
  --store_->impl_->savepoint_depth;
}

void IndexStore::Transaction::commit() {
  if (done_) return;
  store_->impl_->exec("RELEASE " + name_);
  done_ = true;
  --store_->impl_->savepoint_depth;
}

IndexStore::Snapshot::Snapshot(const IndexStore& store) : store_(&store) {
  if (sqlite3_get_autocommit(store.impl_->db) == 0) return;
  store.impl_->exec("BEGIN");
  active_ = true;
  // BEGIN is deferred; the first read pins the snapshot.
  store.impl_->scalar("SELECT count(*) FROM meta");
}

IndexStore::Snapshot::~Snapshot() {
  if (!active_) return;
  try {
    store_->impl_->exec("COMMIT");
  } catch (...) {
  }
}

}  // namespace anchorlight
