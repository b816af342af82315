#include "logoped/store.hpp"

#include <fcntl.h>
#include <sqlite3.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "logoped/error.hpp"

namespace logoped {

namespace fs = std::filesystem;

std::string to_string(const Ref& ref) { return ref.kind + ":" + ref.id; }

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS records(
  kind TEXT NOT NULL,
  id TEXT NOT NULL,
  version INTEGER NOT NULL,
  owner TEXT,
  payload TEXT NOT NULL,
  updated_at TEXT NOT NULL,
  PRIMARY KEY(kind, id)) WITHOUT ROWID;
CREATE INDEX IF NOT EXISTS records_owner ON records(kind, owner, id);
CREATE TABLE IF NOT EXISTS refs(
  from_kind TEXT NOT NULL,
  from_id TEXT NOT NULL,
  to_kind TEXT NOT NULL,
  to_id TEXT NOT NULL,
  PRIMARY KEY(from_kind, from_id, to_kind, to_id)) WITHOUT ROWID;
CREATE INDEX IF NOT EXISTS refs_target ON refs(to_kind, to_id);
CREATE TABLE IF NOT EXISTS counters(
  kind TEXT PRIMARY KEY,
  next INTEGER NOT NULL);
)sql";

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      fail(ErrorCode::StoreUnavailable, std::string("sqlite prepare: ") + sqlite3_errmsg(db));
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& reset() {
    sqlite3_reset(stmt_);
    sqlite3_clear_bindings(stmt_);
    next_ = 1;
    return *this;
  }
  Statement& bind(std::string_view text) {
    sqlite3_bind_text(stmt_, next_++, text.data(), static_cast<int>(text.size()), SQLITE_TRANSIENT);
    return *this;
  }
  Statement& bind(const std::string& text) { return bind(std::string_view(text)); }
  Statement& bind(std::int64_t v) {
    sqlite3_bind_int64(stmt_, next_++, v);
    return *this;
  }
  Statement& bind(const std::optional<std::string>& v) {
    if (v) return bind(std::string_view(*v));
    sqlite3_bind_null(stmt_, next_++);
    return *this;
  }
  /// True while a row is available.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    if (rc == SQLITE_BUSY || rc == SQLITE_LOCKED) fail(ErrorCode::StoreBusy, sqlite3_errmsg(db_));
    fail(ErrorCode::StoreUnavailable, std::string("sqlite step: ") + sqlite3_errmsg(db_));
  }
  void run() {
    while (step()) {
    }
  }
  std::string text(int col) const {
    const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, col));
    return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col))) : std::string{};
  }
  std::optional<std::string> optional_text(int col) const {
    if (sqlite3_column_type(stmt_, col) == SQLITE_NULL) return std::nullopt;
    return text(col);
  }
  std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
  int next_ = 1;
};

void exec(sqlite3* db, const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown";
    sqlite3_free(err);
    if (msg.find("locked") != std::string::npos || msg.find("busy") != std::string::npos) {
      fail(ErrorCode::StoreBusy, msg);
    }
    fail(ErrorCode::StoreUnavailable, "sqlite: " + msg);
  }
}

Record read_record(const Statement& s) {
  Record r;
  r.kind = s.text(0);
  r.id = s.text(1);
  r.version = s.integer(2);
  r.owner = s.optional_text(3);
  r.payload = s.text(4);
  r.updated_at = s.text(5);
  return r;
}

}  // namespace

struct Store::Impl {
  fs::path root;
  sqlite3* db = nullptr;
  int depth = 0;
  std::map<std::string, std::unique_ptr<Statement>, std::less<>> cache;

  ~Impl() {
    cache.clear();
    if (db) sqlite3_close(db);
  }

  Statement& stmt(const char* sql) {
    auto it = cache.find(sql);
    if (it == cache.end()) it = cache.emplace(sql, std::make_unique<Statement>(db, sql)).first;
    return it->second->reset();
  }

  void write_refs(const Record& record, const std::vector<Ref>& refs) {
    stmt("DELETE FROM refs WHERE from_kind=? AND from_id=?").bind(record.kind).bind(record.id).run();
    for (const auto& ref : refs) {
      stmt("INSERT OR IGNORE INTO refs(from_kind, from_id, to_kind, to_id) VALUES(?,?,?,?)")
          .bind(record.kind)
          .bind(record.id)
          .bind(ref.kind)
          .bind(ref.id)
          .run();
    }
  }
};

Store::Store(const fs::path& root, Clock clock) : impl_(std::make_unique<Impl>()), clock_(std::move(clock)) {
  impl_->root = root;
  std::error_code ec;
  fs::create_directories(root / "media", ec);
  if (ec) fail(ErrorCode::StoreUnavailable, "cannot create store root " + root.string() + ": " + ec.message());

  const auto schema_file = root / "schema_version";
  if (fs::exists(schema_file)) {
    int found = 0;
    std::ifstream in(schema_file);
    if (!(in >> found)) fail(ErrorCode::StoreUnavailable, "unreadable schema_version in " + root.string());
    if (found > kSchemaVersion) {
      fail(ErrorCode::UnsupportedVersion, "store schema version " + std::to_string(found) +
                                              " is newer than supported " + std::to_string(kSchemaVersion));
    }
  } else {
    write_file_atomic(schema_file, std::to_string(kSchemaVersion) + "\n");
  }

  if (sqlite3_open_v2((root / "store.db").c_str(), &impl_->db, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE,
                      nullptr) != SQLITE_OK) {
    fail(ErrorCode::StoreUnavailable, "cannot open store database in " + root.string());
  }
  sqlite3_busy_timeout(impl_->db, 5000);
  exec(impl_->db, "PRAGMA journal_mode=WAL; PRAGMA synchronous=NORMAL; PRAGMA foreign_keys=OFF;");
  exec(impl_->db, kSchema);
}

Store::~Store() = default;

const fs::path& Store::root() const noexcept { return impl_->root; }

fs::path Store::media_path(std::string_view hash) const {
  const std::string h(hash);
  return impl_->root / "media" / h.substr(0, 2) / h;
}

std::string Store::now() const { return format_timestamp(clock_()); }

void Store::begin() {
  if (impl_->depth++ == 0) {
    try {
      exec(impl_->db, "BEGIN IMMEDIATE");
    } catch (...) {
      impl_->depth = 0;
      throw;
    }
  }
}

void Store::commit() {
  if (--impl_->depth == 0) exec(impl_->db, "COMMIT");
}

void Store::rollback() {
  if (--impl_->depth == 0) sqlite3_exec(impl_->db, "ROLLBACK", nullptr, nullptr, nullptr);
}

std::optional<Record> Store::find(std::string_view kind, std::string_view id) const {
  std::lock_guard lock(mutex_);
  auto& s = impl_->stmt("SELECT kind, id, version, owner, payload, updated_at FROM records WHERE kind=? AND id=?");
  s.bind(kind).bind(id);
  if (!s.step()) return std::nullopt;
  auto r = read_record(s);
  s.reset();
  return r;
}

Record Store::get(std::string_view kind, std::string_view id) const {
  auto r = find(kind, id);
  if (!r) fail(ErrorCode::NotFound, std::string(kind) + " '" + std::string(id) + "' not found", {std::string(id)});
  return std::move(*r);
}

bool Store::exists(std::string_view kind, std::string_view id) const {
  std::lock_guard lock(mutex_);
  auto& s = impl_->stmt("SELECT 1 FROM records WHERE kind=? AND id=?");
  s.bind(kind).bind(id);
  const bool found = s.step();
  s.reset();
  return found;
}

std::vector<Record> Store::list(std::string_view kind, const std::optional<std::string>& owner) const {
  std::lock_guard lock(mutex_);
  std::vector<Record> out;
  if (owner) {
    auto& s = impl_->stmt(
        "SELECT kind, id, version, owner, payload, updated_at FROM records WHERE kind=? AND owner=? ORDER BY id");
    s.bind(kind).bind(owner);
    while (s.step()) out.push_back(read_record(s));
  } else {
    auto& s =
        impl_->stmt("SELECT kind, id, version, owner, payload, updated_at FROM records WHERE kind=? ORDER BY id");
    s.bind(kind);
    while (s.step()) out.push_back(read_record(s));
  }
  return out;
}

std::vector<Ref> Store::referrers(std::string_view kind, std::string_view id) const {
  std::lock_guard lock(mutex_);
  std::vector<Ref> out;
  auto& s = impl_->stmt("SELECT from_kind, from_id FROM refs WHERE to_kind=? AND to_id=? ORDER BY from_kind, from_id");
  s.bind(kind).bind(id);
  while (s.step()) out.push_back({s.text(0), s.text(1)});
  return out;
}

void Store::put(const Record& record, const std::vector<Ref>& refs) {
  transaction([&] {
    auto& cur = impl_->stmt("SELECT version FROM records WHERE kind=? AND id=?");
    cur.bind(record.kind).bind(record.id);
    const std::int64_t stored = cur.step() ? cur.integer(0) : 0;
    cur.reset();
    if (stored != record.version - 1) {
      fail(ErrorCode::StaleVersion,
           record.kind + " '" + record.id + "': expected version " + std::to_string(record.version - 1) +
               ", stored " + std::to_string(stored),
           {record.id});
    }
    std::vector<std::string> missing;
    for (const auto& ref : refs) {
      if (!(ref.kind == record.kind && ref.id == record.id) && !exists(ref.kind, ref.id)) {
        missing.push_back(to_string(ref));
      }
    }
    if (!missing.empty()) {
      fail(ErrorCode::DanglingRef, record.kind + " '" + record.id + "' references missing records", missing);
    }
    impl_->stmt(
             "INSERT INTO records(kind, id, version, owner, payload, updated_at) VALUES(?,?,?,?,?,?) "
             "ON CONFLICT(kind, id) DO UPDATE SET version=excluded.version, owner=excluded.owner, "
             "payload=excluded.payload, updated_at=excluded.updated_at")
        .bind(record.kind)
        .bind(record.id)
        .bind(record.version)
        .bind(record.owner)
        .bind(record.payload)
        .bind(now())
        .run();
    impl_->write_refs(record, refs);
  });
}

void Store::import_record(const Record& record, const std::vector<Ref>& refs) {
  transaction([&] {
    if (auto existing = find(record.kind, record.id)) {
      if (existing->payload == record.payload) return;
      fail(ErrorCode::ImportConflict,
           record.kind + " '" + record.id + "' already exists with different content", {record.id});
    }
    std::vector<std::string> missing;
    for (const auto& ref : refs) {
      if (!exists(ref.kind, ref.id)) missing.push_back(to_string(ref));
    }
    if (!missing.empty()) {
      fail(ErrorCode::DanglingRef, record.kind + " '" + record.id + "' references missing records", missing);
    }
    impl_->stmt("INSERT INTO records(kind, id, version, owner, payload, updated_at) VALUES(?,?,?,?,?,?)")
        .bind(record.kind)
        .bind(record.id)
        .bind(record.version)
        .bind(record.owner)
        .bind(record.payload)
        .bind(now())
        .run();
    impl_->write_refs(record, refs);
  });
}

void Store::remove(std::string_view kind, std::string_view id) {
  transaction([&] {
    if (!exists(kind, id)) {
      fail(ErrorCode::NotFound, std::string(kind) + " '" + std::string(id) + "' not found", {std::string(id)});
    }
    std::vector<std::string> holders;
    for (const auto& ref : referrers(kind, id)) {
      if (!(ref.kind == kind && ref.id == id)) holders.push_back(to_string(ref));
    }
    if (!holders.empty()) {
      fail(ErrorCode::ReferencedElsewhere,
           std::string(kind) + " '" + std::string(id) + "' is referenced by " + std::to_string(holders.size()) +
               " record(s)",
           holders);
    }
    impl_->stmt("DELETE FROM records WHERE kind=? AND id=?").bind(kind).bind(id).run();
    impl_->stmt("DELETE FROM refs WHERE from_kind=? AND from_id=?").bind(kind).bind(id).run();
  });
}

std::string Store::next_id(std::string_view kind, std::string_view prefix) {
  return transaction([&] {
    auto& cur = impl_->stmt("SELECT next FROM counters WHERE kind=?");
    cur.bind(kind);
    std::int64_t next = cur.step() ? cur.integer(0) : 1;
    cur.reset();
    std::string id;
    for (;; ++next) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%06lld", static_cast<long long>(next));
      id = std::string(prefix) + buf;
      if (!exists(kind, id)) break;
    }
    impl_->stmt("INSERT INTO counters(kind, next) VALUES(?,?) ON CONFLICT(kind) DO UPDATE SET next=excluded.next")
        .bind(kind)
        .bind(next + 1)
        .run();
    return id;
  });
}

std::vector<DanglingReference> Store::check_references() const {
  std::lock_guard lock(mutex_);
  std::vector<DanglingReference> out;
  auto& s = impl_->stmt(
      "SELECT r.from_kind, r.from_id, r.to_kind, r.to_id FROM refs r "
      "LEFT JOIN records t ON t.kind = r.to_kind AND t.id = r.to_id "
      "WHERE t.id IS NULL ORDER BY r.from_kind, r.from_id, r.to_kind, r.to_id");
  while (s.step()) out.push_back({{s.text(0), s.text(1)}, {s.text(2), s.text(3)}});
  auto& m = impl_->stmt("SELECT id FROM records WHERE kind='media' ORDER BY id");
  std::vector<std::string> media;
  while (m.step()) media.push_back(m.text(0));
  for (const auto& hash : media) {
    if (!fs::exists(media_path(hash))) out.push_back({{"media", hash}, {"file", media_path(hash).string()}});
  }
  return out;
}

ExclusiveStoreLock::ExclusiveStoreLock(const fs::path& root) {
  fs::create_directories(root);
  fd_ = ::open((root / ".lock").c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) fail(ErrorCode::StoreUnavailable, "cannot open lock file in " + root.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    fail(ErrorCode::StoreBusy, "store " + root.string() + " is locked by another process");
  }
}

ExclusiveStoreLock::~ExclusiveStoreLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) fail(ErrorCode::StoreUnavailable, "cannot write " + tmp.string());
  std::size_t written = 0;
  while (written < bytes.size()) {
    const auto n = ::write(fd, bytes.data() + written, bytes.size() - written);
    if (n <= 0) {
      ::close(fd);
      fail(ErrorCode::StoreUnavailable, "short write to " + tmp.string());
    }
    written += static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::NotFound, "cannot read " + path.string(), {path.string()});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace logoped
