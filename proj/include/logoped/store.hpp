#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logoped/clock.hpp"

namespace logoped {

struct Ref {
  std::string kind;
  std::string id;

  auto operator<=>(const Ref&) const = default;
};

std::string to_string(const Ref& ref);  // "kind:id"

/// One persisted entity. `payload` is the canonical JSON of the entity.
struct Record {
  std::string kind;
  std::string id;
  std::int64_t version = 0;
  std::optional<std::string> owner;  // child id for child-scoped kinds
  std::string payload;
  std::string updated_at;
};

struct DanglingReference {
  Ref from;
  Ref to;
};

/// Embedded versioned record store rooted at a directory:
///
///   <root>/schema_version   integer, refuses newer than kSchemaVersion
///   <root>/store.db         SQLite database (records, refs, counters)
///   <root>/media/ab/<hash>  content-addressed media bytes
///
/// Every record lists the records it references. Puts refuse dangling
/// references and deletes refuse referenced records, so a quiescent store
/// never holds a dangling id. Thread-safe; one connection per Store.
class Store {
 public:
  static constexpr int kSchemaVersion = 1;

  explicit Store(const std::filesystem::path& root, Clock clock = system_clock());
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  const std::filesystem::path& root() const noexcept;
  std::filesystem::path media_path(std::string_view content_hash) const;

  std::optional<Record> find(std::string_view kind, std::string_view id) const;
  /// Throws Error(NotFound).
  Record get(std::string_view kind, std::string_view id) const;
  bool exists(std::string_view kind, std::string_view id) const;
  /// Ordered by id ascending.
  std::vector<Record> list(std::string_view kind, const std::optional<std::string>& owner = std::nullopt) const;
  std::vector<Ref> referrers(std::string_view kind, std::string_view id) const;

  /// Writes `record` with record.version as the new version. The stored
  /// version must be record.version - 1 (absent when creating with 1),
  /// otherwise StaleVersion. Every ref must exist, otherwise DanglingRef.
  void put(const Record& record, const std::vector<Ref>& refs);

  /// Inserts a record carrying a foreign version (bundle import). An
  /// existing record with an identical payload is left alone; any other
  /// existing record raises ImportConflict.
  void import_record(const Record& record, const std::vector<Ref>& refs);

  /// Refuses with ReferencedElsewhere (details = referrers) or NotFound.
  void remove(std::string_view kind, std::string_view id);

  /// Fresh id "<prefix><6-digit counter>" not yet used for `kind`.
  std::string next_id(std::string_view kind, std::string_view prefix);

  /// References whose target record is missing, plus media records whose
  /// bytes are missing under media/.
  std::vector<DanglingReference> check_references() const;

  /// Runs `fn` inside one write transaction (nestable, rolled back on throw).
  template <class F>
  decltype(auto) transaction(F&& fn) {
    std::lock_guard lock(mutex_);
    begin();
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        commit();
      } else {
        decltype(auto) result = fn();
        commit();
        return result;
      }
    } catch (...) {
      rollback();
      throw;
    }
  }

  /// Read-only snapshot; the lock keeps other threads from writing.
  template <class F>
  decltype(auto) read(F&& fn) const {
    std::lock_guard lock(mutex_);
    return fn();
  }

 private:
  void begin();
  void commit();
  void rollback();
  std::string now() const;

  struct Impl;
  std::unique_ptr<Impl> impl_;
  Clock clock_;
  mutable std::recursive_mutex mutex_;
};

/// Advisory exclusive lock on <root>/.lock, held for the object lifetime.
/// Throws Error(StoreBusy) if another process holds it.
class ExclusiveStoreLock {
 public:
  explicit ExclusiveStoreLock(const std::filesystem::path& root);
  ~ExclusiveStoreLock();
  ExclusiveStoreLock(const ExclusiveStoreLock&) = delete;
  ExclusiveStoreLock& operator=(const ExclusiveStoreLock&) = delete;

 private:
  int fd_ = -1;
};

/// Writes bytes to `path` through a temp file + fsync + rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace logoped
