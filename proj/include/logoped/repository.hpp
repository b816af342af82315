#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logoped/model.hpp"
#include "logoped/store.hpp"

namespace logoped {

// Entity <-> Record mapping. Each entity type names its record kind, its
// owning child (for per-child listing) and the records it references.

template <class T>
struct EntityTraits;

template <>
struct EntityTraits<MediaAsset> {
  static constexpr const char* kind = "media";
  static const std::string& id(const MediaAsset& v) { return v.id; }
  static std::optional<std::string> owner(const MediaAsset&) { return std::nullopt; }
  static std::vector<Ref> refs(const MediaAsset&) { return {}; }
};

template <>
struct EntityTraits<WordEntry> {
  static constexpr const char* kind = "word";
  static const std::string& id(const WordEntry& v) { return v.id; }
  static std::optional<std::string> owner(const WordEntry&) { return std::nullopt; }
  static std::vector<Ref> refs(const WordEntry& v);
};

template <>
struct EntityTraits<VocalProduction> {
  static constexpr const char* kind = "production";
  static const std::string& id(const VocalProduction& v) { return v.id; }
  static std::optional<std::string> owner(const VocalProduction&) { return std::nullopt; }
  static std::vector<Ref> refs(const VocalProduction& v) { return {{"media", v.audio}}; }
};

template <>
struct EntityTraits<Exercise> {
  static constexpr const char* kind = "exercise";
  static const std::string& id(const Exercise& v) { return v.id; }
  static std::optional<std::string> owner(const Exercise&) { return std::nullopt; }
  static std::vector<Ref> refs(const Exercise& v);
};

template <>
struct EntityTraits<ChildProfile> {
  static constexpr const char* kind = "child";
  static const std::string& id(const ChildProfile& v) { return v.id; }
  static std::optional<std::string> owner(const ChildProfile&) { return std::nullopt; }
  static std::vector<Ref> refs(const ChildProfile&) { return {}; }
};

template <>
struct EntityTraits<Homework> {
  static constexpr const char* kind = "homework";
  static const std::string& id(const Homework& v) { return v.id; }
  static std::optional<std::string> owner(const Homework& v) { return v.child_id; }
  static std::vector<Ref> refs(const Homework& v);
};

template <>
struct EntityTraits<Session> {
  static constexpr const char* kind = "session";
  static const std::string& id(const Session& v) { return v.id; }
  static std::optional<std::string> owner(const Session& v) { return v.child_id; }
  static std::vector<Ref> refs(const Session& v) { return {{"exercise", v.exercise_id}, {"child", v.child_id}}; }
};

template <>
struct EntityTraits<SessionResult> {
  static constexpr const char* kind = "result";
  static const std::string& id(const SessionResult& v) { return v.session_id; }
  static std::optional<std::string> owner(const SessionResult& v) { return v.child_id; }
  static std::vector<Ref> refs(const SessionResult& v) {
    return {{"exercise", v.exercise_id}, {"child", v.child_id}};
  }
};

template <>
struct EntityTraits<ScoreEntry> {
  static constexpr const char* kind = "score";
  static const std::string& id(const ScoreEntry& v) { return v.session_id; }
  static std::optional<std::string> owner(const ScoreEntry& v) { return v.child_id; }
  static std::vector<Ref> refs(const ScoreEntry& v) { return {{"exercise", v.exercise_id}, {"child", v.child_id}}; }
};

template <class T>
std::optional<T> try_load(const Store& store, std::string_view id) {
  auto rec = store.find(EntityTraits<T>::kind, id);
  if (!rec) return std::nullopt;
  return parse_json<T>(Json::parse(rec->payload));
}

/// Throws Error(NotFound).
template <class T>
T load(const Store& store, std::string_view id) {
  return parse_json<T>(Json::parse(store.get(EntityTraits<T>::kind, id).payload));
}

template <class T>
std::vector<T> load_all(const Store& store, const std::optional<std::string>& owner = std::nullopt) {
  std::vector<T> out;
  for (const auto& rec : store.list(EntityTraits<T>::kind, owner)) out.push_back(parse_json<T>(Json::parse(rec.payload)));
  return out;
}

template <class T>
Record to_record(const T& entity) {
  using Traits = EntityTraits<T>;
  return Record{Traits::kind, Traits::id(entity), entity.version, Traits::owner(entity), Json(entity).dump(), {}};
}

/// Optimistic write: `entity.version` is the version the caller read (0 for
/// a new entity). On success it is bumped to the stored version.
template <class T>
void save(Store& store, T& entity) {
  const auto expected = entity.version;
  entity.version = expected + 1;
  try {
    store.put(to_record(entity), EntityTraits<T>::refs(entity));
  } catch (...) {
    entity.version = expected;
    throw;
  }
}

/// Inserts an entity read from a bundle, keeping its version.
template <class T>
void import_entity(Store& store, const T& entity) {
  store.import_record(to_record(entity), EntityTraits<T>::refs(entity));
}

}  // namespace logoped
