#include "logoped/bundle.hpp"

#include <map>
#include <set>

#include "logoped/error.hpp"
#include "logoped/exercise.hpp"
#include "logoped/homework.hpp"
#include "logoped/media.hpp"
#include "logoped/repository.hpp"
#include "logoped/session.hpp"
#include "logoped/zip.hpp"

namespace logoped {

namespace {

constexpr const char* kManifestName = "manifest.json";

std::string archive_path(const std::string& hash) { return "media/" + hash; }

std::vector<std::string> media_ids(const WordEntry& w) {
  std::vector<std::string> ids{w.audio};
  if (w.syllabified_audio) ids.push_back(*w.syllabified_audio);
  if (w.image) ids.push_back(*w.image);
  return ids;
}

/// Parses a manifest section, reporting shape errors as a corrupt archive.
template <class T>
T section(const Json& j) {
  try {
    return parse_json<T>(j);
  } catch (const Error& e) {
    fail(ErrorCode::CorruptArchive, std::string("manifest is malformed: ") + e.what());
  }
}

struct ParsedBundle {
  Homework homework;
  ChildProfile child;
  std::vector<Exercise> exercises;
  std::vector<WordEntry> words;
  std::vector<VocalProduction> productions;
  std::vector<MediaAsset> media;
  std::map<std::string, std::string> media_bytes;  // hash -> bytes
};

ParsedBundle parse_bundle(std::string_view archive) {
  const auto entries = zip::read(archive);
  std::map<std::string_view, const zip::Entry*> by_name;
  for (const auto& e : entries) by_name[e.name] = &e;

  const auto mit = by_name.find(kManifestName);
  if (mit == by_name.end()) fail(ErrorCode::CorruptArchive, "archive has no manifest.json");
  if (!mit->second->crc_ok) fail(ErrorCode::CorruptArchive, "manifest.json fails its CRC check");
  Json manifest;
  try {
    manifest = Json::parse(mit->second->data);
  } catch (const Json::exception& e) {
    fail(ErrorCode::CorruptArchive, std::string("manifest.json is not JSON: ") + e.what());
  }
  if (!manifest.is_object() || !manifest.contains("format_version") || !manifest["format_version"].is_number_integer()) {
    fail(ErrorCode::CorruptArchive, "manifest.json has no integer format_version");
  }
  const auto version = manifest["format_version"].get<std::int64_t>();
  if (version != kBundleFormatVersion) {
    fail(ErrorCode::UnsupportedVersion, "bundle format_version " + std::to_string(version) + " is not supported (expected " +
                                            std::to_string(kBundleFormatVersion) + ")");
  }

  ParsedBundle b;
  b.homework = section<Homework>(manifest.value("homework", Json()));
  b.child = section<ChildProfile>(manifest.value("child", Json()));
  if (manifest.value("homework_id", "") != b.homework.id || manifest.value("child_id", "") != b.child.id ||
      b.homework.child_id != b.child.id) {
    fail(ErrorCode::CorruptArchive, "manifest homework and child ids disagree");
  }
  std::set<std::string> words_seen;
  std::set<std::string> productions_seen;
  for (const auto& ex : manifest.value("exercises", Json::array())) {
    b.exercises.push_back(section<Exercise>(ex.value("exercise", Json())));
    for (const auto& w : ex.value("words", Json::array())) {
      auto word = section<WordEntry>(w);
      if (words_seen.insert(word.id).second) b.words.push_back(std::move(word));
    }
    for (const auto& p : ex.value("productions", Json::array())) {
      auto prod = section<VocalProduction>(p);
      if (productions_seen.insert(prod.id).second) b.productions.push_back(std::move(prod));
    }
  }
  std::set<std::string> listed;
  for (const auto& m : manifest.value("media", Json::array())) {
    auto asset = section<MediaAsset>(m);
    if (m.value("archive_path", "") != archive_path(asset.content_hash) || asset.id != asset.content_hash) {
      fail(ErrorCode::CorruptArchive, "media entry '" + asset.id + "' has an inconsistent archive path or id");
    }
    const auto path = archive_path(asset.content_hash);
    const auto eit = by_name.find(path);
    if (eit == by_name.end()) fail(ErrorCode::CorruptArchive, "archive lacks " + path);
    const auto& bytes = eit->second->data;
    if (sha256_hex(bytes) != asset.content_hash || static_cast<std::int64_t>(bytes.size()) != asset.byte_size) {
      fail(ErrorCode::HashMismatch, path + " does not match its content hash", {path});
    }
    if (!eit->second->crc_ok) fail(ErrorCode::CorruptArchive, path + " fails its CRC check");
    listed.insert(asset.content_hash);
    b.media_bytes[asset.content_hash] = bytes;
    b.media.push_back(std::move(asset));
  }

  std::set<std::string> missing;
  auto need = [&](const std::string& id) {
    if (!listed.count(id)) missing.insert(id);
  };
  for (const auto& ex : b.exercises) {
    need(ex.instruction_audio);
    for (const auto& item : ex.items) {
      if (item.ref.kind == RefKind::word ? !words_seen.count(item.ref.id) : !productions_seen.count(item.ref.id)) {
        missing.insert(item.ref.id);
      }
      if (item.pair_word && !words_seen.count(*item.pair_word)) missing.insert(*item.pair_word);
    }
  }
  for (const auto& w : b.words) {
    for (const auto& id : media_ids(w)) need(id);
  }
  for (const auto& p : b.productions) need(p.audio);
  std::set<std::string> exercise_ids;
  for (const auto& ex : b.exercises) exercise_ids.insert(ex.id);
  for (const auto& id : b.homework.exercise_ids) {
    if (!exercise_ids.count(id)) missing.insert(id);
  }
  if (!missing.empty()) {
    fail(ErrorCode::CorruptArchive, "manifest references entries it does not embed",
         {missing.begin(), missing.end()});
  }
  return b;
}

}  // namespace

Json bundle_manifest(const Store& store, std::string_view homework_id) {
  return store.read([&] {
    const auto hw = load<Homework>(store, homework_id);
    const auto child = load<ChildProfile>(store, hw.child_id);

    std::set<std::string> media;
    std::set<std::string> seen;
    Json exercises = Json::array();
    for (const auto& id : hw.exercise_ids) {
      if (!seen.insert(id).second) continue;
      const auto ex = load<Exercise>(store, id);
      const auto snap = snapshot_for(store, ex);
      Json words = Json::array();
      Json productions = Json::array();
      for (const auto& [_, w] : snap.words) words.push_back(w);
      for (const auto& [_, p] : snap.productions) productions.push_back(p);
      for (const auto& [hash, _] : snap.media) media.insert(hash);
      exercises.push_back({{"exercise", ex}, {"words", words}, {"productions", productions}});
    }

    std::vector<std::string> missing;
    Json media_list = Json::array();
    for (const auto& hash : media) {
      if (!std::filesystem::exists(store.media_path(hash))) missing.push_back(hash);
      Json entry = load<MediaAsset>(store, hash);
      entry["archive_path"] = archive_path(hash);
      media_list.push_back(std::move(entry));
    }
    if (!missing.empty()) fail(ErrorCode::MissingMedia, "media bytes missing from the store", missing);

    return Json{{"format_version", kBundleFormatVersion},
                {"homework_id", hw.id},
                {"child_id", child.id},
                {"created_at", format_timestamp(hw.assigned_at)},
                {"homework", hw},
                {"child", child},
                {"exercises", exercises},
                {"media", media_list}};
  });
}

std::string export_bundle(const Store& store, std::string_view homework_id) {
  return store.read([&] {
    const auto manifest = bundle_manifest(store, homework_id);
    std::vector<zip::Entry> entries{{kManifestName, manifest.dump(2) + "\n"}};
    for (const auto& m : manifest["media"]) {
      const auto hash = m["content_hash"].get<std::string>();
      entries.push_back({archive_path(hash), read_media(store, hash)});
    }
    return zip::write(entries);
  });
}

void export_bundle_file(const Store& store, std::string_view homework_id, const std::filesystem::path& out) {
  write_file_atomic(out, export_bundle(store, homework_id));
}

Homework import_bundle(Store& store, std::string_view archive) {
  auto b = parse_bundle(archive);
  std::vector<std::filesystem::path> written;
  try {
    store.transaction([&] {
      for (const auto& m : b.media) {
        const auto path = store.media_path(m.content_hash);
        if (!std::filesystem::exists(path)) {
          write_file_atomic(path, b.media_bytes.at(m.content_hash));
          written.push_back(path);
        }
        import_entity(store, m);
      }
      for (const auto& w : b.words) import_entity(store, w);
      for (const auto& p : b.productions) import_entity(store, p);
      for (const auto& e : b.exercises) import_entity(store, e);
      import_entity(store, b.child);
      import_entity(store, b.homework);
    });
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw;
  }
  return b.homework;
}

Homework import_bundle_file(Store& store, const std::filesystem::path& path) { return import_bundle(store, read_file(path)); }

std::string export_results(const std::vector<SessionResult>& results) {
  for (const auto& r : results) {
    if (!r.finished_at) {
      fail(ErrorCode::UnfinalizedResult, "result of session '" + r.session_id + "' is not finalized", {r.session_id});
    }
  }
  return Json{{"format_version", kResultsFormatVersion}, {"results", results}}.dump(2) + "\n";
}

std::vector<SessionResult> import_results(Store& store, std::string_view results_json) {
  Json doc;
  try {
    doc = Json::parse(results_json);
  } catch (const Json::exception& e) {
    fail(ErrorCode::MalformedLog, std::string("results file is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
    fail(ErrorCode::MalformedLog, "results file has no integer format_version");
  }
  if (doc["format_version"].get<std::int64_t>() != kResultsFormatVersion) {
    fail(ErrorCode::UnsupportedVersion, "results format_version " + doc["format_version"].dump() + " is not supported");
  }
  std::vector<SessionResult> results;
  for (const auto& j : doc.value("results", Json::array())) {
    try {
      results.push_back(parse_json<SessionResult>(j));
    } catch (const Error& e) {
      fail(ErrorCode::MalformedLog, std::string("result entry is malformed: ") + e.what());
    }
  }

  return store.transaction([&] {
    for (const auto& r : results) {
      const auto exercise = try_load<Exercise>(store, r.exercise_id);
      if (!exercise) {
        fail(ErrorCode::UnknownExercise, "result '" + r.session_id + "' names unknown exercise '" + r.exercise_id + "'",
             {r.exercise_id});
      }
      load<ChildProfile>(store, r.child_id);
      if (!r.finished_at) {
        fail(ErrorCode::UnfinalizedResult, "result of session '" + r.session_id + "' is not finalized", {r.session_id});
      }
      auto malformed = [&](const std::string& why) {
        fail(ErrorCode::MalformedLog, "result '" + r.session_id + "': " + why, {r.session_id});
      };
      if (r.item_count != static_cast<int>(exercise->items.size())) malformed("item_count differs from the exercise");
      if (r.target_sound != exercise->target_sound || r.difficulty != exercise->difficulty) {
        malformed("target sound or difficulty differs from the exercise");
      }

      // replay the log; the engine must reproduce it exactly
      Session replay;
      try {
        replay = engine::start(r.session_id, *exercise, r.child_id,
                               build_answer_key(*exercise, snapshot_for(store, *exercise)), {});
        for (const auto& o : r.outcomes) {
          if (o.result == OutcomeResult::timeout) {
            engine::expire(replay, *exercise);
          } else {
            engine::answer(replay, *exercise, o.choice.value_or(-1), o.elapsed_ms);
          }
        }
      } catch (const Error& e) {
        malformed(std::string("outcome log does not replay: ") + e.what());
      }
      if (replay.outcomes != r.outcomes) malformed("outcome log does not replay to the same outcomes");
      if (replay.phase != Phase::finished) malformed("outcome log ends before the session finished");
      if (replay.flowers != r.flowers) malformed("flower count differs from the log");
      const auto accuracy = compute_accuracy(r.outcomes, r.item_count);
      if (accuracy != r.accuracy) {
        fail(ErrorCode::AccuracyMismatch,
             "result '" + r.session_id + "' claims accuracy " + format_rational(r.accuracy) + " but the log gives " +
                 format_rational(accuracy),
             {r.session_id});
      }
      import_entity(store, r);
      record_result(store, r);
    }
    return results;
  });
}

}  // namespace logoped
