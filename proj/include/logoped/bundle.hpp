#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "logoped/model.hpp"
#include "logoped/store.hpp"

namespace logoped {

inline constexpr int kBundleFormatVersion = 1;
inline constexpr int kResultsFormatVersion = 1;

/// manifest.json for a homework: the homework, its child, every exercise
/// with the words and productions it uses embedded by value, and the media
/// list. Identical store contents give identical bytes.
/// Errors: NotFound, MissingMedia (details = hashes).
Json bundle_manifest(const Store& store, std::string_view homework_id);

/// ZIP archive with manifest.json followed by media/<hash> entries.
std::string export_bundle(const Store& store, std::string_view homework_id);
void export_bundle_file(const Store& store, std::string_view homework_id, const std::filesystem::path& out);

/// Verifies the whole archive before writing anything, then imports it in
/// one transaction; on any error the store is unchanged.
/// Errors: CorruptArchive, HashMismatch (details = archive path),
/// UnsupportedVersion, ImportConflict.
Homework import_bundle(Store& store, std::string_view archive);
Homework import_bundle_file(Store& store, const std::filesystem::path& path);

/// results.json text for finalized results. Errors: UnfinalizedResult.
std::string export_results(const std::vector<SessionResult>& results);

/// Replays every outcome log against the local exercise, recomputes
/// accuracy and records the results. All or nothing.
/// Errors: UnsupportedVersion, UnknownExercise, NotFound (child),
/// UnfinalizedResult, MalformedLog, AccuracyMismatch, ImportConflict.
std::vector<SessionResult> import_results(Store& store, std::string_view results_json);

}  // namespace logoped
