#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "logoped/error.hpp"
#include "logoped/model.hpp"
#include "logoped/store.hpp"

namespace logoped {

inline constexpr int kMinDifficulty = 1;
inline constexpr int kMaxDifficulty = 5;
inline constexpr int kMinResponseWindowS = 1;
inline constexpr int kMaxResponseWindowS = 10;
inline constexpr std::size_t kMinIntruderItems = 3;

/// The catalog entries an exercise touches. Validation and answer keys are
/// computed from a snapshot, so they are pure functions of it; a transfer
/// bundle carries exactly this data.
struct CatalogSnapshot {
  std::map<std::string, WordEntry, std::less<>> words;
  std::map<std::string, VocalProduction, std::less<>> productions;
  std::map<std::string, MediaAsset, std::less<>> media;

  const WordEntry* word(std::string_view id) const;
  const VocalProduction* production(std::string_view id) const;
  const MediaAsset* asset(std::string_view id) const;
};

/// Loads every word, production and media asset `exercise` references
/// (missing ones are simply absent from the snapshot).
CatalogSnapshot snapshot_for(const Store& store, const Exercise& exercise);
void extend_snapshot(const Store& store, const Exercise& exercise, CatalogSnapshot& snapshot);

/// Whether an item is a two-member pair (paronym production or word pair).
bool is_pair_item(const ExerciseItem& item, const CatalogSnapshot& catalog);

/// 0/1 index of the pair member carrying `sound`, in stored order (before
/// `swapped`); nullopt when zero or both members carry it.
std::optional<int> sound_bearing_member(const ExerciseItem& item, const SoundTag& sound,
                                        const CatalogSnapshot& catalog);

/// Whether the referenced entry carries the exercise's target sound.
bool item_contains_target(const ExerciseItem& item, const SoundTag& sound, const CatalogSnapshot& catalog);

/// Every broken invariant, ordered by exercise field then item index.
/// Empty means the exercise may be persisted.
std::vector<Violation> validate_exercise(const Exercise& exercise, const CatalogSnapshot& catalog);

/// Persists a validated exercise with a fresh id.
/// Errors: DanglingRef (details = missing ids), ValidationFailed.
Exercise create_exercise(Store& store, Exercise draft);

Exercise get_exercise(const Store& store, std::string_view id);
std::vector<Exercise> list_exercises(const Store& store);

/// Deep copy under a fresh id. Errors: NotFound, DifficultyOutOfRange.
Exercise clone_exercise_with_difficulty(Store& store, std::string_view id, int new_difficulty);

/// Refuses with ReferencedElsewhere while homework or sessions use it.
void delete_exercise(Store& store, std::string_view id);

}  // namespace logoped
