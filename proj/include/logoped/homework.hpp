#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logoped/clock.hpp"
#include "logoped/model.hpp"
#include "logoped/store.hpp"

namespace logoped {

inline constexpr int kRollingWindow = 5;

/// Errors: InvalidArgument (empty name or impaired_sounds).
ChildProfile add_child(Store& store, ChildProfile draft);
ChildProfile get_child(const Store& store, std::string_view id);
std::vector<ChildProfile> list_children(const Store& store);

/// Warning text when the child's age in `current_year` is outside 4-7.
std::optional<std::string> age_warning(const ChildProfile& child, int current_year);

/// Errors: NotFound, EmptyExerciseList.
Homework assign_homework(Store& store, std::string_view child_id, std::vector<std::string> exercise_ids,
                         const Clock& clock);
Homework get_homework(const Store& store, std::string_view id);
std::vector<Homework> list_homework(const Store& store, const std::optional<std::string>& child_id = std::nullopt);

/// Mean accuracy of the newest min(window_n, available) entries for `sound`
/// in a history ordered oldest first. Errors: InvalidArgument (window_n < 1).
std::optional<Rational> rolling_accuracy(const std::vector<ScoreEntry>& history, const SoundTag& sound, int window_n);

/// min(5, 1 + floor(accuracy * 5)); 1 when absent.
int difficulty_goal(const std::optional<Rational>& accuracy);

struct HomeworkPlan {
  SoundTag target;
  std::optional<Rational> accuracy;
  int difficulty_goal = 1;
  std::vector<std::string> exercise_ids;
  std::string trace;
};

/// The auto-generation policy as a pure function.
///
///   1. target: impaired sound (among those with at least one exercise)
///      with the lowest rolling accuracy; absent counts as 0; ties by symbol
///   2. d = difficulty_goal(accuracy)
///   3. up to k exercises for the target ordered by |difficulty - d|, then
///      least recently assigned to the child (never first), then id
///
/// `history` is oldest first. Errors: NoExercisesForImpairedSounds,
/// InvalidArgument (k < 1).
HomeworkPlan plan_homework(const ChildProfile& child, const std::vector<ScoreEntry>& history,
                           const std::vector<Exercise>& catalog, const std::vector<Homework>& past, int k);

/// Errors: NotFound, NoExercisesForImpairedSounds.
Homework auto_generate_homework(Store& store, std::string_view child_id, int k, const Clock& clock);

/// Appends a score entry for a finalized result; repeats are no-ops.
/// Errors: UnfinalizedResult.
void record_result(Store& store, const SessionResult& result);

/// The child's score entries ordered by (finished_at, session_id).
std::vector<ScoreEntry> score_history(const Store& store, std::string_view child_id);

}  // namespace logoped
