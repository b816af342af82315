#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logoped/clock.hpp"
#include "logoped/exercise.hpp"
#include "logoped/model.hpp"
#include "logoped/store.hpp"

namespace logoped {

// Timed session runtime. The engine never owns a clock for answers: callers
// report elapsed_ms and the engine checks it against the item's window,
// which is the half-open interval [0, window).
//
// Phases run main -> retry -> finished (retry skipped when everything in
// main was correct). Every main-phase item answered wrongly or timed out is
// shown once more in the retry phase, in original order. Retry outcomes earn
// flowers but never change accuracy.
//
// Choices:
//   pair items (paronym pair, word pair)  1 or 2, the pennant / picture
//                                         position of the sound-bearing word
//   sound_recognition                     1 = "contains the sound", 0 = not
//   intruder_recognition                  1 = "this is the intruder", 0 = not
//   pronunciation, onomatopoeia,          1 = imitation judged correct,
//   progressive_addition                  0 = judged wrong (external mark)

/// Resolves the expected answer of every item from the catalog.
std::vector<AnswerKey> build_answer_key(const Exercise& exercise, const CatalogSnapshot& catalog);

std::int64_t deadline_ms(const ExerciseItem& item);

/// Pure state machine over a Session value.
namespace engine {

Session start(std::string id, const Exercise& exercise, std::string child_id, std::vector<AnswerKey> answer_key,
              Timestamp started_at);

/// Index into exercise.items of the item currently shown.
/// Throws Error(SessionFinished).
int current_item(const Session& session);

/// Errors: SessionFinished, ElapsedExceedsWindow, InvalidChoice,
/// InvalidArgument (negative elapsed).
ItemOutcome answer(Session& session, const Exercise& exercise, int choice, std::int64_t elapsed_ms);

/// Records a timeout at the full window. Errors: SessionFinished.
ItemOutcome expire(Session& session, const Exercise& exercise);

/// Errors: SessionNotFinished.
SessionResult result(const Session& session, const Exercise& exercise, Timestamp finished_at);

}  // namespace engine

/// Main-phase correct / item_count, exact. Throws Error(MalformedLog) when
/// item_count < 1, an index is out of range, a main-phase index repeats, or
/// an outcome contradicts itself (timeout with a choice, answer without one).
Rational compute_accuracy(const std::vector<ItemOutcome>& outcomes, int item_count);

struct PresentedEntry {
  std::string text;
  std::string audio;
  std::optional<std::string> image;
};

struct ItemPresentation {
  std::string session_id;
  int item_index = 0;
  Phase phase = Phase::main;
  int position = 0;       // cursor within the phase
  int phase_length = 0;   // items in this phase
  std::int64_t deadline_ms = 0;
  /// Display order: one entry, or two for pairs (after `swapped`).
  std::vector<PresentedEntry> entries;
  int min_choice = 0;
  int max_choice = 1;
  int flowers = 0;
};

void to_json(Json& j, const PresentedEntry& v);
void to_json(Json& j, const ItemPresentation& v);
/// Session as shown to clients (no answer key).
Json session_view(const Session& session);

// Store-backed operations. Mutations of one session are serialized: a
// second concurrent mutation of the same session fails with SessionBusy.

/// Errors: NotFound (exercise or child), ExerciseInvalid.
Session start_session(Store& store, std::string_view exercise_id, std::string_view child_id, const Clock& clock);
Session get_session(const Store& store, std::string_view session_id);
/// Idempotent until the cursor moves. Errors: NotFound, SessionFinished.
ItemPresentation present_next(const Store& store, std::string_view session_id);
ItemOutcome submit_answer(Store& store, std::string_view session_id, int choice, std::int64_t elapsed_ms);
ItemOutcome expire_item(Store& store, std::string_view session_id);
/// Persists the result and appends the score history; repeated calls
/// return the stored result. Errors: SessionNotFinished.
SessionResult finalize_session(Store& store, std::string_view session_id, const Clock& clock);

std::vector<SessionResult> list_results(const Store& store, const std::optional<std::string>& child_id = std::nullopt);

}  // namespace logoped
