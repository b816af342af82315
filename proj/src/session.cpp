#include "logoped/session.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "logoped/error.hpp"
#include "logoped/homework.hpp"
#include "logoped/media.hpp"
#include "logoped/repository.hpp"

namespace logoped {

std::int64_t deadline_ms(const ExerciseItem& item) { return static_cast<std::int64_t>(item.response_window_s) * 1000; }

std::vector<AnswerKey> build_answer_key(const Exercise& exercise, const CatalogSnapshot& catalog) {
  std::vector<AnswerKey> keys;
  keys.reserve(exercise.items.size());
  for (const auto& item : exercise.items) {
    AnswerKey key;
    if (is_pair_item(item, catalog)) {
      const auto bearing = sound_bearing_member(item, exercise.target_sound, catalog);
      if (!bearing) fail(ErrorCode::ExerciseInvalid, "pair item has no unique sound-bearing member");
      const int shown = item.swapped ? 1 - *bearing : *bearing;
      key = {shown + 1, 1, 2};
    } else {
      switch (exercise.type) {
        case ExerciseType::pronunciation:
        case ExerciseType::onomatopoeia:
        case ExerciseType::progressive_addition:
          key = {1, 0, 1};
          break;
        case ExerciseType::intruder_recognition:
          key = {item.contains_target ? 0 : 1, 0, 1};
          break;
        default:
          key = {item.contains_target ? 1 : 0, 0, 1};
          break;
      }
    }
    keys.push_back(key);
  }
  return keys;
}

namespace engine {

namespace {

void require_active(const Session& s) {
  if (s.phase == Phase::finished) fail(ErrorCode::SessionFinished, "session '" + s.id + "' is finished", {s.id});
}

ItemOutcome record(Session& s, const Exercise& exercise, ItemOutcome outcome) {
  const Phase phase = s.phase;
  outcome.phase = phase;
  if (outcome.result == OutcomeResult::correct) ++s.flowers;
  s.outcomes.push_back(outcome);
  ++s.cursor;
  if (phase == Phase::main) {
    if (outcome.result != OutcomeResult::correct) s.pending_retry.push_back(outcome.item_index);
    if (s.cursor == static_cast<int>(exercise.items.size())) {
      s.cursor = 0;
      s.phase = s.pending_retry.empty() ? Phase::finished : Phase::retry;
    }
  } else if (s.cursor == static_cast<int>(s.pending_retry.size())) {
    s.cursor = 0;
    s.phase = Phase::finished;
  }
  return outcome;
}

}  // namespace

Session start(std::string id, const Exercise& exercise, std::string child_id, std::vector<AnswerKey> answer_key,
              Timestamp started_at) {
  if (exercise.items.empty()) fail(ErrorCode::ExerciseInvalid, "exercise has no items");
  if (answer_key.size() != exercise.items.size()) fail(ErrorCode::ExerciseInvalid, "answer key does not match items");
  Session s;
  s.id = std::move(id);
  s.exercise_id = exercise.id;
  s.child_id = std::move(child_id);
  s.answer_key = std::move(answer_key);
  s.started_at = started_at;
  return s;
}

int current_item(const Session& s) {
  require_active(s);
  return s.phase == Phase::main ? s.cursor : s.pending_retry.at(static_cast<std::size_t>(s.cursor));
}

ItemOutcome answer(Session& s, const Exercise& exercise, int choice, std::int64_t elapsed_ms) {
  const int index = current_item(s);
  const auto& item = exercise.items.at(static_cast<std::size_t>(index));
  const auto& key = s.answer_key.at(static_cast<std::size_t>(index));
  if (elapsed_ms < 0) fail(ErrorCode::InvalidArgument, "elapsed_ms must be non-negative");
  if (elapsed_ms >= deadline_ms(item)) {
    fail(ErrorCode::ElapsedExceedsWindow, "answer after " + std::to_string(elapsed_ms) + " ms on a " +
                                              std::to_string(deadline_ms(item)) + " ms window; expire the item");
  }
  if (choice < key.min_choice || choice > key.max_choice) {
    fail(ErrorCode::InvalidChoice, "choice " + std::to_string(choice) + " outside [" + std::to_string(key.min_choice) +
                                       ", " + std::to_string(key.max_choice) + "]");
  }
  ItemOutcome o;
  o.item_index = index;
  o.choice = choice;
  o.elapsed_ms = elapsed_ms;
  o.result = choice == key.expected ? OutcomeResult::correct : OutcomeResult::incorrect;
  return record(s, exercise, o);
}

ItemOutcome expire(Session& s, const Exercise& exercise) {
  const int index = current_item(s);
  ItemOutcome o;
  o.item_index = index;
  o.elapsed_ms = deadline_ms(exercise.items.at(static_cast<std::size_t>(index)));
  o.result = OutcomeResult::timeout;
  return record(s, exercise, o);
}

SessionResult result(const Session& s, const Exercise& exercise, Timestamp finished_at) {
  if (s.phase != Phase::finished) {
    fail(ErrorCode::SessionNotFinished, "session '" + s.id + "' is still in phase " + to_string(s.phase), {s.id});
  }
  SessionResult r;
  r.session_id = s.id;
  r.exercise_id = s.exercise_id;
  r.child_id = s.child_id;
  r.finished_at = finished_at;
  r.item_count = static_cast<int>(exercise.items.size());
  r.accuracy = compute_accuracy(s.outcomes, r.item_count);
  r.flowers = s.flowers;
  r.target_sound = exercise.target_sound;
  r.difficulty = exercise.difficulty;
  r.outcomes = s.outcomes;
  return r;
}

}  // namespace engine

Rational compute_accuracy(const std::vector<ItemOutcome>& outcomes, int item_count) {
  if (item_count < 1) fail(ErrorCode::MalformedLog, "item count must be positive");
  std::vector<bool> seen(static_cast<std::size_t>(item_count), false);
  std::int64_t correct = 0;
  for (const auto& o : outcomes) {
    if (o.item_index < 0 || o.item_index >= item_count) {
      fail(ErrorCode::MalformedLog, "outcome for item " + std::to_string(o.item_index) + " is out of range");
    }
    if (o.phase == Phase::finished) fail(ErrorCode::MalformedLog, "outcome phase must be main or retry");
    if ((o.result == OutcomeResult::timeout) != !o.choice.has_value()) {
      fail(ErrorCode::MalformedLog, "timeout outcomes must carry no choice and answers must carry one");
    }
    if (o.phase != Phase::main) continue;
    if (seen[static_cast<std::size_t>(o.item_index)]) {
      fail(ErrorCode::MalformedLog, "item " + std::to_string(o.item_index) + " answered twice in the main phase");
    }
    seen[static_cast<std::size_t>(o.item_index)] = true;
    if (o.result == OutcomeResult::correct) ++correct;
  }
  return Rational(correct, item_count);
}

void to_json(Json& j, const PresentedEntry& v) {
  j = Json{{"text", v.text}, {"audio", v.audio}};
  if (v.image) j["image"] = *v.image;
}

void to_json(Json& j, const ItemPresentation& v) {
  j = Json{{"session_id", v.session_id},       {"item_index", v.item_index},   {"phase", to_string(v.phase)},
           {"position", v.position},           {"phase_length", v.phase_length}, {"deadline_ms", v.deadline_ms},
           {"entries", v.entries},             {"min_choice", v.min_choice},   {"max_choice", v.max_choice},
           {"flowers", v.flowers}};
}

Json session_view(const Session& s) {
  Json j = s;
  j.erase("answer_key");
  return j;
}

namespace {

/// Per-process registry of sessions with a mutation in flight.
class SessionGuard {
 public:
  explicit SessionGuard(std::string id) : id_(std::move(id)) {
    std::lock_guard lock(mutex());
    if (!active().insert(id_).second) {
      fail(ErrorCode::SessionBusy, "session '" + id_ + "' is handling another event", {id_});
    }
  }
  ~SessionGuard() {
    std::lock_guard lock(mutex());
    active().erase(id_);
  }
  SessionGuard(const SessionGuard&) = delete;
  SessionGuard& operator=(const SessionGuard&) = delete;

 private:
  static std::mutex& mutex() {
    static std::mutex m;
    return m;
  }
  static std::set<std::string>& active() {
    static std::set<std::string> s;
    return s;
  }
  std::string id_;
};

template <class F>
ItemOutcome mutate(Store& store, std::string_view session_id, F&& step) {
  SessionGuard guard{std::string(session_id)};
  return store.transaction([&] {
    auto session = load<Session>(store, session_id);
    const auto exercise = load<Exercise>(store, session.exercise_id);
    auto outcome = step(session, exercise);
    save(store, session);
    return outcome;
  });
}

PresentedEntry entry_for_word(const WordEntry& w) { return {w.text, w.audio, w.image}; }

}  // namespace

Session start_session(Store& store, std::string_view exercise_id, std::string_view child_id, const Clock& clock) {
  return store.transaction([&] {
    const auto exercise = load<Exercise>(store, exercise_id);
    load<ChildProfile>(store, child_id);
    const auto catalog = snapshot_for(store, exercise);
    auto violations = validate_exercise(exercise, catalog);
    if (!violations.empty()) {
      fail(ErrorCode::ExerciseInvalid, "exercise '" + exercise.id + "' no longer validates: " + violations[0].code,
           {exercise.id});
    }
    const auto started = clock();
    const auto seq = store.next_id("session-seq", "");
    const auto id = "s-" + sha256_hex(exercise.id + "|" + std::string(child_id) + "|" + format_timestamp(started) +
                                      "|" + seq)
                               .substr(0, 16);
    auto session = engine::start(id, exercise, std::string(child_id), build_answer_key(exercise, catalog), started);
    save(store, session);
    return session;
  });
}

Session get_session(const Store& store, std::string_view session_id) { return load<Session>(store, session_id); }

ItemPresentation present_next(const Store& store, std::string_view session_id) {
  return store.read([&] {
    const auto session = load<Session>(store, session_id);
    const int index = engine::current_item(session);
    const auto exercise = load<Exercise>(store, session.exercise_id);
    const auto& item = exercise.items.at(static_cast<std::size_t>(index));
    const auto& key = session.answer_key.at(static_cast<std::size_t>(index));

    ItemPresentation p;
    p.session_id = session.id;
    p.item_index = index;
    p.phase = session.phase;
    p.position = session.cursor;
    p.phase_length =
        static_cast<int>(session.phase == Phase::main ? exercise.items.size() : session.pending_retry.size());
    p.deadline_ms = deadline_ms(item);
    p.min_choice = key.min_choice;
    p.max_choice = key.max_choice;
    p.flowers = session.flowers;
    if (item.ref.kind == RefKind::word) {
      p.entries.push_back(entry_for_word(load<WordEntry>(store, item.ref.id)));
      if (item.pair_word) p.entries.push_back(entry_for_word(load<WordEntry>(store, *item.pair_word)));
    } else {
      const auto prod = load<VocalProduction>(store, item.ref.id);
      if (prod.kind == ProductionKind::paronym_pair) {
        for (const auto& part : prod.parts) p.entries.push_back({part, prod.audio, std::nullopt});
      } else {
        p.entries.push_back({prod.text, prod.audio, std::nullopt});
      }
    }
    if (item.swapped && p.entries.size() == 2) std::swap(p.entries[0], p.entries[1]);
    return p;
  });
}

ItemOutcome submit_answer(Store& store, std::string_view session_id, int choice, std::int64_t elapsed_ms) {
  return mutate(store, session_id, [&](Session& s, const Exercise& ex) {
    return engine::answer(s, ex, choice, elapsed_ms);
  });
}

ItemOutcome expire_item(Store& store, std::string_view session_id) {
  return mutate(store, session_id, [&](Session& s, const Exercise& ex) { return engine::expire(s, ex); });
}

SessionResult finalize_session(Store& store, std::string_view session_id, const Clock& clock) {
  SessionGuard guard{std::string(session_id)};
  return store.transaction([&] {
    auto session = load<Session>(store, session_id);
    if (session.finalized) return load<SessionResult>(store, session.id);
    const auto exercise = load<Exercise>(store, session.exercise_id);
    auto result = engine::result(session, exercise, clock());
    session.finalized = true;
    save(store, session);
    save(store, result);
    record_result(store, result);
    return result;
  });
}

std::vector<SessionResult> list_results(const Store& store, const std::optional<std::string>& child_id) {
  return load_all<SessionResult>(store, child_id);
}

}  // namespace logoped
