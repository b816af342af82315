#include "logoped/homework.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "logoped/error.hpp"
#include "logoped/repository.hpp"

namespace logoped {

ChildProfile add_child(Store& store, ChildProfile draft) {
  if (draft.name.empty()) fail(ErrorCode::InvalidArgument, "child name is required");
  if (draft.impaired_sounds.empty()) fail(ErrorCode::InvalidArgument, "at least one impaired sound is required");
  return store.transaction([&] {
    draft.id = store.next_id("child", "c");
    draft.version = 0;
    save(store, draft);
    return draft;
  });
}

ChildProfile get_child(const Store& store, std::string_view id) { return load<ChildProfile>(store, id); }

std::vector<ChildProfile> list_children(const Store& store) { return load_all<ChildProfile>(store); }

std::optional<std::string> age_warning(const ChildProfile& child, int current_year) {
  const int age = current_year - child.birth_year;
  if (age >= 4 && age <= 7) return std::nullopt;
  return "child age " + std::to_string(age) + " is outside the expected 4-7 range";
}

Homework assign_homework(Store& store, std::string_view child_id, std::vector<std::string> exercise_ids,
                         const Clock& clock) {
  return store.transaction([&] {
    load<ChildProfile>(store, child_id);
    if (exercise_ids.empty()) fail(ErrorCode::EmptyExerciseList, "homework needs at least one exercise");
    for (const auto& id : exercise_ids) load<Exercise>(store, id);
    Homework hw;
    hw.id = store.next_id("homework", "h");
    hw.child_id = std::string(child_id);
    hw.exercise_ids = std::move(exercise_ids);
    hw.origin = HomeworkOrigin::manual;
    hw.assigned_at = clock();
    save(store, hw);
    return hw;
  });
}

Homework get_homework(const Store& store, std::string_view id) { return load<Homework>(store, id); }

std::vector<Homework> list_homework(const Store& store, const std::optional<std::string>& child_id) {
  return load_all<Homework>(store, child_id);
}

std::optional<Rational> rolling_accuracy(const std::vector<ScoreEntry>& history, const SoundTag& sound, int window_n) {
  if (window_n < 1) fail(ErrorCode::InvalidArgument, "window must be at least 1");
  Rational sum = 0;
  int n = 0;
  for (auto it = history.rbegin(); it != history.rend() && n < window_n; ++it) {
    if (it->target_sound != sound) continue;
    sum += it->accuracy;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / Rational(n);
}

int difficulty_goal(const std::optional<Rational>& accuracy) {
  if (!accuracy) return 1;
  const Rational scaled = *accuracy * Rational(5);
  // accuracy is never negative, so integer division is floor
  const auto floor = scaled.numerator() / scaled.denominator();
  return static_cast<int>(std::clamp<std::int64_t>(1 + floor, 1, 5));
}

HomeworkPlan plan_homework(const ChildProfile& child, const std::vector<ScoreEntry>& history,
                           const std::vector<Exercise>& catalog, const std::vector<Homework>& past, int k) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be at least 1");

  std::optional<SoundTag> target;
  std::optional<Rational> target_acc;
  for (const auto& sound : child.impaired_sounds) {  // ascending symbol order
    const bool has_exercise =
        std::any_of(catalog.begin(), catalog.end(), [&](const Exercise& e) { return e.target_sound == sound; });
    if (!has_exercise) continue;
    const auto acc = rolling_accuracy(history, sound, kRollingWindow);
    if (!target || acc.value_or(0) < target_acc.value_or(0)) {
      target = sound;
      target_acc = acc;
    }
  }
  if (!target) {
    fail(ErrorCode::NoExercisesForImpairedSounds, "no exercise targets any impaired sound of child '" + child.id + "'",
         {child.id});
  }
  const int d = difficulty_goal(target_acc);

  std::map<std::string, Timestamp, std::less<>> last_assigned;
  for (const auto& hw : past) {
    if (hw.child_id != child.id) continue;
    for (const auto& id : hw.exercise_ids) {
      auto [it, inserted] = last_assigned.emplace(id, hw.assigned_at);
      if (!inserted) it->second = std::max(it->second, hw.assigned_at);
    }
  }

  struct Candidate {
    int distance;
    bool assigned;
    Timestamp last;
    const Exercise* exercise;
  };
  std::vector<Candidate> candidates;
  for (const auto& e : catalog) {
    if (e.target_sound != *target) continue;
    const auto it = last_assigned.find(e.id);
    candidates.push_back({std::abs(e.difficulty - d), it != last_assigned.end(),
                          it != last_assigned.end() ? it->second : Timestamp{}, &e});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.distance, a.assigned, a.last, a.exercise->id) <
           std::tie(b.distance, b.assigned, b.last, b.exercise->id);
  });
  if (candidates.size() > static_cast<std::size_t>(k)) candidates.resize(static_cast<std::size_t>(k));

  HomeworkPlan plan{*target, target_acc, d, {}, {}};
  for (const auto& c : candidates) plan.exercise_ids.push_back(c.exercise->id);

  std::ostringstream trace;
  trace << "target=" << target->symbol() << " accuracy=" << (target_acc ? format_rational(*target_acc) : "absent")
        << " window=" << kRollingWindow << " difficulty_goal=" << d << " selected=";
  for (std::size_t i = 0; i < plan.exercise_ids.size(); ++i) trace << (i ? "," : "") << plan.exercise_ids[i];
  plan.trace = trace.str();
  return plan;
}

Homework auto_generate_homework(Store& store, std::string_view child_id, int k, const Clock& clock) {
  return store.transaction([&] {
    const auto child = load<ChildProfile>(store, child_id);
    const auto plan =
        plan_homework(child, score_history(store, child_id), load_all<Exercise>(store), load_all<Homework>(store, child.id), k);
    Homework hw;
    hw.id = store.next_id("homework", "h");
    hw.child_id = child.id;
    hw.exercise_ids = plan.exercise_ids;
    hw.origin = HomeworkOrigin::auto_generated;
    hw.assigned_at = clock();
    hw.policy_trace = plan.trace;
    save(store, hw);
    return hw;
  });
}

void record_result(Store& store, const SessionResult& result) {
  if (!result.finished_at) {
    fail(ErrorCode::UnfinalizedResult, "result of session '" + result.session_id + "' is not finalized",
         {result.session_id});
  }
  store.transaction([&] {
    if (store.exists(EntityTraits<ScoreEntry>::kind, result.session_id)) return;
    ScoreEntry entry;
    entry.session_id = result.session_id;
    entry.child_id = result.child_id;
    entry.exercise_id = result.exercise_id;
    entry.finished_at = *result.finished_at;
    entry.target_sound = result.target_sound;
    entry.difficulty = result.difficulty;
    entry.accuracy = result.accuracy;
    save(store, entry);
  });
}

std::vector<ScoreEntry> score_history(const Store& store, std::string_view child_id) {
  auto entries = load_all<ScoreEntry>(store, std::string(child_id));
  std::stable_sort(entries.begin(), entries.end(), [](const ScoreEntry& a, const ScoreEntry& b) {
    return std::tie(a.finished_at, a.session_id) < std::tie(b.finished_at, b.session_id);
  });
  return entries;
}

}  // namespace logoped
