#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "logoped/history.hpp"
#include "logoped/homework.hpp"
#include "logoped/session.hpp"
#include "support.hpp"

using namespace logoped;
using namespace logoped::testing;

namespace {

SoundTag tag(const char* s) { return SoundTag::parse(s); }

ScoreEntry entry(const char* sound, Rational acc, int d = 0, const char* child = "c1", int difficulty = 1) {
  ScoreEntry e;
  e.session_id = "s" + std::to_string(d);
  e.child_id = child;
  e.exercise_id = "e1";
  e.finished_at = day(d);
  e.target_sound = tag(sound);
  e.difficulty = difficulty;
  e.accuracy = acc;
  return e;
}

Exercise ex(const std::string& id, const char* sound, int difficulty) {
  Exercise e;
  e.id = id;
  e.target_sound = tag(sound);
  e.difficulty = difficulty;
  return e;
}

ChildProfile kid(std::set<SoundTag> sounds) {
  ChildProfile c;
  c.id = "c1";
  c.name = "Ana";
  c.birth_year = 2020;
  c.impaired_sounds = std::move(sounds);
  return c;
}

}  // namespace

TEST(RollingAccuracy, Examples) {
  const std::vector<ScoreEntry> h = {entry("S", Rational(1), 0), entry("R", Rational(0), 1),
                                     entry("S", Rational(1, 2), 2), entry("S", Rational(1, 2), 3)};
  EXPECT_EQ(rolling_accuracy(h, tag("S"), 5), Rational(2, 3));
  EXPECT_EQ(rolling_accuracy(h, tag("S"), 1), Rational(1, 2));
  EXPECT_EQ(rolling_accuracy(h, tag("S"), 2), Rational(1, 2));
  EXPECT_EQ(rolling_accuracy(h, tag("R"), 5), Rational(0));
  EXPECT_FALSE(rolling_accuracy(h, tag("Z"), 5).has_value());
  EXPECT_EQ(code_of([&] { rolling_accuracy(h, tag("S"), 0); }), ErrorCode::InvalidArgument);
}

TEST(RollingAccuracy, WideWindowIsAllTimeMean) {
  std::mt19937 rng(3);
  for (int round = 0; round < 200; ++round) {
    std::vector<ScoreEntry> h;
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      h.push_back(entry(rng() % 2 ? "S" : "R", Rational(static_cast<int>(rng() % 5), 4), i));
    }
    Rational sum(0);
    int count = 0;
    for (const auto& e : h) {
      if (e.target_sound == tag("S")) {
        sum += e.accuracy;
        ++count;
      }
    }
    const auto got = rolling_accuracy(h, tag("S"), 100);
    if (count == 0) {
      EXPECT_FALSE(got.has_value());
    } else {
      EXPECT_EQ(got, sum / count);
    }
  }
}

TEST(DifficultyGoal, Bands) {
  EXPECT_EQ(difficulty_goal(std::nullopt), 1);
  EXPECT_EQ(difficulty_goal(Rational(0)), 1);
  EXPECT_EQ(difficulty_goal(Rational(19, 100)), 1);
  EXPECT_EQ(difficulty_goal(Rational(1, 5)), 2);
  EXPECT_EQ(difficulty_goal(Rational(2, 5)), 3);
  EXPECT_EQ(difficulty_goal(Rational(4, 5)), 5);
  EXPECT_EQ(difficulty_goal(Rational(1)), 5);
  int prev = 1;
  for (int i = 0; i <= 100; ++i) {
    const int d = difficulty_goal(Rational(i, 100));
    EXPECT_GE(d, prev);
    prev = d;
  }
}

TEST(PlanHomework, LowestAccuracySoundWins) {
  const auto c = kid({tag("S"), tag("R")});
  const std::vector<ScoreEntry> h = {entry("S", Rational(9, 10), 0), entry("R", Rational(2, 5), 1)};
  const std::vector<Exercise> cat = {ex("e1", "S", 5), ex("e2", "R", 1), ex("e3", "R", 3), ex("e4", "R", 4),
                                     ex("e5", "R", 2)};
  const auto plan = plan_homework(c, h, cat, {}, 3);
  EXPECT_EQ(plan.target, tag("R"));
  EXPECT_EQ(plan.difficulty_goal, 3);
  EXPECT_EQ(plan.exercise_ids, (std::vector<std::string>{"e3", "e4", "e5"}));
  EXPECT_EQ(plan.trace, "target=R accuracy=2/5 window=5 difficulty_goal=3 selected=e3,e4,e5");
}

TEST(PlanHomework, FreshChildTakesFirstSoundAtLevelOne) {
  const auto c = kid({tag("Z"), tag("R"), tag("S")});
  const std::vector<Exercise> cat = {ex("e1", "S", 2), ex("e2", "R", 3), ex("e3", "R", 1), ex("e4", "Z", 1)};
  const auto plan = plan_homework(c, {}, cat, {}, 5);
  EXPECT_EQ(plan.target, tag("R"));
  EXPECT_FALSE(plan.accuracy.has_value());
  EXPECT_EQ(plan.difficulty_goal, 1);
  EXPECT_EQ(plan.exercise_ids, (std::vector<std::string>{"e3", "e2"}));
  EXPECT_EQ(plan.trace, "target=R accuracy=absent window=5 difficulty_goal=1 selected=e3,e2");
}

TEST(PlanHomework, LeastRecentlyAssignedBreaksTies) {
  const auto c = kid({tag("S")});
  const std::vector<Exercise> cat = {ex("e1", "S", 1), ex("e2", "S", 1), ex("e3", "S", 1), ex("e4", "S", 1)};
  Homework old;
  old.child_id = "c1";
  old.exercise_ids = {"e1", "e2"};
  old.assigned_at = day(1);
  Homework newer = old;
  newer.exercise_ids = {"e1"};
  newer.assigned_at = day(4);
  Homework other_child = old;
  other_child.child_id = "c2";
  other_child.exercise_ids = {"e3"};
  const auto plan = plan_homework(c, {}, cat, {old, newer, other_child}, 4);
  EXPECT_EQ(plan.exercise_ids, (std::vector<std::string>{"e3", "e4", "e2", "e1"}));
}

TEST(PlanHomework, Errors) {
  const auto c = kid({tag("R")});
  EXPECT_EQ(code_of([&] { plan_homework(c, {}, {ex("e1", "S", 1)}, {}, 3); }),
            ErrorCode::NoExercisesForImpairedSounds);
  EXPECT_EQ(code_of([&] { plan_homework(c, {}, {ex("e1", "R", 1)}, {}, 0); }), ErrorCode::InvalidArgument);
  // A sound with no exercises is skipped even when it has the lowest accuracy.
  const auto two = kid({tag("R"), tag("S")});
  const auto plan = plan_homework(two, {entry("S", Rational(1), 0)}, {ex("e1", "S", 1)}, {}, 3);
  EXPECT_EQ(plan.target, tag("S"));
}

TEST(PlanHomework, MatchesBruteForceOracle) {
  const char* sounds[] = {"R", "S", "Z", "L", "Ș"};
  std::mt19937 rng(17);
  for (int round = 0; round < 300; ++round) {
    std::set<SoundTag> impaired;
    for (const char* s : sounds) {
      if (rng() % 2) impaired.insert(tag(s));
    }
    if (impaired.empty()) impaired.insert(tag("R"));
    const auto c = kid(impaired);
    std::vector<Exercise> cat;
    const int ne = 1 + static_cast<int>(rng() % 15);
    for (int i = 0; i < ne; ++i) {
      char id[8];
      std::snprintf(id, sizeof id, "e%03d", i);
      cat.push_back(ex(id, sounds[rng() % 5], 1 + static_cast<int>(rng() % 5)));
    }
    std::vector<ScoreEntry> h;
    const int nh = static_cast<int>(rng() % 20);
    for (int i = 0; i < nh; ++i) h.push_back(entry(sounds[rng() % 5], Rational(static_cast<int>(rng() % 6), 5), i));
    std::vector<Homework> past;
    for (int i = 0; i < static_cast<int>(rng() % 4); ++i) {
      Homework hw;
      hw.child_id = "c1";
      hw.assigned_at = day(i, static_cast<int>(rng() % 100));
      hw.exercise_ids.push_back(cat[rng() % cat.size()].id);
      past.push_back(hw);
    }
    const int k = 1 + static_cast<int>(rng() % 4);

    // Oracle: recount every sound's newest five, scan for the minimum.
    std::optional<std::pair<Rational, std::string>> best;
    std::optional<Rational> best_acc;
    for (const auto& s : impaired) {
      if (std::none_of(cat.begin(), cat.end(), [&](const Exercise& e) { return e.target_sound == s; })) continue;
      std::vector<Rational> mine;
      for (auto it = h.rbegin(); it != h.rend() && mine.size() < 5; ++it) {
        if (it->target_sound == s) mine.push_back(it->accuracy);
      }
      std::optional<Rational> acc;
      if (!mine.empty()) {
        Rational sum(0);
        for (const auto& a : mine) sum += a;
        acc = sum / static_cast<std::int64_t>(mine.size());
      }
      const std::pair<Rational, std::string> key{acc.value_or(Rational(0)), s.symbol()};
      if (!best || key < *best) {
        best = key;
        best_acc = acc;
      }
    }
    if (!best) {
      EXPECT_EQ(code_of([&] { plan_homework(c, h, cat, past, k); }), ErrorCode::NoExercisesForImpairedSounds);
      continue;
    }
    int d = 1;
    if (best_acc) {
      while (d < 5 && Rational(d, 5) <= *best_acc) ++d;
    }
    std::vector<std::tuple<int, int, Timestamp, std::string>> keyed;
    for (const auto& e : cat) {
      if (e.target_sound.symbol() != best->second) continue;
      std::optional<Timestamp> last;
      for (const auto& hw : past) {
        if (std::find(hw.exercise_ids.begin(), hw.exercise_ids.end(), e.id) != hw.exercise_ids.end()) {
          if (!last || hw.assigned_at > *last) last = hw.assigned_at;
        }
      }
      keyed.emplace_back(std::abs(e.difficulty - d), last ? 1 : 0, last.value_or(Timestamp{}), e.id);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::string> expected;
    for (std::size_t i = 0; i < keyed.size() && i < static_cast<std::size_t>(k); ++i) {
      expected.push_back(std::get<3>(keyed[i]));
    }
    const auto plan = plan_homework(c, h, cat, past, k);
    EXPECT_EQ(plan.target.symbol(), best->second);
    EXPECT_EQ(plan.difficulty_goal, d);
    EXPECT_EQ(plan.exercise_ids, expected);
    EXPECT_EQ(plan.trace, plan_homework(c, h, cat, past, k).trace);
  }
}

TEST(Homework, ChildrenAndManualAssignment) {
  World w;
  EXPECT_EQ(code_of([&] { w.child({}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { w.child({"R"}, ""); }), ErrorCode::InvalidArgument);
  const auto c = w.child({"R", "S"});
  EXPECT_EQ(get_child(w.store(), c.id), c);
  EXPECT_FALSE(age_warning(c, 2026).has_value());
  EXPECT_TRUE(age_warning(c, 2030).has_value());
  EXPECT_TRUE(age_warning(c, 2023).has_value());

  const auto rac = w.word("rac");
  const auto rama = w.word("ramă");
  const auto e1 = create_exercise(w.store(), w.draft(ExerciseType::sound_recognition, "R", {w.item(rac, "R")}));
  const auto e2 = create_exercise(w.store(), w.draft(ExerciseType::sound_recognition, "R", {w.item(rama, "R")}));
  const auto hw = assign_homework(w.store(), c.id, {e2.id, e1.id}, fixed_clock(day(4)));
  EXPECT_EQ(hw.origin, HomeworkOrigin::manual);
  EXPECT_EQ(hw.exercise_ids, (std::vector<std::string>{e2.id, e1.id}));
  EXPECT_EQ(hw.assigned_at, day(4));
  EXPECT_EQ(get_homework(w.store(), hw.id), hw);
  EXPECT_EQ(list_homework(w.store(), c.id).size(), 1u);
  EXPECT_EQ(code_of([&] { assign_homework(w.store(), c.id, {}, system_clock()); }), ErrorCode::EmptyExerciseList);
  EXPECT_EQ(code_of([&] { assign_homework(w.store(), c.id, {"e404"}, system_clock()); }), ErrorCode::NotFound);
  EXPECT_EQ(code_of([&] { assign_homework(w.store(), "c404", {e1.id}, system_clock()); }), ErrorCode::NotFound);
}

TEST(Homework, AutoGenerationAndRecording) {
  World w;
  const auto c = w.child({"R", "S"});
  const auto rac = w.word("rac");
  const auto soare = w.word("soare");
  const auto er = create_exercise(w.store(), w.draft(ExerciseType::sound_recognition, "R", {w.item(rac, "R")}, 1));
  const auto es = create_exercise(w.store(), w.draft(ExerciseType::sound_recognition, "S", {w.item(soare, "S")}, 2));

  auto hw = auto_generate_homework(w.store(), c.id, 3, fixed_clock(day(1)));
  EXPECT_EQ(hw.origin, HomeworkOrigin::auto_generated);
  EXPECT_EQ(hw.exercise_ids, std::vector<std::string>{er.id});
  EXPECT_EQ(hw.policy_trace, "target=R accuracy=absent window=5 difficulty_goal=1 selected=" + er.id);

  SessionResult r;
  r.session_id = "s1";
  r.exercise_id = er.id;
  r.child_id = c.id;
  r.accuracy = Rational(1);
  r.item_count = 1;
  r.target_sound = tag("R");
  EXPECT_EQ(code_of([&] { record_result(w.store(), r); }), ErrorCode::UnfinalizedResult);
  r.finished_at = day(2);
  record_result(w.store(), r);
  record_result(w.store(), r);
  ASSERT_EQ(score_history(w.store(), c.id).size(), 1u);
  EXPECT_EQ(score_history(w.store(), c.id)[0].accuracy, Rational(1));

  hw = auto_generate_homework(w.store(), c.id, 3, fixed_clock(day(3)));
  EXPECT_EQ(hw.exercise_ids, std::vector<std::string>{es.id});

  const auto lonely = w.child({"Z"});
  EXPECT_EQ(code_of([&] { auto_generate_homework(w.store(), lonely.id, 3, system_clock()); }),
            ErrorCode::NoExercisesForImpairedSounds);
  EXPECT_EQ(code_of([&] { auto_generate_homework(w.store(), "c404", 3, system_clock()); }), ErrorCode::NotFound);
}

TEST(Progression, StoreReport) {
  World w;
  const auto c = w.child({"R"});
  EXPECT_EQ(code_of([&] { progression_report(w.store(), "c404", tag("R"), {}, {}); }), ErrorCode::NotFound);
  EXPECT_TRUE(progression_report(w.store(), c.id, tag("R"), {}, {}).empty());
  const auto rac = w.word("rac");
  const auto e = create_exercise(w.store(), w.draft(ExerciseType::sound_recognition, "R", {w.item(rac, "R")}, 2));
  for (int i : {3, 1, 2}) {
    SessionResult r;
    r.session_id = "s" + std::to_string(i);
    r.exercise_id = e.id;
    r.child_id = c.id;
    r.finished_at = day(i);
    r.accuracy = Rational(i, 4);
    r.item_count = 4;
    r.target_sound = tag("R");
    r.difficulty = 2;
    record_result(w.store(), r);
  }
  const auto series = progression_report(w.store(), c.id, tag("R"), {}, {});
  ASSERT_EQ(series.size(), 3u);
  EXPECT_EQ(series[0].session_id, "s1");
  EXPECT_EQ(series[2].accuracy, Rational(3, 4));
  EXPECT_EQ(series[1].difficulty, 2);
  EXPECT_EQ(progression_report(w.store(), c.id, tag("R"), day(2), day(2)).size(), 1u);
  EXPECT_TRUE(progression_report(w.store(), c.id, tag("R"), day(10), day(20)).empty());
  EXPECT_EQ(Json(series[0]).at("accuracy"), "1/4");
}

TEST(Progression, MatchesFilterAndSortOn500Datasets) {
  const char* sounds[] = {"R", "S", "L"};
  const char* children[] = {"c1", "c2"};
  std::mt19937 rng(11);
  for (int round = 0; round < 500; ++round) {
    std::vector<ScoreEntry> all;
    const int n = static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i) {
      auto e = entry(sounds[rng() % 3], Rational(static_cast<int>(rng() % 5), 4), 0, children[rng() % 2],
                     1 + static_cast<int>(rng() % 5));
      e.finished_at = day(static_cast<int>(rng() % 10));
      e.session_id = "s" + std::to_string(rng() % 1000);
      all.push_back(e);
    }
    std::optional<Timestamp> from;
    std::optional<Timestamp> to;
    if (rng() % 2) from = day(static_cast<int>(rng() % 10));
    if (rng() % 2) to = day(static_cast<int>(rng() % 10));

    std::vector<ProgressPoint> expected;
    for (const auto& e : all) {
      if (e.child_id != "c1" || e.target_sound != tag("R")) continue;
      if (from && e.finished_at < *from) continue;
      if (to && e.finished_at > *to) continue;
      expected.push_back({e.finished_at, e.session_id, e.accuracy, e.difficulty});
    }
    // Insertion sort so the oracle shares no ordering code with the library.
    for (std::size_t i = 1; i < expected.size(); ++i) {
      for (std::size_t j = i; j > 0; --j) {
        const auto& a = expected[j - 1];
        const auto& b = expected[j];
        if (a.date > b.date || (a.date == b.date && a.session_id > b.session_id)) {
          std::swap(expected[j - 1], expected[j]);
        }
      }
    }
    EXPECT_EQ(progression(all, "c1", tag("R"), from, to), expected);
  }
}
