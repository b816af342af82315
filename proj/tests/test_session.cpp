#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "logoped/exercise.hpp"
#include "logoped/homework.hpp"
#include "logoped/repository.hpp"
#include "logoped/session.hpp"
#include "support.hpp"

using namespace logoped;
using namespace logoped::testing;

namespace {

struct SessionWorld : World {
  WordEntry rac = word("rac", "ra", Gender::masculine, true);
  WordEntry rama = word("ramă", "ra", Gender::feminine, true);
  WordEntry roata = word("roată", "roa", Gender::feminine, true);
  WordEntry lac = word("lac", "la", Gender::neuter, true);
  ChildProfile kid = child({"R"});
  Exercise intruder = create_exercise(
      store(), draft(ExerciseType::intruder_recognition, "R",
                     {item(rac, "R"), item(rama, "R"), item(lac, "R"), item(roata, "R")}, 3, Variant::images));

  Session start() { return start_session(store(), intruder.id, kid.id, fixed_clock(day(2))); }
  int right(const Session& s) { return s.answer_key.at(engine::current_item(s)).expected; }
  int wrong(const Session& s) { return 1 - right(s); }
};

}  // namespace

TEST(Session, StartAndPresent) {
  SessionWorld w;
  const auto s = w.start();
  EXPECT_EQ(s.phase, Phase::main);
  EXPECT_EQ(s.cursor, 0);
  EXPECT_EQ(s.flowers, 0);
  EXPECT_TRUE(s.outcomes.empty());
  const auto p = present_next(w.store(), s.id);
  EXPECT_EQ(p.item_index, 0);
  EXPECT_EQ(p.deadline_ms, 5000);
  ASSERT_EQ(p.entries.size(), 1u);
  EXPECT_EQ(p.entries[0].text, "rac");
  EXPECT_EQ(p.entries[0].image, w.rac.image);
  const auto again = present_next(w.store(), s.id);
  EXPECT_EQ(Json(again).dump(), Json(p).dump());

  const auto other = w.start();
  EXPECT_NE(other.id, s.id);
  submit_answer(w.store(), s.id, w.right(s), 100);
  EXPECT_EQ(get_session(w.store(), other.id).cursor, 0);
}

TEST(Session, StartErrors) {
  SessionWorld w;
  EXPECT_EQ(code_of([&] { start_session(w.store(), "e999999", w.kid.id, system_clock()); }), ErrorCode::NotFound);
  EXPECT_EQ(code_of([&] { start_session(w.store(), w.intruder.id, "c999999", system_clock()); }), ErrorCode::NotFound);
}

TEST(Session, PennantChoices) {
  World w;
  const auto pair = w.production(ProductionKind::paronym_pair, "rac - lac", {"rac", "lac"}, "R");
  const auto kid = w.child({"R"});
  auto d = w.draft(ExerciseType::pair_discrimination, "R", {w.item(pair, "R"), w.item(pair, "R")}, 2,
                   Variant::pennants);
  d.items[1].swapped = true;
  const auto ex = create_exercise(w.store(), d);

  auto s = start_session(w.store(), ex.id, kid.id, system_clock());
  const auto p = present_next(w.store(), s.id);
  EXPECT_EQ(p.min_choice, 1);
  EXPECT_EQ(p.max_choice, 2);
  EXPECT_EQ(p.entries[0].text, "rac");
  auto o = submit_answer(w.store(), s.id, 1, 800);
  EXPECT_EQ(o.result, OutcomeResult::correct);
  EXPECT_EQ(get_session(w.store(), s.id).flowers, 1);

  EXPECT_EQ(present_next(w.store(), s.id).entries[0].text, "lac");  // swapped
  o = submit_answer(w.store(), s.id, 1, 800);
  EXPECT_EQ(o.result, OutcomeResult::incorrect);
  s = get_session(w.store(), s.id);
  EXPECT_EQ(s.pending_retry, std::vector<int>{1});
  EXPECT_EQ(s.phase, Phase::retry);
  EXPECT_EQ(code_of([&] { submit_answer(w.store(), s.id, 3, 10); }), ErrorCode::InvalidChoice);
  EXPECT_EQ(submit_answer(w.store(), s.id, 2, 10).result, OutcomeResult::correct);
  EXPECT_EQ(get_session(w.store(), s.id).phase, Phase::finished);
}

TEST(Session, WindowIsHalfOpen) {
  SessionWorld w;
  const auto s = w.start();
  EXPECT_EQ(code_of([&] { submit_answer(w.store(), s.id, 0, 6000); }), ErrorCode::ElapsedExceedsWindow);
  EXPECT_EQ(code_of([&] { submit_answer(w.store(), s.id, 0, 5000); }), ErrorCode::ElapsedExceedsWindow);
  EXPECT_EQ(code_of([&] { submit_answer(w.store(), s.id, 0, -1); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(submit_answer(w.store(), s.id, w.right(s), 4999).result, OutcomeResult::correct);
}

TEST(Session, ExpireAndRetryRunsOnce) {
  SessionWorld w;
  auto s = w.start();
  const auto o = expire_item(w.store(), s.id);
  EXPECT_EQ(o.result, OutcomeResult::timeout);
  EXPECT_EQ(o.elapsed_ms, 5000);
  EXPECT_FALSE(o.choice.has_value());
  for (int i = 1; i < 4; ++i) {
    s = get_session(w.store(), s.id);
    submit_answer(w.store(), s.id, w.right(s), 100);
  }
  s = get_session(w.store(), s.id);
  EXPECT_EQ(s.phase, Phase::retry);
  EXPECT_EQ(s.pending_retry, std::vector<int>{0});
  EXPECT_EQ(present_next(w.store(), s.id).phase, Phase::retry);
  const auto retry = expire_item(w.store(), s.id);
  EXPECT_EQ(retry.phase, Phase::retry);
  s = get_session(w.store(), s.id);
  EXPECT_EQ(s.phase, Phase::finished);
  EXPECT_EQ(s.pending_retry, std::vector<int>{0});
  EXPECT_EQ(code_of([&] { expire_item(w.store(), s.id); }), ErrorCode::SessionFinished);
  EXPECT_EQ(code_of([&] { present_next(w.store(), s.id); }), ErrorCode::SessionFinished);
  EXPECT_EQ(code_of([&] { submit_answer(w.store(), s.id, 0, 1); }), ErrorCode::SessionFinished);
}

TEST(Session, FinalizeThreeOfFour) {
  SessionWorld w;
  auto s = w.start();
  EXPECT_EQ(code_of([&] { finalize_session(w.store(), s.id, fixed_clock(day(3))); }), ErrorCode::SessionNotFinished);
  for (int i = 0; i < 4; ++i) {
    s = get_session(w.store(), s.id);
    submit_answer(w.store(), s.id, i == 2 ? w.wrong(s) : w.right(s), 1000);
  }
  s = get_session(w.store(), s.id);
  submit_answer(w.store(), s.id, w.right(s), 1000);
  const auto r = finalize_session(w.store(), s.id, fixed_clock(day(3)));
  EXPECT_EQ(r.accuracy, Rational(3, 4));
  EXPECT_EQ(r.flowers, 4);
  EXPECT_EQ(r.finished_at, day(3));
  EXPECT_EQ(finalize_session(w.store(), s.id, fixed_clock(day(9))), r);
  EXPECT_EQ(score_history(w.store(), w.kid.id).size(), 1u);
  EXPECT_TRUE(get_session(w.store(), s.id).finalized);
}

TEST(Session, AllCorrectSkipsRetry) {
  SessionWorld w;
  auto s = w.start();
  for (int i = 0; i < 4; ++i) {
    s = get_session(w.store(), s.id);
    submit_answer(w.store(), s.id, w.right(s), 10);
  }
  s = get_session(w.store(), s.id);
  EXPECT_EQ(s.phase, Phase::finished);
  EXPECT_TRUE(s.pending_retry.empty());
  EXPECT_EQ(finalize_session(w.store(), s.id, system_clock()).accuracy, Rational(1));
}

TEST(Session, SessionViewHidesAnswerKey) {
  SessionWorld w;
  const auto view = session_view(w.start());
  EXPECT_FALSE(view.contains("answer_key"));
  EXPECT_TRUE(view.contains("flowers"));
}

TEST(ComputeAccuracy, ExamplesAndMalformedLogs) {
  auto outcome = [](int i, Phase p, OutcomeResult r) {
    ItemOutcome o;
    o.item_index = i;
    o.phase = p;
    o.result = r;
    if (r != OutcomeResult::timeout) o.choice = 1;
    return o;
  };
  std::vector<ItemOutcome> none;
  std::vector<ItemOutcome> all;
  for (int i = 0; i < 5; ++i) {
    none.push_back(outcome(i, Phase::main, OutcomeResult::incorrect));
    all.push_back(outcome(i, Phase::main, OutcomeResult::correct));
  }
  EXPECT_EQ(compute_accuracy(none, 5), Rational(0));
  EXPECT_EQ(compute_accuracy(all, 5), Rational(1));
  none.push_back(outcome(0, Phase::retry, OutcomeResult::correct));
  EXPECT_EQ(compute_accuracy(none, 5), Rational(0));

  EXPECT_EQ(code_of([&] { compute_accuracy(all, 0); }), ErrorCode::MalformedLog);
  EXPECT_EQ(code_of([&] { compute_accuracy(all, 4); }), ErrorCode::MalformedLog);
  auto dup = all;
  dup.push_back(outcome(1, Phase::main, OutcomeResult::correct));
  EXPECT_EQ(code_of([&] { compute_accuracy(dup, 5); }), ErrorCode::MalformedLog);
  auto contradictory = all;
  contradictory[0].choice.reset();
  EXPECT_EQ(code_of([&] { compute_accuracy(contradictory, 5); }), ErrorCode::MalformedLog);
}

TEST(Session, RetrySetAndScoringMatchRecount) {
  SessionWorld w;
  const auto key = build_answer_key(w.intruder, snapshot_for(w.store(), w.intruder));
  std::mt19937 rng(5);
  for (int round = 0; round < 200; ++round) {
    auto s = engine::start("s", w.intruder, w.kid.id, key, day(0));
    while (s.phase != Phase::finished) {
      const auto roll = rng() % 3;
      if (roll == 0) {
        engine::expire(s, w.intruder);
      } else {
        const int expected = s.answer_key[engine::current_item(s)].expected;
        engine::answer(s, w.intruder, roll == 1 ? expected : 1 - expected, rng() % 5000);
      }
    }
    std::vector<int> wrong_main;
    std::vector<int> retried;
    int correct_main = 0;
    int correct_all = 0;
    for (const auto& o : s.outcomes) {
      if (o.result == OutcomeResult::correct) ++correct_all;
      if (o.phase == Phase::main) {
        if (o.result == OutcomeResult::correct) {
          ++correct_main;
        } else {
          wrong_main.push_back(o.item_index);
        }
      } else {
        retried.push_back(o.item_index);
      }
    }
    EXPECT_EQ(retried, wrong_main);
    EXPECT_EQ(s.flowers, correct_all);
    const auto r = engine::result(s, w.intruder, day(1));
    EXPECT_EQ(r.accuracy, Rational(correct_main, 4));
    EXPECT_EQ(r.accuracy == Rational(1), wrong_main.empty());
  }
}

TEST(Session, ConcurrentMutationsStayConsistent) {
  SessionWorld w;
  const auto s = w.start();
  std::atomic<int> applied{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 6; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 20; ++i) {
        try {
          expire_item(w.store(), s.id);
          ++applied;
        } catch (const Error& e) {
          EXPECT_TRUE(e.code() == ErrorCode::SessionBusy || e.code() == ErrorCode::SessionFinished)
              << to_string(e.code());
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  const auto final = get_session(w.store(), s.id);
  EXPECT_EQ(applied.load(), 8);  // 4 main + 4 retry
  EXPECT_EQ(final.outcomes.size(), 8u);
  EXPECT_EQ(final.phase, Phase::finished);
}
