#include <gtest/gtest.h>

#include "logoped/exercise.hpp"
#include "logoped/homework.hpp"
#include "support.hpp"

using namespace logoped;
using namespace logoped::testing;

namespace {

std::vector<std::string> codes(const std::vector<Violation>& vs) {
  std::vector<std::string> out;
  for (const auto& v : vs) out.push_back(v.code + (v.item >= 0 ? "@" + std::to_string(v.item) : ""));
  return out;
}

std::vector<std::string> create_codes(Store& store, const Exercise& draft) {
  try {
    create_exercise(store, draft);
  } catch (const ValidationError& e) {
    return codes(e.violations());
  }
  return {};
}

struct IntruderWorld : World {
  WordEntry rac = word("rac", "ra", Gender::masculine, true);
  WordEntry rama = word("ramă", "ra", Gender::feminine, true);
  WordEntry lac = word("lac", "la", Gender::neuter, true);
  WordEntry cal = word("cal", "ca", Gender::masculine, false);

  Exercise intruder(int difficulty = 3, int window = 5) {
    return draft(ExerciseType::intruder_recognition, "R",
                 {item(rac, "R", window), item(rama, "R", window), item(lac, "R", window)}, difficulty,
                 Variant::images);
  }
};

}  // namespace

TEST(Exercise, IntruderSpecExample) {
  IntruderWorld w;
  const auto ex = create_exercise(w.store(), w.intruder());
  EXPECT_EQ(ex.id, "e000001");
  EXPECT_EQ(ex.version, 1);
  EXPECT_EQ(get_exercise(w.store(), ex.id), ex);
  EXPECT_FALSE(ex.items[2].contains_target);
}

TEST(Exercise, IntruderNeedsExactlyOneIntruder) {
  IntruderWorld w;
  auto d = w.draft(ExerciseType::intruder_recognition, "R", {w.item(w.rac, "R"), w.item(w.lac, "R"), w.item(w.cal, "R")});
  EXPECT_EQ(create_codes(w.store(), d), std::vector<std::string>{"ExactlyOneIntruderViolated"});
  d = w.draft(ExerciseType::intruder_recognition, "R", {w.item(w.rac, "R"), w.item(w.lac, "R")});
  EXPECT_EQ(create_codes(w.store(), d), std::vector<std::string>{"IntruderTooFewItems"});
  try {
    create_exercise(w.store(), d);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationFailed);
  }
}

TEST(Exercise, BoundsAreExact) {
  IntruderWorld w;
  for (int d : {1, 5}) EXPECT_NO_THROW(create_exercise(w.store(), w.intruder(d)));
  for (int d : {0, 6}) EXPECT_EQ(create_codes(w.store(), w.intruder(d)), std::vector<std::string>{"DifficultyOutOfRange"});
  for (int s : {1, 10}) EXPECT_NO_THROW(create_exercise(w.store(), w.intruder(3, s)));
  for (int s : {0, 11}) {
    EXPECT_EQ(create_codes(w.store(), w.intruder(3, s)),
              (std::vector<std::string>{"ResponseWindowOutOfRange@0", "ResponseWindowOutOfRange@1",
                                        "ResponseWindowOutOfRange@2"}));
  }
}

TEST(Exercise, ValidateExamples) {
  IntruderWorld w;
  auto ok = w.draft(ExerciseType::sound_recognition, "R", {w.item(w.rac, "R")});
  EXPECT_TRUE(validate_exercise(ok, snapshot_for(w.store(), ok)).empty());

  auto bad_window = w.draft(ExerciseType::sound_recognition, "R", {w.item(w.rac, "R", 0)});
  EXPECT_EQ(codes(validate_exercise(bad_window, snapshot_for(w.store(), bad_window))),
            std::vector<std::string>{"ResponseWindowOutOfRange@0"});

  auto images = w.draft(ExerciseType::sound_recognition, "R", {w.item(w.rac, "R"), w.item(w.cal, "R")}, 3,
                        Variant::images);
  const auto vs = validate_exercise(images, snapshot_for(w.store(), images));
  EXPECT_EQ(codes(vs), std::vector<std::string>{"MissingImage@1"});
  EXPECT_EQ(vs, validate_exercise(images, snapshot_for(w.store(), images)));  // pure

  auto hard = w.draft(ExerciseType::sound_recognition, "R", {w.item(w.rac, "R")}, 6);
  EXPECT_EQ(create_codes(w.store(), hard), std::vector<std::string>{"DifficultyOutOfRange"});
}

TEST(Exercise, ItemRules) {
  IntruderWorld w;
  const auto pair = w.production(ProductionKind::paronym_pair, "rac - lac", {"rac", "lac"}, "R");
  const auto chain = w.production(ProductionKind::progressive_addition, "sunete", {"s", "su", "sun"}, "S");

  auto d = w.draft(ExerciseType::pair_discrimination, "R", {w.item(w.rac, "R")});
  EXPECT_EQ(create_codes(w.store(), d), std::vector<std::string>{"ItemKindMismatch@0"});
  d = w.draft(ExerciseType::pair_discrimination, "R", {w.item(pair, "R")}, 3, Variant::pennants);
  EXPECT_NO_THROW(create_exercise(w.store(), d));
  d = w.draft(ExerciseType::progressive_addition, "S", {w.item(chain, "S")});
  EXPECT_NO_THROW(create_exercise(w.store(), d));
  d = w.draft(ExerciseType::onomatopoeia, "S", {w.item(chain, "S")});
  EXPECT_EQ(create_codes(w.store(), d), std::vector<std::string>{"ItemKindMismatch@0"});

  // word pair under pennants
  auto word_pair = w.item(w.rac, "R");
  word_pair.pair_word = w.lac.id;
  word_pair.contains_target = true;
  d = w.draft(ExerciseType::sound_recognition, "R", {word_pair}, 3, Variant::pennants);
  EXPECT_NO_THROW(create_exercise(w.store(), d));
  d = w.draft(ExerciseType::sound_recognition, "R", {w.item(w.rac, "R")}, 3, Variant::pennants);
  EXPECT_EQ(create_codes(w.store(), d), std::vector<std::string>{"PennantItemNotPair@0"});
  word_pair.pair_word = w.rama.id;  // both contain R
  d = w.draft(ExerciseType::sound_recognition, "R", {word_pair}, 3, Variant::pennants);
  EXPECT_EQ(create_codes(w.store(), d), std::vector<std::string>{"PairSoundAmbiguous@0"});
}

TEST(Exercise, ContainsTargetMustAgreeUnlessOverridden) {
  IntruderWorld w;
  auto it = w.item(w.lac, "R");
  it.contains_target = true;
  auto d = w.draft(ExerciseType::sound_recognition, "R", {it});
  EXPECT_EQ(create_codes(w.store(), d), std::vector<std::string>{"ContainsTargetMismatch@0"});
  d.items[0].override_mark = true;
  EXPECT_NO_THROW(create_exercise(w.store(), d));
}

TEST(Exercise, ExerciseLevelFields) {
  IntruderWorld w;
  auto d = w.draft(ExerciseType::sound_recognition, "R", {});
  d.instruction_text.clear();
  d.instruction_audio = w.rac.image.value();
  EXPECT_EQ(create_codes(w.store(), d),
            (std::vector<std::string>{"InstructionTextMissing", "InstructionAudioNotAudio", "NoItems"}));
  d.instruction_audio.clear();
  EXPECT_EQ(create_codes(w.store(), d),
            (std::vector<std::string>{"InstructionTextMissing", "InstructionAudioMissing", "NoItems"}));
}

TEST(Exercise, DanglingReferencesRejected) {
  IntruderWorld w;
  auto d = w.draft(ExerciseType::sound_recognition, "R", {w.item(w.rac, "R")});
  d.items[0].ref.id = "w999999";
  try {
    create_exercise(w.store(), d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DanglingRef);
    EXPECT_EQ(e.details(), std::vector<std::string>{"w999999"});
  }
}

TEST(Exercise, Clone) {
  IntruderWorld w;
  const auto src = create_exercise(w.store(), w.intruder(3));
  const auto copy = clone_exercise_with_difficulty(w.store(), src.id, 5);
  EXPECT_NE(copy.id, src.id);
  EXPECT_EQ(copy.difficulty, 5);
  EXPECT_EQ(copy.items, src.items);
  EXPECT_EQ(code_of([&] { clone_exercise_with_difficulty(w.store(), src.id, 0); }), ErrorCode::DifficultyOutOfRange);
  EXPECT_EQ(code_of([&] { clone_exercise_with_difficulty(w.store(), "e999999", 3); }), ErrorCode::NotFound);
}

TEST(Exercise, DeleteRefusedWhileAssigned) {
  IntruderWorld w;
  const auto ex = create_exercise(w.store(), w.intruder());
  const auto child = w.child({"R"});
  assign_homework(w.store(), child.id, {ex.id}, fixed_clock(day(1)));
  EXPECT_EQ(code_of([&] { delete_exercise(w.store(), ex.id); }), ErrorCode::ReferencedElsewhere);
  const auto other = create_exercise(w.store(), w.intruder());
  delete_exercise(w.store(), other.id);
  EXPECT_EQ(code_of([&] { get_exercise(w.store(), other.id); }), ErrorCode::NotFound);
}
