#include "logoped/exercise.hpp"

#include <algorithm>

#include "logoped/repository.hpp"

namespace logoped {

namespace {

template <class Map>
const typename Map::mapped_type* lookup(const Map& m, std::string_view id) {
  auto it = m.find(id);
  return it == m.end() ? nullptr : &it->second;
}

/// Checks the type's rule on what an item may reference.
bool item_kind_allowed(ExerciseType type, Variant variant, const ExerciseItem& item, const CatalogSnapshot& catalog) {
  const VocalProduction* p = item.ref.kind == RefKind::production ? catalog.production(item.ref.id) : nullptr;
  const bool word = item.ref.kind == RefKind::word;
  const bool pair = is_pair_item(item, catalog);
  switch (type) {
    case ExerciseType::pair_discrimination:
    case ExerciseType::similar_joints:
    case ExerciseType::word_transformation:
      return p && p->kind == ProductionKind::paronym_pair;
    case ExerciseType::progressive_addition:
      return p && p->kind == ProductionKind::progressive_addition;
    case ExerciseType::onomatopoeia:
      return p && p->kind == ProductionKind::onomatopoeia;
    case ExerciseType::pronunciation:
      return (word && !item.pair_word) ||
             (p && (p->kind == ProductionKind::syllable || p->kind == ProductionKind::monosyllable_string ||
                    p->kind == ProductionKind::sentence));
    case ExerciseType::sound_recognition:
    case ExerciseType::intruder_recognition:
      return pair ? variant == Variant::pennants : true;
  }
  return false;
}

std::string item_label(const ExerciseItem& item) {
  return (item.ref.kind == RefKind::word ? "word '" : "production '") + item.ref.id + "'";
}

}  // namespace

const WordEntry* CatalogSnapshot::word(std::string_view id) const { return lookup(words, id); }
const VocalProduction* CatalogSnapshot::production(std::string_view id) const { return lookup(productions, id); }
const MediaAsset* CatalogSnapshot::asset(std::string_view id) const { return lookup(media, id); }

void extend_snapshot(const Store& store, const Exercise& exercise, CatalogSnapshot& snap) {
  auto add_media = [&](const std::string& id) {
    if (snap.media.count(id)) return;
    if (auto a = try_load<MediaAsset>(store, id)) snap.media.emplace(id, std::move(*a));
  };
  auto add_word = [&](const std::string& id) {
    if (snap.words.count(id)) return;
    if (auto w = try_load<WordEntry>(store, id)) {
      add_media(w->audio);
      if (w->syllabified_audio) add_media(*w->syllabified_audio);
      if (w->image) add_media(*w->image);
      snap.words.emplace(id, std::move(*w));
    }
  };
  add_media(exercise.instruction_audio);
  for (const auto& item : exercise.items) {
    if (item.ref.kind == RefKind::word) {
      add_word(item.ref.id);
    } else if (!snap.productions.count(item.ref.id)) {
      if (auto p = try_load<VocalProduction>(store, item.ref.id)) {
        add_media(p->audio);
        snap.productions.emplace(item.ref.id, std::move(*p));
      }
    }
    if (item.pair_word) add_word(*item.pair_word);
  }
}

CatalogSnapshot snapshot_for(const Store& store, const Exercise& exercise) {
  return store.read([&] {
    CatalogSnapshot snap;
    extend_snapshot(store, exercise, snap);
    return snap;
  });
}

bool is_pair_item(const ExerciseItem& item, const CatalogSnapshot& catalog) {
  if (item.ref.kind == RefKind::word) return item.pair_word.has_value();
  const auto* p = catalog.production(item.ref.id);
  return p && p->kind == ProductionKind::paronym_pair;
}

std::optional<int> sound_bearing_member(const ExerciseItem& item, const SoundTag& sound,
                                        const CatalogSnapshot& catalog) {
  bool first = false;
  bool second = false;
  if (item.ref.kind == RefKind::word) {
    const auto* a = catalog.word(item.ref.id);
    const auto* b = item.pair_word ? catalog.word(*item.pair_word) : nullptr;
    if (!a || !b) return std::nullopt;
    first = a->has_sound(sound);
    second = b->has_sound(sound);
  } else {
    const auto* p = catalog.production(item.ref.id);
    if (!p || p->kind != ProductionKind::paronym_pair || p->parts.size() != 2) return std::nullopt;
    first = text_contains_sound(p->parts[0], sound);
    second = text_contains_sound(p->parts[1], sound);
  }
  if (first == second) return std::nullopt;
  return first ? 0 : 1;
}

bool item_contains_target(const ExerciseItem& item, const SoundTag& sound, const CatalogSnapshot& catalog) {
  if (is_pair_item(item, catalog)) return sound_bearing_member(item, sound, catalog).has_value();
  if (item.ref.kind == RefKind::word) {
    const auto* w = catalog.word(item.ref.id);
    return w && w->has_sound(sound);
  }
  const auto* p = catalog.production(item.ref.id);
  return p && (p->target_sound == sound || text_contains_sound(p->text, sound));
}

std::vector<Violation> validate_exercise(const Exercise& ex, const CatalogSnapshot& catalog) {
  std::vector<Violation> out;
  auto add = [&](const char* code, std::string message, int item = -1) {
    out.push_back({code, std::move(message), item});
  };

  if (ex.difficulty < kMinDifficulty || ex.difficulty > kMaxDifficulty) {
    add("DifficultyOutOfRange", "difficulty " + std::to_string(ex.difficulty) + " is outside 1-5");
  }
  if (ex.instruction_text.empty()) add("InstructionTextMissing", "instruction text is required");
  if (ex.instruction_audio.empty()) {
    add("InstructionAudioMissing", "instruction audio is required");
  } else if (const auto* a = catalog.asset(ex.instruction_audio); !a) {
    add("DanglingRef", "instruction audio '" + ex.instruction_audio + "' does not exist");
  } else if (a->kind != MediaKind::audio) {
    add("InstructionAudioNotAudio", "instruction media '" + ex.instruction_audio + "' is not audio");
  }
  if (ex.items.empty()) add("NoItems", "an exercise needs at least one item");

  for (std::size_t i = 0; i < ex.items.size(); ++i) {
    const auto& item = ex.items[i];
    const int idx = static_cast<int>(i);
    const bool word_ref = item.ref.kind == RefKind::word;
    const bool ref_ok = word_ref ? catalog.word(item.ref.id) != nullptr : catalog.production(item.ref.id) != nullptr;
    const bool pair_ok = !item.pair_word || catalog.word(*item.pair_word) != nullptr;

    if (item.response_window_s < kMinResponseWindowS || item.response_window_s > kMaxResponseWindowS) {
      add("ResponseWindowOutOfRange",
          "response window " + std::to_string(item.response_window_s) + " s is outside 1-10 s", idx);
    }
    if (!ref_ok) add("DanglingRef", item_label(item) + " does not exist", idx);
    if (!pair_ok) add("DanglingRef", "pair word '" + *item.pair_word + "' does not exist", idx);
    if (!ref_ok || !pair_ok) continue;

    if ((item.pair_word && !word_ref) || !item_kind_allowed(ex.type, ex.variant, item, catalog)) {
      add("ItemKindMismatch", item_label(item) + " cannot be used in a " + to_string(ex.type) + " exercise", idx);
    }
    const bool pair = is_pair_item(item, catalog);
    if (pair && !sound_bearing_member(item, ex.target_sound, catalog)) {
      add("PairSoundAmbiguous", "exactly one pair member must contain " + ex.target_sound.symbol(), idx);
    } else if (!item.override_mark && item.contains_target != item_contains_target(item, ex.target_sound, catalog)) {
      add("ContainsTargetMismatch",
          item_label(item) + (item.contains_target ? " does not contain " : " contains ") + ex.target_sound.symbol(),
          idx);
    }
    if (ex.variant == Variant::images) {
      const auto* w = word_ref ? catalog.word(item.ref.id) : nullptr;
      const auto* partner = item.pair_word ? catalog.word(*item.pair_word) : nullptr;
      if (!w || !w->image || (item.pair_word && (!partner || !partner->image))) {
        add("MissingImage", item_label(item) + " has no image", idx);
      }
    } else if (ex.variant == Variant::pennants && !pair) {
      add("PennantItemNotPair", item_label(item) + " is not a pair", idx);
    }
  }

  if (ex.type == ExerciseType::intruder_recognition) {
    if (ex.items.size() < kMinIntruderItems) {
      add("IntruderTooFewItems", "an intruder exercise needs at least 3 items");
    }
    const auto intruders =
        std::count_if(ex.items.begin(), ex.items.end(), [](const ExerciseItem& it) { return !it.contains_target; });
    if (intruders != 1) {
      add("ExactlyOneIntruderViolated",
          "exactly one item must lack the target sound, found " + std::to_string(intruders));
    }
  }
  return out;
}

Exercise create_exercise(Store& store, Exercise draft) {
  return store.transaction([&] {
    const auto catalog = snapshot_for(store, draft);
    auto violations = validate_exercise(draft, catalog);
    std::vector<std::string> dangling;
    if (!draft.instruction_audio.empty() && !catalog.asset(draft.instruction_audio)) {
      dangling.push_back(draft.instruction_audio);
    }
    for (const auto& item : draft.items) {
      const bool found = item.ref.kind == RefKind::word ? catalog.word(item.ref.id) != nullptr
                                                        : catalog.production(item.ref.id) != nullptr;
      if (!found) dangling.push_back(item.ref.id);
      if (item.pair_word && !catalog.word(*item.pair_word)) dangling.push_back(*item.pair_word);
    }
    if (!dangling.empty()) fail(ErrorCode::DanglingRef, "exercise references missing entries", dangling);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    draft.id = store.next_id("exercise", "e");
    draft.version = 0;
    save(store, draft);
    return draft;
  });
}

Exercise get_exercise(const Store& store, std::string_view id) { return load<Exercise>(store, id); }

std::vector<Exercise> list_exercises(const Store& store) { return load_all<Exercise>(store); }

Exercise clone_exercise_with_difficulty(Store& store, std::string_view id, int new_difficulty) {
  return store.transaction([&] {
    auto copy = load<Exercise>(store, id);
    if (new_difficulty < kMinDifficulty || new_difficulty > kMaxDifficulty) {
      fail(ErrorCode::DifficultyOutOfRange, "difficulty " + std::to_string(new_difficulty) + " is outside 1-5");
    }
    copy.difficulty = new_difficulty;
    copy.id = store.next_id("exercise", "e");
    copy.version = 0;
    save(store, copy);
    return copy;
  });
}

void delete_exercise(Store& store, std::string_view id) { store.remove("exercise", id); }

}  // namespace logoped
