#include "logoped/catalog.hpp"

#include <algorithm>

#include "logoped/error.hpp"
#include "logoped/repository.hpp"

namespace logoped {

namespace {

void check_asset(const Store& store, const std::string& id, MediaKind expected, const char* field) {
  auto asset = try_load<MediaAsset>(store, id);
  if (!asset) fail(ErrorCode::DanglingAssetRef, std::string(field) + " references unknown media '" + id + "'", {id});
  if (asset->kind != expected) {
    fail(ErrorCode::WrongAssetKind, std::string(field) + " must be " + to_string(expected) + " media", {id});
  }
}

std::vector<std::string> exercise_referrers(const Store& store, std::string_view kind, std::string_view id) {
  std::vector<std::string> out;
  for (const auto& ref : store.referrers(kind, id)) {
    if (ref.kind == "exercise") out.push_back(ref.id);
  }
  return out;
}

void remove_unreferenced(Store& store, std::string_view kind, std::string_view id) {
  store.transaction([&] {
    if (!store.exists(kind, id)) {
      fail(ErrorCode::NotFound, std::string(kind) + " '" + std::string(id) + "' not found", {std::string(id)});
    }
    auto exercises = exercise_referrers(store, kind, id);
    if (!exercises.empty()) {
      fail(ErrorCode::ReferencedByExercise,
           std::string(kind) + " '" + std::string(id) + "' is used by " + std::to_string(exercises.size()) +
               " exercise(s)",
           exercises);
    }
    store.remove(kind, id);
  });
}

WordEntry entry_from_fields(std::string id, const WordFields& f) {
  WordEntry w;
  w.id = std::move(id);
  w.text = f.text;
  w.first_syllable = f.first_syllable;
  w.part_of_speech = f.part_of_speech;
  w.gender = f.gender;
  w.articulated = f.articulated;
  w.audio = f.audio;
  w.syllabified_audio = f.syllabified_audio;
  w.image = f.image;
  w.sounds = merge_sounds(f.text, f.sound_overrides);
  return w;
}

}  // namespace

std::vector<TaggedSound> merge_sounds(std::string_view text, const std::vector<SoundTag>& overrides) {
  std::vector<TaggedSound> out;
  for (const auto& s : detect_sounds(text)) out.push_back({s, false});
  for (const auto& s : overrides) {
    const bool present = std::any_of(out.begin(), out.end(), [&](const TaggedSound& t) { return t.sound == s; });
    if (!present) out.push_back({s, !text_contains_sound(text, s)});
  }
  std::sort(out.begin(), out.end(), [](const TaggedSound& a, const TaggedSound& b) { return a.sound < b.sound; });
  return out;
}

void check_word_fields(const Store& store, const WordFields& f) {
  if (f.text.empty()) fail(ErrorCode::EmptyText, "word text is empty");
  if (f.audio.empty()) fail(ErrorCode::MissingAudio, "word '" + f.text + "' has no audio file");
  check_asset(store, f.audio, MediaKind::audio, "audio");
  if (f.syllabified_audio) check_asset(store, *f.syllabified_audio, MediaKind::audio, "syllabified_audio");
  if (f.image) check_asset(store, *f.image, MediaKind::image, "image");
  if (f.first_syllable.empty() || !starts_with_folded(f.text, f.first_syllable)) {
    fail(ErrorCode::FirstSyllableNotPrefix,
         "first syllable '" + f.first_syllable + "' is not a prefix of '" + f.text + "'");
  }
  if (f.image && f.part_of_speech != PartOfSpeech::noun) {
    fail(ErrorCode::ImageOnNonNoun, "only nouns can carry an image ('" + f.text + "')");
  }
  if (f.gender != Gender::not_applicable && f.part_of_speech != PartOfSpeech::noun) {
    fail(ErrorCode::GenderOnNonNoun, "only nouns carry a gender ('" + f.text + "')");
  }
}

WordEntry create_word(Store& store, const WordFields& fields) {
  return store.transaction([&] {
    check_word_fields(store, fields);
    auto word = entry_from_fields(store.next_id("word", "w"), fields);
    save(store, word);
    return word;
  });
}

WordEntry update_word(Store& store, std::string_view id, const WordFields& fields, std::int64_t expected_version) {
  return store.transaction([&] {
    const auto current = load<WordEntry>(store, id);
    if (current.version != expected_version) {
      fail(ErrorCode::StaleVersion,
           "word '" + current.id + "' is at version " + std::to_string(current.version) + ", edit expected " +
               std::to_string(expected_version),
           {current.id});
    }
    check_word_fields(store, fields);
    auto word = entry_from_fields(current.id, fields);
    word.version = current.version;
    save(store, word);
    return word;
  });
}

void delete_word(Store& store, std::string_view id) { remove_unreferenced(store, "word", id); }

WordEntry get_word(const Store& store, std::string_view id) { return load<WordEntry>(store, id); }

std::vector<WordEntry> search_words(const Store& store, std::string_view query, const std::optional<SoundTag>& sound,
                                    const std::optional<PartOfSpeech>& part_of_speech) {
  const std::string needle = fold(query);
  std::vector<WordEntry> out;
  for (auto& word : load_all<WordEntry>(store)) {
    if (part_of_speech && word.part_of_speech != *part_of_speech) continue;
    if (sound && !word.has_sound(*sound)) continue;
    if (!needle.empty() && fold(word.text).find(needle) == std::string::npos) continue;
    out.push_back(std::move(word));
  }
  std::sort(out.begin(), out.end(), [](const WordEntry& a, const WordEntry& b) {
    return a.text != b.text ? a.text < b.text : a.id < b.id;
  });
  return out;
}

std::optional<int> check_production_parts(const ProductionFields& f) {
  const auto& parts = f.parts;
  for (const auto& p : parts) {
    if (p.empty()) fail(ErrorCode::PartsArityWrong, "production parts must be nonempty");
  }
  switch (f.kind) {
    case ProductionKind::paronym_pair: {
      if (parts.size() != 2) {
        fail(ErrorCode::PairArityWrong, "a paronym pair has exactly 2 parts, got " + std::to_string(parts.size()));
      }
      const bool first = text_contains_sound(parts[0], f.target_sound);
      const bool second = text_contains_sound(parts[1], f.target_sound);
      if (fold(parts[0]) == fold(parts[1]) || first == second) {
        fail(ErrorCode::PairSoundAmbiguous, "exactly one of '" + parts[0] + "' / '" + parts[1] + "' must contain " +
                                                f.target_sound.symbol());
      }
      return first ? 0 : 1;
    }
    case ProductionKind::progressive_addition: {
      if (parts.size() < 2) fail(ErrorCode::PartsArityWrong, "progressive addition needs at least 2 parts");
      for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        const auto a = fold(parts[i]);
        const auto b = fold(parts[i + 1]);
        if (a.size() >= b.size() || !b.starts_with(a)) {
          fail(ErrorCode::PrefixChainBroken,
               "'" + parts[i] + "' is not a strict prefix of '" + parts[i + 1] + "' (part " + std::to_string(i) + ")");
        }
      }
      return std::nullopt;
    }
    case ProductionKind::monosyllable_string: {
      if (parts.size() < 2) fail(ErrorCode::PartsArityWrong, "a monosyllable string needs at least 2 parts");
      for (const auto& p : parts) {
        const auto n = utf8_length(p);
        if (n < 1 || n > 3) fail(ErrorCode::PartsArityWrong, "monosyllable '" + p + "' must be 1-3 characters");
      }
      return std::nullopt;
    }
    case ProductionKind::syllable:
      if (parts.size() != 1) fail(ErrorCode::PartsArityWrong, "a syllable production has exactly 1 part");
      return std::nullopt;
    case ProductionKind::onomatopoeia:
    case ProductionKind::sentence:
      if (parts.size() != 1 || parts[0] != f.text) {
        fail(ErrorCode::PartsArityWrong, to_string(f.kind) + " has exactly 1 part equal to its text");
      }
      return std::nullopt;
  }
  return std::nullopt;
}

VocalProduction create_production(Store& store, const ProductionFields& input) {
  ProductionFields f = input;
  if (f.text.empty()) fail(ErrorCode::EmptyText, "production text is empty");
  if ((f.kind == ProductionKind::onomatopoeia || f.kind == ProductionKind::sentence) && f.parts.empty()) {
    f.parts = {f.text};
  }
  if (f.audio.empty()) fail(ErrorCode::MissingAudio, "production '" + f.text + "' has no audio file");
  const auto bearing = check_production_parts(f);
  return store.transaction([&] {
    check_asset(store, f.audio, MediaKind::audio, "audio");
    VocalProduction p;
    p.id = store.next_id("production", "p");
    p.kind = f.kind;
    p.text = f.text;
    p.parts = f.parts;
    p.audio = f.audio;
    p.target_sound = f.target_sound;
    p.sound_bearing_part = bearing;
    save(store, p);
    return p;
  });
}

VocalProduction get_production(const Store& store, std::string_view id) { return load<VocalProduction>(store, id); }

std::vector<VocalProduction> list_productions(const Store& store) { return load_all<VocalProduction>(store); }

void delete_production(Store& store, std::string_view id) { remove_unreferenced(store, "production", id); }

}  // namespace logoped
