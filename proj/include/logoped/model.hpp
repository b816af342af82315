#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "logoped/clock.hpp"
#include "logoped/text.hpp"

namespace logoped {

using Json = nlohmann::json;
using Rational = boost::rational<std::int64_t>;

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

enum class MediaKind { audio, image };

struct MediaAsset {
  std::string id;  // equals content_hash
  MediaKind kind = MediaKind::audio;
  std::string content_hash;
  std::int64_t byte_size = 0;
  std::optional<std::int64_t> duration_ms;  // audio only
  std::string original_filename;
  std::int64_t version = 0;

  bool operator==(const MediaAsset&) const = default;
};

enum class PartOfSpeech { noun, verb, adjective, other };
enum class Gender { masculine, feminine, neuter, not_applicable };

/// A sound a word carries. override_mark is set when a therapist tagged a
/// sound that is not spelled in the text (digraphs like "CE").
struct TaggedSound {
  SoundTag sound;
  bool override_mark = false;

  bool operator==(const TaggedSound&) const = default;
};

/// Everything a therapist enters on the word form.
struct WordFields {
  std::string text;
  std::string first_syllable;
  PartOfSpeech part_of_speech = PartOfSpeech::noun;
  Gender gender = Gender::not_applicable;
  bool articulated = false;
  std::string audio;
  std::optional<std::string> syllabified_audio;
  std::optional<std::string> image;
  std::vector<SoundTag> sound_overrides;

  bool operator==(const WordFields&) const = default;
};

struct WordEntry {
  std::string id;
  std::string text;
  std::string first_syllable;
  PartOfSpeech part_of_speech = PartOfSpeech::noun;
  Gender gender = Gender::not_applicable;
  bool articulated = false;
  std::string audio;
  std::optional<std::string> syllabified_audio;
  std::optional<std::string> image;
  std::vector<TaggedSound> sounds;  // sorted by symbol
  std::int64_t version = 0;

  bool has_sound(const SoundTag& sound) const;
  WordFields fields() const;

  bool operator==(const WordEntry&) const = default;
};

enum class ProductionKind { syllable, paronym_pair, onomatopoeia, monosyllable_string, progressive_addition, sentence };

struct ProductionFields {
  ProductionKind kind = ProductionKind::syllable;
  std::string text;
  std::vector<std::string> parts;
  SoundTag target_sound = SoundTag::parse("S");
  std::string audio;

  bool operator==(const ProductionFields&) const = default;
};

struct VocalProduction {
  std::string id;
  ProductionKind kind = ProductionKind::syllable;
  std::string text;
  std::vector<std::string> parts;
  std::string audio;
  SoundTag target_sound = SoundTag::parse("S");
  /// paronym_pair only: index (0/1) of the part carrying target_sound.
  std::optional<int> sound_bearing_part;
  std::int64_t version = 0;

  bool operator==(const VocalProduction&) const = default;
};

// ---------------------------------------------------------------------------
// Exercises
// ---------------------------------------------------------------------------

enum class ExerciseType {
  sound_recognition,
  pair_discrimination,
  pronunciation,
  onomatopoeia,
  progressive_addition,
  similar_joints,
  word_transformation,
  intruder_recognition,
};

enum class Variant { images, pennants, none };

enum class RefKind { word, production };

struct ItemRef {
  RefKind kind = RefKind::word;
  std::string id;

  bool operator==(const ItemRef&) const = default;
};

struct ExerciseItem {
  ItemRef ref;
  /// Second word of a word pair; the pair is (ref, pair_word).
  std::optional<std::string> pair_word;
  int response_window_s = 5;
  bool contains_target = true;
  /// Therapist asserts contains_target regardless of the catalog tags.
  bool override_mark = false;
  /// Pair shown in reverse order (second member on the first pennant).
  bool swapped = false;

  bool operator==(const ExerciseItem&) const = default;
};

struct Exercise {
  std::string id;
  ExerciseType type = ExerciseType::sound_recognition;
  SoundTag target_sound = SoundTag::parse("S");
  int difficulty = 1;
  std::string instruction_text;
  std::string instruction_audio;
  Variant variant = Variant::none;
  std::vector<ExerciseItem> items;
  std::int64_t version = 0;

  bool operator==(const Exercise&) const = default;
};

// ---------------------------------------------------------------------------
// Children, homework, history
// ---------------------------------------------------------------------------

struct ChildProfile {
  std::string id;
  std::string name;
  int birth_year = 0;
  std::set<SoundTag> impaired_sounds;
  std::string report_notes;
  std::int64_t version = 0;

  bool operator==(const ChildProfile&) const = default;
};

enum class HomeworkOrigin { manual, auto_generated };

struct Homework {
  std::string id;
  std::string child_id;
  std::vector<std::string> exercise_ids;
  HomeworkOrigin origin = HomeworkOrigin::manual;
  Timestamp assigned_at{};
  std::string policy_trace;
  std::int64_t version = 0;

  bool operator==(const Homework&) const = default;
};

/// One finished session as seen by the scheduler.
struct ScoreEntry {
  std::string session_id;
  std::string child_id;
  std::string exercise_id;
  Timestamp finished_at{};
  SoundTag target_sound = SoundTag::parse("S");
  int difficulty = 1;
  Rational accuracy;
  std::int64_t version = 0;

  bool operator==(const ScoreEntry&) const = default;
};

// ---------------------------------------------------------------------------
// Sessions
// ---------------------------------------------------------------------------

enum class Phase { main, retry, finished };
enum class OutcomeResult { correct, incorrect, timeout };

struct ItemOutcome {
  int item_index = 0;
  Phase phase = Phase::main;  // main or retry
  std::optional<int> choice;  // nullopt = no answer
  std::int64_t elapsed_ms = 0;
  OutcomeResult result = OutcomeResult::timeout;

  bool operator==(const ItemOutcome&) const = default;
};

/// Expected answer for one item, resolved from the catalog when the session
/// starts. Valid choices are [min_choice, max_choice].
struct AnswerKey {
  int expected = 1;
  int min_choice = 0;
  int max_choice = 1;

  bool operator==(const AnswerKey&) const = default;
};

struct Session {
  std::string id;
  std::string exercise_id;
  std::string child_id;
  Phase phase = Phase::main;
  int cursor = 0;
  std::vector<int> pending_retry;
  std::vector<ItemOutcome> outcomes;
  int flowers = 0;
  Timestamp started_at{};
  std::vector<AnswerKey> answer_key;
  bool finalized = false;
  std::int64_t version = 0;

  bool operator==(const Session&) const = default;
};

struct SessionResult {
  std::string session_id;
  std::string exercise_id;
  std::string child_id;
  std::optional<Timestamp> finished_at;  // absent = not finalized
  Rational accuracy;
  int flowers = 0;
  int item_count = 0;
  SoundTag target_sound = SoundTag::parse("S");
  int difficulty = 1;
  std::vector<ItemOutcome> outcomes;
  std::int64_t version = 0;

  bool operator==(const SessionResult&) const = default;
};

// ---------------------------------------------------------------------------
// JSON (canonical: nlohmann objects are key-sorted)
// ---------------------------------------------------------------------------

std::string to_string(MediaKind v);
std::string to_string(PartOfSpeech v);
std::string to_string(Gender v);
std::string to_string(ProductionKind v);
std::string to_string(ExerciseType v);
std::string to_string(Variant v);
std::string to_string(HomeworkOrigin v);
std::string to_string(Phase v);
std::string to_string(OutcomeResult v);

/// Enum parsers throw Error(InvalidArgument) on unknown names.
MediaKind parse_media_kind(std::string_view s);
PartOfSpeech parse_part_of_speech(std::string_view s);
Gender parse_gender(std::string_view s);
ProductionKind parse_production_kind(std::string_view s);
ExerciseType parse_exercise_type(std::string_view s);
Variant parse_variant(std::string_view s);

std::string format_rational(const Rational& r);  // "3/4"

void to_json(Json& j, const MediaAsset& v);
void from_json(const Json& j, MediaAsset& v);
void to_json(Json& j, const WordFields& v);
void from_json(const Json& j, WordFields& v);
void to_json(Json& j, const WordEntry& v);
void from_json(const Json& j, WordEntry& v);
void to_json(Json& j, const ProductionFields& v);
void from_json(const Json& j, ProductionFields& v);
void to_json(Json& j, const VocalProduction& v);
void from_json(const Json& j, VocalProduction& v);
void to_json(Json& j, const ExerciseItem& v);
void from_json(const Json& j, ExerciseItem& v);
void to_json(Json& j, const Exercise& v);
void from_json(const Json& j, Exercise& v);
void to_json(Json& j, const ChildProfile& v);
void from_json(const Json& j, ChildProfile& v);
void to_json(Json& j, const Homework& v);
void from_json(const Json& j, Homework& v);
void to_json(Json& j, const ScoreEntry& v);
void from_json(const Json& j, ScoreEntry& v);
void to_json(Json& j, const ItemOutcome& v);
void from_json(const Json& j, ItemOutcome& v);
void to_json(Json& j, const AnswerKey& v);
void from_json(const Json& j, AnswerKey& v);
void to_json(Json& j, const Session& v);
void from_json(const Json& j, Session& v);
void to_json(Json& j, const SessionResult& v);
void from_json(const Json& j, SessionResult& v);

[[noreturn]] void rethrow_json_error(const std::exception& e);

/// Parses `j` into T, converting nlohmann type/field errors into
/// Error(InvalidArgument).
template <class T>
T parse_json(const Json& j) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    rethrow_json_error(e);
  }
}

}  // namespace logoped

namespace nlohmann {
template <>
struct adl_serializer<logoped::SoundTag> {
  static logoped::SoundTag from_json(const json& j);
  static void to_json(json& j, const logoped::SoundTag& v);
};

/// {"num": 3, "den": 4}
template <>
struct adl_serializer<logoped::Rational> {
  static logoped::Rational from_json(const json& j);
  static void to_json(json& j, const logoped::Rational& v);
};
}  // namespace nlohmann
