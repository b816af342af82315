#include "logoped/model.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "logoped/error.hpp"

namespace logoped {

namespace {

template <class E, std::size_t N>
std::string enum_name(E v, const std::array<std::pair<E, const char*>, N>& table) {
  for (const auto& [e, name] : table) {
    if (e == v) return name;
  }
  return "?";
}

template <class E, std::size_t N>
E enum_parse(std::string_view s, const std::array<std::pair<E, const char*>, N>& table, const char* what) {
  for (const auto& [e, name] : table) {
    if (s == name) return e;
  }
  fail(ErrorCode::InvalidArgument, std::string("unknown ") + what + ": '" + std::string(s) + "'");
}

constexpr std::array<std::pair<MediaKind, const char*>, 2> kMediaKinds{{
    {MediaKind::audio, "audio"},
    {MediaKind::image, "image"},
}};
constexpr std::array<std::pair<PartOfSpeech, const char*>, 4> kPartsOfSpeech{{
    {PartOfSpeech::noun, "noun"},
    {PartOfSpeech::verb, "verb"},
    {PartOfSpeech::adjective, "adjective"},
    {PartOfSpeech::other, "other"},
}};
constexpr std::array<std::pair<Gender, const char*>, 4> kGenders{{
    {Gender::masculine, "masculine"},
    {Gender::feminine, "feminine"},
    {Gender::neuter, "neuter"},
    {Gender::not_applicable, "not_applicable"},
}};
constexpr std::array<std::pair<ProductionKind, const char*>, 6> kProductionKinds{{
    {ProductionKind::syllable, "syllable"},
    {ProductionKind::paronym_pair, "paronym_pair"},
    {ProductionKind::onomatopoeia, "onomatopoeia"},
    {ProductionKind::monosyllable_string, "monosyllable_string"},
    {ProductionKind::progressive_addition, "progressive_addition"},
    {ProductionKind::sentence, "sentence"},
}};
constexpr std::array<std::pair<ExerciseType, const char*>, 8> kExerciseTypes{{
    {ExerciseType::sound_recognition, "sound_recognition"},
    {ExerciseType::pair_discrimination, "pair_discrimination"},
    {ExerciseType::pronunciation, "pronunciation"},
    {ExerciseType::onomatopoeia, "onomatopoeia"},
    {ExerciseType::progressive_addition, "progressive_addition"},
    {ExerciseType::similar_joints, "similar_joints"},
    {ExerciseType::word_transformation, "word_transformation"},
    {ExerciseType::intruder_recognition, "intruder_recognition"},
}};
constexpr std::array<std::pair<Variant, const char*>, 3> kVariants{{
    {Variant::images, "images"},
    {Variant::pennants, "pennants"},
    {Variant::none, "none"},
}};
constexpr std::array<std::pair<HomeworkOrigin, const char*>, 2> kOrigins{{
    {HomeworkOrigin::manual, "manual"},
    {HomeworkOrigin::auto_generated, "auto"},
}};
constexpr std::array<std::pair<Phase, const char*>, 3> kPhases{{
    {Phase::main, "main"},
    {Phase::retry, "retry"},
    {Phase::finished, "finished"},
}};
constexpr std::array<std::pair<OutcomeResult, const char*>, 3> kResults{{
    {OutcomeResult::correct, "correct"},
    {OutcomeResult::incorrect, "incorrect"},
    {OutcomeResult::timeout, "timeout"},
}};

template <class T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
std::optional<T> get_optional(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->template get<T>();
}

Timestamp get_timestamp(const Json& j, const char* key) { return parse_timestamp(j.at(key).get<std::string>()); }

}  // namespace

void rethrow_json_error(const std::exception& e) {
  throw Error(ErrorCode::InvalidArgument, std::string("malformed JSON: ") + e.what());
}

std::string to_string(MediaKind v) { return enum_name(v, kMediaKinds); }
std::string to_string(PartOfSpeech v) { return enum_name(v, kPartsOfSpeech); }
std::string to_string(Gender v) { return enum_name(v, kGenders); }
std::string to_string(ProductionKind v) { return enum_name(v, kProductionKinds); }
std::string to_string(ExerciseType v) { return enum_name(v, kExerciseTypes); }
std::string to_string(Variant v) { return enum_name(v, kVariants); }
std::string to_string(HomeworkOrigin v) { return enum_name(v, kOrigins); }
std::string to_string(Phase v) { return enum_name(v, kPhases); }
std::string to_string(OutcomeResult v) { return enum_name(v, kResults); }

MediaKind parse_media_kind(std::string_view s) { return enum_parse(s, kMediaKinds, "media kind"); }
PartOfSpeech parse_part_of_speech(std::string_view s) { return enum_parse(s, kPartsOfSpeech, "part of speech"); }
Gender parse_gender(std::string_view s) { return enum_parse(s, kGenders, "gender"); }
ProductionKind parse_production_kind(std::string_view s) {
  return enum_parse(s, kProductionKinds, "production kind");
}
ExerciseType parse_exercise_type(std::string_view s) { return enum_parse(s, kExerciseTypes, "exercise type"); }
Variant parse_variant(std::string_view s) { return enum_parse(s, kVariants, "variant"); }

std::string format_rational(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

bool WordEntry::has_sound(const SoundTag& sound) const {
  return std::any_of(sounds.begin(), sounds.end(), [&](const TaggedSound& t) { return t.sound == sound; });
}

WordFields WordEntry::fields() const {
  WordFields f;
  f.text = text;
  f.first_syllable = first_syllable;
  f.part_of_speech = part_of_speech;
  f.gender = gender;
  f.articulated = articulated;
  f.audio = audio;
  f.syllabified_audio = syllabified_audio;
  f.image = image;
  for (const auto& t : sounds) {
    if (t.override_mark) f.sound_overrides.push_back(t.sound);
  }
  return f;
}



void to_json(Json& j, const MediaAsset& v) {
  j = Json{{"id", v.id},
           {"kind", to_string(v.kind)},
           {"content_hash", v.content_hash},
           {"byte_size", v.byte_size},
           {"original_filename", v.original_filename},
           {"version", v.version}};
  put_optional(j, "duration_ms", v.duration_ms);
}

void from_json(const Json& j, MediaAsset& v) {
  v.id = j.at("id").get<std::string>();
  v.kind = parse_media_kind(j.at("kind").get<std::string>());
  v.content_hash = j.at("content_hash").get<std::string>();
  v.byte_size = j.at("byte_size").get<std::int64_t>();
  v.duration_ms = get_optional<std::int64_t>(j, "duration_ms");
  v.original_filename = j.value("original_filename", std::string{});
  v.version = j.value("version", std::int64_t{0});
}

void to_json(Json& j, const WordFields& v) {
  j = Json{{"text", v.text},
           {"first_syllable", v.first_syllable},
           {"part_of_speech", to_string(v.part_of_speech)},
           {"gender", to_string(v.gender)},
           {"articulated", v.articulated},
           {"audio", v.audio},
           {"sound_overrides", v.sound_overrides}};
  put_optional(j, "syllabified_audio", v.syllabified_audio);
  put_optional(j, "image", v.image);
}

void from_json(const Json& j, WordFields& v) {
  v.text = j.at("text").get<std::string>();
  v.first_syllable = j.value("first_syllable", std::string{});
  v.part_of_speech = parse_part_of_speech(j.value("part_of_speech", std::string{"noun"}));
  v.gender = parse_gender(j.value("gender", std::string{"not_applicable"}));
  v.articulated = j.value("articulated", false);
  v.audio = j.value("audio", std::string{});
  v.syllabified_audio = get_optional<std::string>(j, "syllabified_audio");
  v.image = get_optional<std::string>(j, "image");
  v.sound_overrides = j.value("sound_overrides", std::vector<SoundTag>{});
}

void to_json(Json& j, const WordEntry& v) {
  Json sounds = Json::array();
  for (const auto& t : v.sounds) {
    Json s{{"symbol", t.sound.symbol()}};
    if (t.override_mark) s["override"] = true;
    sounds.push_back(std::move(s));
  }
  j = Json{{"id", v.id},
           {"text", v.text},
           {"first_syllable", v.first_syllable},
           {"part_of_speech", to_string(v.part_of_speech)},
           {"gender", to_string(v.gender)},
           {"articulated", v.articulated},
           {"audio", v.audio},
           {"sounds", std::move(sounds)},
           {"version", v.version}};
  put_optional(j, "syllabified_audio", v.syllabified_audio);
  put_optional(j, "image", v.image);
}

void from_json(const Json& j, WordEntry& v) {
  v.id = j.at("id").get<std::string>();
  v.text = j.at("text").get<std::string>();
  v.first_syllable = j.at("first_syllable").get<std::string>();
  v.part_of_speech = parse_part_of_speech(j.at("part_of_speech").get<std::string>());
  v.gender = parse_gender(j.at("gender").get<std::string>());
  v.articulated = j.at("articulated").get<bool>();
  v.audio = j.at("audio").get<std::string>();
  v.syllabified_audio = get_optional<std::string>(j, "syllabified_audio");
  v.image = get_optional<std::string>(j, "image");
  v.sounds.clear();
  for (const auto& s : j.at("sounds")) {
    v.sounds.push_back({SoundTag::parse(s.at("symbol").get<std::string>()), s.value("override", false)});
  }
  v.version = j.value("version", std::int64_t{0});
}

void to_json(Json& j, const ProductionFields& v) {
  j = Json{{"kind", to_string(v.kind)},
           {"text", v.text},
           {"parts", v.parts},
           {"target_sound", v.target_sound},
           {"audio", v.audio}};
}

void from_json(const Json& j, ProductionFields& v) {
  v.kind = parse_production_kind(j.at("kind").get<std::string>());
  v.text = j.at("text").get<std::string>();
  v.parts = j.value("parts", std::vector<std::string>{});
  v.target_sound = j.at("target_sound").get<SoundTag>();
  v.audio = j.value("audio", std::string{});
}

void to_json(Json& j, const VocalProduction& v) {
  j = Json{{"id", v.id},
           {"kind", to_string(v.kind)},
           {"text", v.text},
           {"parts", v.parts},
           {"audio", v.audio},
           {"target_sound", v.target_sound},
           {"version", v.version}};
  put_optional(j, "sound_bearing_part", v.sound_bearing_part);
}

void from_json(const Json& j, VocalProduction& v) {
  v.id = j.at("id").get<std::string>();
  v.kind = parse_production_kind(j.at("kind").get<std::string>());
  v.text = j.at("text").get<std::string>();
  v.parts = j.at("parts").get<std::vector<std::string>>();
  v.audio = j.at("audio").get<std::string>();
  v.target_sound = j.at("target_sound").get<SoundTag>();
  v.sound_bearing_part = get_optional<int>(j, "sound_bearing_part");
  v.version = j.value("version", std::int64_t{0});
}

void to_json(Json& j, const ExerciseItem& v) {
  j = Json{{v.ref.kind == RefKind::word ? "word" : "production", v.ref.id},
           {"response_window_s", v.response_window_s},
           {"contains_target", v.contains_target},
           {"override", v.override_mark},
           {"swapped", v.swapped}};
  put_optional(j, "pair_word", v.pair_word);
}

void from_json(const Json& j, ExerciseItem& v) {
  const bool has_word = j.contains("word");
  const bool has_production = j.contains("production");
  if (has_word == has_production) {
    fail(ErrorCode::InvalidArgument, "exercise item needs exactly one of 'word' or 'production'");
  }
  v.ref = has_word ? ItemRef{RefKind::word, j.at("word").get<std::string>()}
                   : ItemRef{RefKind::production, j.at("production").get<std::string>()};
  v.pair_word = get_optional<std::string>(j, "pair_word");
  v.response_window_s = j.at("response_window_s").get<int>();
  v.contains_target = j.at("contains_target").get<bool>();
  v.override_mark = j.value("override", false);
  v.swapped = j.value("swapped", false);
}

void to_json(Json& j, const Exercise& v) {
  j = Json{{"id", v.id},
           {"type", to_string(v.type)},
           {"target_sound", v.target_sound},
           {"difficulty", v.difficulty},
           {"instruction_text", v.instruction_text},
           {"instruction_audio", v.instruction_audio},
           {"variant", to_string(v.variant)},
           {"items", v.items},
           {"version", v.version}};
}

void from_json(const Json& j, Exercise& v) {
  v.id = j.value("id", std::string{});
  v.type = parse_exercise_type(j.at("type").get<std::string>());
  v.target_sound = j.at("target_sound").get<SoundTag>();
  v.difficulty = j.at("difficulty").get<int>();
  v.instruction_text = j.value("instruction_text", std::string{});
  v.instruction_audio = j.value("instruction_audio", std::string{});
  v.variant = parse_variant(j.value("variant", std::string{"none"}));
  v.items = j.at("items").get<std::vector<ExerciseItem>>();
  v.version = j.value("version", std::int64_t{0});
}

void to_json(Json& j, const ChildProfile& v) {
  j = Json{{"id", v.id},
           {"name", v.name},
           {"birth_year", v.birth_year},
           {"impaired_sounds", v.impaired_sounds},
           {"report_notes", v.report_notes},
           {"version", v.version}};
}

void from_json(const Json& j, ChildProfile& v) {
  v.id = j.value("id", std::string{});
  v.name = j.at("name").get<std::string>();
  v.birth_year = j.at("birth_year").get<int>();
  v.impaired_sounds = j.at("impaired_sounds").get<std::set<SoundTag>>();
  v.report_notes = j.value("report_notes", std::string{});
  v.version = j.value("version", std::int64_t{0});
}

void to_json(Json& j, const Homework& v) {
  j = Json{{"id", v.id},
           {"child_id", v.child_id},
           {"exercise_ids", v.exercise_ids},
           {"origin", to_string(v.origin)},
           {"assigned_at", format_timestamp(v.assigned_at)},
           {"policy_trace", v.policy_trace},
           {"version", v.version}};
}

void from_json(const Json& j, Homework& v) {
  v.id = j.at("id").get<std::string>();
  v.child_id = j.at("child_id").get<std::string>();
  v.exercise_ids = j.at("exercise_ids").get<std::vector<std::string>>();
  v.origin = enum_parse(j.at("origin").get<std::string>(), kOrigins, "homework origin");
  v.assigned_at = get_timestamp(j, "assigned_at");
  v.policy_trace = j.value("policy_trace", std::string{});
  v.version = j.value("version", std::int64_t{0});
}

void to_json(Json& j, const ScoreEntry& v) {
  j = Json{{"session_id", v.session_id},
           {"child_id", v.child_id},
           {"exercise_id", v.exercise_id},
           {"finished_at", format_timestamp(v.finished_at)},
           {"target_sound", v.target_sound},
           {"difficulty", v.difficulty},
           {"accuracy", v.accuracy},
           {"version", v.version}};
}

void from_json(const Json& j, ScoreEntry& v) {
  v.session_id = j.at("session_id").get<std::string>();
  v.child_id = j.at("child_id").get<std::string>();
  v.exercise_id = j.at("exercise_id").get<std::string>();
  v.finished_at = get_timestamp(j, "finished_at");
  v.target_sound = j.at("target_sound").get<SoundTag>();
  v.difficulty = j.at("difficulty").get<int>();
  v.accuracy = j.at("accuracy").get<Rational>();
  v.version = j.value("version", std::int64_t{0});
}

void to_json(Json& j, const ItemOutcome& v) {
  j = Json{{"item_index", v.item_index},
           {"phase", to_string(v.phase)},
           {"choice", v.choice ? Json(*v.choice) : Json(nullptr)},
           {"elapsed_ms", v.elapsed_ms},
           {"result", to_string(v.result)}};
}

void from_json(const Json& j, ItemOutcome& v) {
  v.item_index = j.at("item_index").get<int>();
  v.phase = enum_parse(j.at("phase").get<std::string>(), kPhases, "phase");
  v.choice = get_optional<int>(j, "choice");
  v.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
  v.result = enum_parse(j.at("result").get<std::string>(), kResults, "outcome result");
}

void to_json(Json& j, const AnswerKey& v) {
  j = Json{{"expected", v.expected}, {"min_choice", v.min_choice}, {"max_choice", v.max_choice}};
}

void from_json(const Json& j, AnswerKey& v) {
  v.expected = j.at("expected").get<int>();
  v.min_choice = j.at("min_choice").get<int>();
  v.max_choice = j.at("max_choice").get<int>();
}

void to_json(Json& j, const Session& v) {
  j = Json{{"id", v.id},
           {"exercise_id", v.exercise_id},
           {"child_id", v.child_id},
           {"phase", to_string(v.phase)},
           {"cursor", v.cursor},
           {"pending_retry", v.pending_retry},
           {"outcomes", v.outcomes},
           {"flowers", v.flowers},
           {"started_at", format_timestamp(v.started_at)},
           {"answer_key", v.answer_key},
           {"finalized", v.finalized},
           {"version", v.version}};
}

void from_json(const Json& j, Session& v) {
  v.id = j.at("id").get<std::string>();
  v.exercise_id = j.at("exercise_id").get<std::string>();
  v.child_id = j.at("child_id").get<std::string>();
  v.phase = enum_parse(j.at("phase").get<std::string>(), kPhases, "phase");
  v.cursor = j.at("cursor").get<int>();
  v.pending_retry = j.at("pending_retry").get<std::vector<int>>();
  v.outcomes = j.at("outcomes").get<std::vector<ItemOutcome>>();
  v.flowers = j.at("flowers").get<int>();
  v.started_at = get_timestamp(j, "started_at");
  v.answer_key = j.at("answer_key").get<std::vector<AnswerKey>>();
  v.finalized = j.value("finalized", false);
  v.version = j.value("version", std::int64_t{0});
}

void to_json(Json& j, const SessionResult& v) {
  j = Json{{"session_id", v.session_id},
           {"exercise_id", v.exercise_id},
           {"child_id", v.child_id},
           {"accuracy", v.accuracy},
           {"flowers", v.flowers},
           {"item_count", v.item_count},
           {"target_sound", v.target_sound},
           {"difficulty", v.difficulty},
           {"outcomes", v.outcomes},
           {"version", v.version}};
  if (v.finished_at) j["finished_at"] = format_timestamp(*v.finished_at);
}

void from_json(const Json& j, SessionResult& v) {
  v.session_id = j.at("session_id").get<std::string>();
  v.exercise_id = j.at("exercise_id").get<std::string>();
  v.child_id = j.at("child_id").get<std::string>();
  if (auto ts = get_optional<std::string>(j, "finished_at")) {
    v.finished_at = parse_timestamp(*ts);
  } else {
    v.finished_at.reset();
  }
  v.accuracy = j.at("accuracy").get<Rational>();
  v.flowers = j.at("flowers").get<int>();
  v.item_count = j.at("item_count").get<int>();
  v.target_sound = j.at("target_sound").get<SoundTag>();
  v.difficulty = j.at("difficulty").get<int>();
  v.outcomes = j.at("outcomes").get<std::vector<ItemOutcome>>();
  v.version = j.value("version", std::int64_t{0});
}

}  // namespace logoped

namespace nlohmann {
logoped::SoundTag adl_serializer<logoped::SoundTag>::from_json(const json& j) {
  return logoped::SoundTag::parse(j.get<std::string>());
}
void adl_serializer<logoped::SoundTag>::to_json(json& j, const logoped::SoundTag& v) { j = v.symbol(); }
}  // namespace nlohmann

namespace nlohmann {
logoped::Rational adl_serializer<logoped::Rational>::from_json(const json& j) {
  const auto den = j.at("den").get<std::int64_t>();
  if (den <= 0) logoped::fail(logoped::ErrorCode::InvalidArgument, "rational denominator must be positive");
  return logoped::Rational(j.at("num").get<std::int64_t>(), den);
}
void adl_serializer<logoped::Rational>::to_json(json& j, const logoped::Rational& v) {
  j = json{{"num", v.numerator()}, {"den", v.denominator()}};
}
}  // namespace nlohmann
