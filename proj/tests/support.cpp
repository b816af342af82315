#include "support.hpp"

#include <atomic>
#include <unistd.h>

#include <random>

#include "logoped/homework.hpp"
#include "logoped/media.hpp"

namespace logoped::testing {

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("logoped-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" + std::to_string(rd()));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

namespace {

void put_le(std::string& out, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

std::string wav(std::int64_t duration_ms, std::uint32_t seed) {
  const auto data = static_cast<std::uint32_t>(duration_ms);
  std::string out = "RIFF";
  put_le(out, 36 + data, 4);
  out += "WAVEfmt ";
  put_le(out, 16, 4);
  put_le(out, 1, 2);     // PCM
  put_le(out, 1, 2);     // mono
  put_le(out, 1000, 4);  // sample rate
  put_le(out, 1000, 4);  // byte rate
  put_le(out, 1, 2);
  put_le(out, 8, 2);
  out += "data";
  put_le(out, data, 4);
  std::mt19937 rng(seed);
  for (std::uint32_t i = 0; i < data; ++i) out.push_back(static_cast<char>(rng() & 0xff));
  return out;
}

std::string png(std::uint32_t seed) {
  std::string out("\x89PNG\r\n\x1a\n", 8);
  put_le(out, seed, 4);
  out += "IHDR-fixture";
  return out;
}

Timestamp day(int days, int seconds) {
  return Timestamp{std::chrono::milliseconds{1767225600000LL}} + std::chrono::days{days} +
         std::chrono::seconds{seconds};
}

World::World() : store_(std::make_unique<Store>(dir_.path(), fixed_clock(day(0)))) {}

std::string World::audio() { return register_media(*store_, wav(300, seed_++), MediaKind::audio, "a.wav").id; }

std::string World::image() { return register_media(*store_, png(seed_++), MediaKind::image, "i.png").id; }

WordEntry World::word(const std::string& text, const std::string& first_syllable, Gender gender, bool with_image,
                      PartOfSpeech pos) {
  WordFields f;
  f.text = text;
  f.first_syllable = first_syllable.empty() ? text.substr(0, 1) : first_syllable;
  f.part_of_speech = pos;
  f.gender = pos == PartOfSpeech::noun ? gender : Gender::not_applicable;
  f.audio = audio();
  if (with_image) f.image = image();
  return create_word(*store_, f);
}

VocalProduction World::production(ProductionKind kind, const std::string& text, std::vector<std::string> parts,
                                  const std::string& sound) {
  ProductionFields f;
  f.kind = kind;
  f.text = text;
  f.parts = std::move(parts);
  f.target_sound = SoundTag::parse(sound);
  f.audio = audio();
  return create_production(*store_, f);
}

ChildProfile World::child(const std::vector<std::string>& sounds, const std::string& name) {
  ChildProfile c;
  c.name = name;
  c.birth_year = 2020;
  for (const auto& s : sounds) c.impaired_sounds.insert(SoundTag::parse(s));
  return add_child(*store_, c);
}

ExerciseItem World::item(const WordEntry& w, const std::string& sound, int window_s) {
  ExerciseItem it;
  it.ref = {RefKind::word, w.id};
  it.response_window_s = window_s;
  it.contains_target = w.has_sound(SoundTag::parse(sound));
  return it;
}

ExerciseItem World::item(const VocalProduction& p, const std::string& sound, int window_s) {
  ExerciseItem it;
  it.ref = {RefKind::production, p.id};
  it.response_window_s = window_s;
  CatalogSnapshot snap;
  snap.productions.emplace(p.id, p);
  it.contains_target = item_contains_target(it, SoundTag::parse(sound), snap);
  return it;
}

Exercise World::draft(ExerciseType type, const std::string& sound, std::vector<ExerciseItem> items, int difficulty,
                      Variant variant) {
  if (!instruction_audio_) instruction_audio_ = audio();
  Exercise e;
  e.type = type;
  e.target_sound = SoundTag::parse(sound);
  e.difficulty = difficulty;
  e.instruction_text = "Arată intrusul!";
  e.instruction_audio = *instruction_audio_;
  e.variant = variant;
  e.items = std::move(items);
  return e;
}

}  // namespace logoped::testing
