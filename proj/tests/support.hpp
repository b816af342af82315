#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "logoped/catalog.hpp"
#include "logoped/clock.hpp"
#include "logoped/error.hpp"
#include "logoped/exercise.hpp"
#include "logoped/model.hpp"
#include "logoped/store.hpp"

namespace logoped::testing {

/// Code of the Error `f` throws; UsageError (never raised by the library
/// outside the CLI) when it throws nothing.
template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::UsageError;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Mono 8-bit PCM at 1000 Hz, so data bytes == duration_ms. `seed` varies
/// the samples and therefore the hash.
std::string wav(std::int64_t duration_ms, std::uint32_t seed);
std::string png(std::uint32_t seed);

/// 2026-01-01T00:00:00Z plus an offset.
Timestamp day(int days, int seconds = 0);

/// A store in a temp dir with helpers that create valid catalog entries.
class World {
 public:
  World();

  Store& store() { return *store_; }
  const std::filesystem::path& root() const { return dir_.path(); }

  std::string audio();
  std::string image();

  WordEntry word(const std::string& text, const std::string& first_syllable = "", Gender gender = Gender::feminine,
                 bool with_image = false, PartOfSpeech pos = PartOfSpeech::noun);
  VocalProduction production(ProductionKind kind, const std::string& text, std::vector<std::string> parts,
                             const std::string& sound);
  ChildProfile child(const std::vector<std::string>& sounds, const std::string& name = "Ana");

  /// Item for a word, flagged from its sounds.
  ExerciseItem item(const WordEntry& w, const std::string& sound, int window_s = 5);
  ExerciseItem item(const VocalProduction& p, const std::string& sound, int window_s = 5);
  Exercise draft(ExerciseType type, const std::string& sound, std::vector<ExerciseItem> items, int difficulty = 3,
                 Variant variant = Variant::none);

 private:
  TempDir dir_;
  std::unique_ptr<Store> store_;
  std::uint32_t seed_ = 1;
  std::optional<std::string> instruction_audio_;
};

}  // namespace logoped::testing
