#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace logoped {

/// Stable machine tokens for every failure the engine can report. The string
/// form (see to_string) is part of the CLI and HTTP contracts.
enum class ErrorCode {
  NotFound,
  StaleVersion,
  ReferencedElsewhere,
  ReferencedByExercise,
  DanglingRef,
  DanglingAssetRef,
  EmptyFile,
  UndecodableAudioHeader,
  UnsupportedImageFormat,
  WrongAssetKind,
  MissingAudio,
  EmptyText,
  FirstSyllableNotPrefix,
  ImageOnNonNoun,
  GenderOnNonNoun,
  InvalidSoundTag,
  PrefixChainBroken,
  PairArityWrong,
  PairSoundAmbiguous,
  PartsArityWrong,
  ValidationFailed,
  UnknownTemplate,
  DifficultyOutOfRange,
  ExerciseInvalid,
  SessionFinished,
  SessionNotFinished,
  SessionBusy,
  ElapsedExceedsWindow,
  InvalidChoice,
  MalformedLog,
  EmptyExerciseList,
  NoExercisesForImpairedSounds,
  UnfinalizedResult,
  MissingMedia,
  CorruptArchive,
  HashMismatch,
  UnsupportedVersion,
  ImportConflict,
  AccuracyMismatch,
  UnknownExercise,
  StoreUnavailable,
  StoreBusy,
  BindFailure,
  InvalidArgument,
  UsageError,
};

std::string_view to_string(ErrorCode code);

/// One broken exercise invariant. `item` is the offending item index, or -1
/// for exercise-level fields.
struct Violation {
  std::string code;
  std::string message;
  int item = -1;

  bool operator==(const Violation&) const = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::vector<std::string> details = {});

  ErrorCode code() const noexcept { return code_; }
  /// Ids or hashes the error is about (referrers, corrupt entries, ...).
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

/// ValidationFailed carries the full violation list.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

[[noreturn]] void fail(ErrorCode code, std::string message, std::vector<std::string> details = {});

}  // namespace logoped
