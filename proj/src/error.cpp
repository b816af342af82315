#include "logoped/error.hpp"

namespace logoped {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::StaleVersion: return "StaleVersion";
    case ErrorCode::ReferencedElsewhere: return "ReferencedElsewhere";
    case ErrorCode::ReferencedByExercise: return "ReferencedByExercise";
    case ErrorCode::DanglingRef: return "DanglingRef";
    case ErrorCode::DanglingAssetRef: return "DanglingAssetRef";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::UndecodableAudioHeader: return "UndecodableAudioHeader";
    case ErrorCode::UnsupportedImageFormat: return "UnsupportedImageFormat";
    case ErrorCode::WrongAssetKind: return "WrongAssetKind";
    case ErrorCode::MissingAudio: return "MissingAudio";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::FirstSyllableNotPrefix: return "FirstSyllableNotPrefix";
    case ErrorCode::ImageOnNonNoun: return "ImageOnNonNoun";
    case ErrorCode::GenderOnNonNoun: return "GenderOnNonNoun";
    case ErrorCode::InvalidSoundTag: return "InvalidSoundTag";
    case ErrorCode::PrefixChainBroken: return "PrefixChainBroken";
    case ErrorCode::PairArityWrong: return "PairArityWrong";
    case ErrorCode::PairSoundAmbiguous: return "PairSoundAmbiguous";
    case ErrorCode::PartsArityWrong: return "PartsArityWrong";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::UnknownTemplate: return "UnknownTemplate";
    case ErrorCode::DifficultyOutOfRange: return "DifficultyOutOfRange";
    case ErrorCode::ExerciseInvalid: return "ExerciseInvalid";
    case ErrorCode::SessionFinished: return "SessionFinished";
    case ErrorCode::SessionNotFinished: return "SessionNotFinished";
    case ErrorCode::SessionBusy: return "SessionBusy";
    case ErrorCode::ElapsedExceedsWindow: return "ElapsedExceedsWindow";
    case ErrorCode::InvalidChoice: return "InvalidChoice";
    case ErrorCode::MalformedLog: return "MalformedLog";
    case ErrorCode::EmptyExerciseList: return "EmptyExerciseList";
    case ErrorCode::NoExercisesForImpairedSounds: return "NoExercisesForImpairedSounds";
    case ErrorCode::UnfinalizedResult: return "UnfinalizedResult";
    case ErrorCode::MissingMedia: return "MissingMedia";
    case ErrorCode::CorruptArchive: return "CorruptArchive";
    case ErrorCode::HashMismatch: return "HashMismatch";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::ImportConflict: return "ImportConflict";
    case ErrorCode::AccuracyMismatch: return "AccuracyMismatch";
    case ErrorCode::UnknownExercise: return "UnknownExercise";
    case ErrorCode::StoreUnavailable: return "StoreUnavailable";
    case ErrorCode::StoreBusy: return "StoreBusy";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string message, std::vector<std::string> details)
    : std::runtime_error(std::move(message)), code_(code), details_(std::move(details)) {}

namespace {
std::string summarize(const std::vector<Violation>& violations) {
  std::string out = "exercise failed validation:";
  for (const auto& v : violations) {
    out += ' ';
    out += v.code;
    if (v.item >= 0) out += "(item " + std::to_string(v.item) + ")";
  }
  return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(ErrorCode::ValidationFailed, summarize(violations)), violations_(std::move(violations)) {}

void fail(ErrorCode code, std::string message, std::vector<std::string> details) {
  throw Error(code, std::move(message), std::move(details));
}

}  // namespace logoped
