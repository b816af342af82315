#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "logoped/model.hpp"
#include "logoped/store.hpp"

namespace logoped {

// Words and vocal productions: the lexical units exercises are built from.

/// Validates and persists a word with version 1. `sounds` is the detected
/// set merged with fields.sound_overrides.
/// Errors: EmptyText, MissingAudio, DanglingAssetRef, WrongAssetKind,
/// FirstSyllableNotPrefix, ImageOnNonNoun, GenderOnNonNoun.
WordEntry create_word(Store& store, const WordFields& fields);

/// Full replacement of the word's fields. Errors: NotFound, StaleVersion and
/// everything create_word raises.
WordEntry update_word(Store& store, std::string_view id, const WordFields& fields, std::int64_t expected_version);

/// Refuses with ReferencedByExercise (details = exercise ids).
void delete_word(Store& store, std::string_view id);

WordEntry get_word(const Store& store, std::string_view id);

/// Words whose text contains `query` (case-insensitive, diacritics kept),
/// filtered by sound and part of speech, ordered by text bytes then id.
std::vector<WordEntry> search_words(const Store& store, std::string_view query,
                                    const std::optional<SoundTag>& sound = std::nullopt,
                                    const std::optional<PartOfSpeech>& part_of_speech = std::nullopt);

/// The merged sound set create_word would store for these fields.
std::vector<TaggedSound> merge_sounds(std::string_view text, const std::vector<SoundTag>& overrides);

/// Throws the first failing word rule; does not touch the store.
void check_word_fields(const Store& store, const WordFields& fields);

/// Errors: EmptyText, MissingAudio, DanglingAssetRef, WrongAssetKind,
/// PrefixChainBroken, PairArityWrong, PairSoundAmbiguous, PartsArityWrong.
VocalProduction create_production(Store& store, const ProductionFields& fields);

/// Kind-specific part rules only (no store access). Returns the
/// sound-bearing part index for paronym pairs.
std::optional<int> check_production_parts(const ProductionFields& fields);

VocalProduction get_production(const Store& store, std::string_view id);
std::vector<VocalProduction> list_productions(const Store& store);

/// Refuses with ReferencedByExercise.
void delete_production(Store& store, std::string_view id);

}  // namespace logoped
