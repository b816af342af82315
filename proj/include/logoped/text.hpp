#pragma once

#include <compare>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace logoped {

// UTF-8 helpers. Text in the catalog is Romanian: comparisons are
// case-insensitive but keep diacritics distinct ("s" != "ș").

std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

/// Lower-cases ASCII and the Romanian diacritic letters. Cedilla forms
/// (ş, ţ) are folded onto the comma-below letters (ș, ț).
std::u32string fold(std::u32string_view text);
std::string fold(std::string_view text);

/// Number of code points.
std::size_t utf8_length(std::string_view text);

bool contains_folded(std::string_view haystack, std::string_view needle);
bool starts_with_folded(std::string_view text, std::string_view prefix);

/// Code points of the Romanian alphabet (lower case): a-z plus ă â î ș ț.
bool is_romanian_letter(char32_t folded);

/// A target sound, e.g. "R", "Ș", "CE". Always stored upper case.
class SoundTag {
 public:
  /// Throws Error(InvalidSoundTag) unless `symbol` is 1-2 Romanian letters.
  static SoundTag parse(std::string_view symbol);

  const std::string& symbol() const noexcept { return symbol_; }
  /// Lower-case form used for containment checks.
  std::string folded() const;

  auto operator<=>(const SoundTag&) const = default;

 private:
  explicit SoundTag(std::string symbol) : symbol_(std::move(symbol)) {}
  std::string symbol_;
};

bool text_contains_sound(std::string_view text, const SoundTag& sound);

/// Every single-letter sound occurring in `text` (case-folded). Throws
/// Error(EmptyText) on empty input.
std::set<SoundTag> detect_sounds(std::string_view text);

std::string to_upper(std::string_view text);

}  // namespace logoped
