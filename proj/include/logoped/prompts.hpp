#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "logoped/model.hpp"

namespace logoped {

/// Definite-article form of a Romanian noun from its gender ("casă" ->
/// "casa", "vas" -> "vasul", "soare" -> "soarele"). Words already marked
/// articulated, and non-nouns, are returned unchanged.
std::string articulated_form(const WordEntry& word);

/// Prompt patterns loaded from a UTF-8 key-value file:
///
///   # comment
///   point_to = Arată {articulated_form}!
///   find.feminine = Găsește {articulated_form} și arat-o!
///
/// A "<id>.<gender>" key overrides "<id>" for words of that gender. Slots:
/// {word}, {articulated_form}, {first_syllable}.
class PromptTemplates {
 public:
  /// Throws Error(InvalidArgument) on a line without '='.
  static PromptTemplates parse(std::string_view text);
  static PromptTemplates load(const std::filesystem::path& path);

  /// Throws Error(UnknownTemplate).
  std::string formulate(const WordEntry& word, std::string_view template_id) const;

  /// Base template ids (without gender suffix), sorted.
  std::vector<std::string> ids() const;

 private:
  std::map<std::string, std::string, std::less<>> patterns_;
};

}  // namespace logoped
