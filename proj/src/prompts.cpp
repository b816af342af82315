#include "logoped/prompts.hpp"

#include <set>
#include <sstream>

#include "logoped/error.hpp"
#include "logoped/store.hpp"

namespace logoped {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool ends_with(const std::u32string& s, std::u32string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t at = s.find(from); at != std::string::npos; at = s.find(from, at + to.size())) {
    s.replace(at, from.size(), to);
  }
}

}  // namespace

std::string articulated_form(const WordEntry& word) {
  if (word.articulated || word.part_of_speech != PartOfSpeech::noun || word.gender == Gender::not_applicable) {
    return word.text;
  }
  auto w = decode_utf8(word.text);
  const auto lower = fold(std::u32string_view(w));
  if (word.gender == Gender::feminine) {
    if (ends_with(lower, U"ă")) {
      w.back() = U'a';
    } else if (ends_with(lower, U"ie")) {
      w.back() = U'a';
    } else if (ends_with(lower, U"e")) {
      w += U"a";
    } else if (ends_with(lower, U"a")) {
      w += U"ua";
    } else {
      w += U"a";
    }
    return encode_utf8(w);
  }
  // masculine and neuter share the singular article
  if (ends_with(lower, U"e")) {
    w += U"le";
  } else if (ends_with(lower, U"u")) {
    w += U"l";
  } else if (ends_with(lower, U"ă")) {
    w.back() = U'a';
  } else {
    w += U"ul";
  }
  return encode_utf8(w);
}

PromptTemplates PromptTemplates::parse(std::string_view text) {
  PromptTemplates out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::InvalidArgument, "prompt template line " + std::to_string(lineno) + " has no '='");
    }
    out.patterns_[trim(std::string_view(t).substr(0, eq))] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& path) { return parse(read_file(path)); }

std::string PromptTemplates::formulate(const WordEntry& word, std::string_view template_id) const {
  auto it = patterns_.find(std::string(template_id) + "." + to_string(word.gender));
  if (it == patterns_.end()) it = patterns_.find(template_id);
  if (it == patterns_.end() || template_id.find('.') != std::string_view::npos) {
    fail(ErrorCode::UnknownTemplate, "unknown prompt template '" + std::string(template_id) + "'");
  }
  std::string out = it->second;
  replace_all(out, "{articulated_form}", articulated_form(word));
  replace_all(out, "{first_syllable}", word.first_syllable);
  replace_all(out, "{word}", word.text);
  return out;
}

std::vector<std::string> PromptTemplates::ids() const {
  std::set<std::string> ids;
  for (const auto& [key, _] : patterns_) ids.insert(key.substr(0, key.find('.')));
  return {ids.begin(), ids.end()};
}

}  // namespace logoped
