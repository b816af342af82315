#include "logoped/text.hpp"

#include "logoped/error.hpp"

namespace logoped {

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
      cp = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      cp = lead & 0x1F;
      extra = 1;
    } else if ((lead & 0xF0) == 0xE0) {
      cp = lead & 0x0F;
      extra = 2;
    } else if ((lead & 0xF8) == 0xF0) {
      cp = lead & 0x07;
      extra = 3;
    } else {
      fail(ErrorCode::InvalidArgument, "invalid UTF-8 lead byte");
    }
    if (extra > 0 && i + static_cast<std::size_t>(extra) >= text.size()) {
      fail(ErrorCode::InvalidArgument, "truncated UTF-8 sequence");
    }
    for (int k = 1; k <= extra; ++k) {
      const auto cont = static_cast<unsigned char>(text[i + k]);
      if ((cont & 0xC0) != 0x80) fail(ErrorCode::InvalidArgument, "invalid UTF-8 continuation byte");
      cp = (cp << 6) | (cont & 0x3F);
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

namespace {

char32_t fold_char(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + (U'a' - U'A');
  switch (c) {
    case U'Ă': return U'ă';
    case U'Â': return U'â';
    case U'Î': return U'î';
    case U'Ș':
    case U'Ş':
    case U'ş': return U'ș';
    case U'Ț':
    case U'Ţ':
    case U'ţ': return U'ț';
    default: return c;
  }
}

char32_t upper_char(char32_t c) {
  c = fold_char(c);
  if (c >= U'a' && c <= U'z') return c - (U'a' - U'A');
  switch (c) {
    case U'ă': return U'Ă';
    case U'â': return U'Â';
    case U'î': return U'Î';
    case U'ș': return U'Ș';
    case U'ț': return U'Ț';
    default: return c;
  }
}

}  // namespace

std::u32string fold(std::u32string_view text) {
  std::u32string out(text);
  for (auto& c : out) c = fold_char(c);
  return out;
}

std::string fold(std::string_view text) { return encode_utf8(fold(decode_utf8(text))); }

std::string to_upper(std::string_view text) {
  auto cps = decode_utf8(text);
  for (auto& c : cps) c = upper_char(c);
  return encode_utf8(cps);
}

std::size_t utf8_length(std::string_view text) { return decode_utf8(text).size(); }

bool contains_folded(std::string_view haystack, std::string_view needle) {
  return fold(haystack).find(fold(needle)) != std::string::npos;
}

bool starts_with_folded(std::string_view text, std::string_view prefix) {
  return fold(text).starts_with(fold(prefix));
}

bool is_romanian_letter(char32_t c) {
  if (c >= U'a' && c <= U'z') return true;
  return c == U'ă' || c == U'â' || c == U'î' || c == U'ș' || c == U'ț';
}

SoundTag SoundTag::parse(std::string_view symbol) {
  std::u32string cps;
  try {
    cps = fold(decode_utf8(symbol));
  } catch (const Error&) {
    fail(ErrorCode::InvalidSoundTag, "sound tag is not valid UTF-8");
  }
  if (cps.empty() || cps.size() > 2) {
    fail(ErrorCode::InvalidSoundTag, "sound tag must be 1-2 letters: '" + std::string(symbol) + "'");
  }
  for (char32_t c : cps) {
    if (!is_romanian_letter(c)) {
      fail(ErrorCode::InvalidSoundTag, "sound tag has a non-Romanian letter: '" + std::string(symbol) + "'");
    }
  }
  return SoundTag(to_upper(encode_utf8(cps)));
}

std::string SoundTag::folded() const { return fold(std::string_view(symbol_)); }

bool text_contains_sound(std::string_view text, const SoundTag& sound) {
  return fold(text).find(sound.folded()) != std::string::npos;
}

std::set<SoundTag> detect_sounds(std::string_view text) {
  if (text.empty()) fail(ErrorCode::EmptyText, "cannot detect sounds in empty text");
  std::set<SoundTag> out;
  for (char32_t c : fold(decode_utf8(text))) {
    if (is_romanian_letter(c)) out.insert(SoundTag::parse(encode_utf8(std::u32string(1, c))));
  }
  return out;
}

}  // namespace logoped
