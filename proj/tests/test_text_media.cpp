#include <gtest/gtest.h>

#include <random>

#include "logoped/error.hpp"
#include "logoped/media.hpp"
#include "logoped/repository.hpp"
#include "logoped/text.hpp"
#include "support.hpp"

using namespace logoped;
using namespace logoped::testing;

namespace {

std::set<std::string> symbols(const std::set<SoundTag>& tags) {
  std::set<std::string> out;
  for (const auto& t : tags) out.insert(t.symbol());
  return out;
}

// Each letter as (lowercase, uppercase, extra spellings that mean it).
struct Letter {
  std::string lower;
  std::string upper;
  std::vector<std::string> variants;
};

std::vector<Letter> romanian_alphabet() {
  std::vector<Letter> out;
  for (char c = 'a'; c <= 'z'; ++c) out.push_back({std::string(1, c), std::string(1, char(c - 32)), {}});
  out.push_back({"ă", "Ă", {}});
  out.push_back({"â", "Â", {}});
  out.push_back({"î", "Î", {}});
  out.push_back({"ș", "Ș", {"ş", "Ş"}});
  out.push_back({"ț", "Ț", {"ţ", "Ţ"}});
  return out;
}

}  // namespace

TEST(DetectSounds, SpecExamples) {
  EXPECT_EQ(symbols(detect_sounds("soare")), (std::set<std::string>{"S", "O", "A", "R", "E"}));
  EXPECT_EQ(symbols(detect_sounds("casă")), (std::set<std::string>{"C", "A", "S", "Ă"}));
  EXPECT_EQ(symbols(detect_sounds("s")), (std::set<std::string>{"S"}));
  EXPECT_EQ(code_of([] { detect_sounds(""); }), ErrorCode::EmptyText);
}

TEST(DetectSounds, MatchesCharacterScanOracle) {
  const auto alphabet = romanian_alphabet();
  std::mt19937 rng(7);
  for (int round = 0; round < 500; ++round) {
    std::vector<std::string> pieces;
    std::set<std::string> expected;
    const int len = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < len; ++i) {
      if (rng() % 8 == 0) {
        pieces.push_back((rng() % 2) ? " " : "-");
        continue;
      }
      const auto& letter = alphabet[rng() % alphabet.size()];
      std::vector<std::string> spellings{letter.lower, letter.upper};
      spellings.insert(spellings.end(), letter.variants.begin(), letter.variants.end());
      pieces.push_back(spellings[rng() % spellings.size()]);
      expected.insert(letter.upper);
    }
    std::string text;
    std::string prefix;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      text += pieces[i];
      if (i < (pieces.size() + 1) / 2) prefix += pieces[i];
    }
    EXPECT_EQ(symbols(detect_sounds(text)), expected) << text;
    // monotone under extension
    const auto whole = detect_sounds(text);
    for (const auto& t : detect_sounds(prefix)) EXPECT_TRUE(whole.count(t)) << prefix << " / " << text;
  }
}

TEST(SoundTag, NormalizesAndRejects) {
  EXPECT_EQ(SoundTag::parse("s").symbol(), "S");
  EXPECT_EQ(SoundTag::parse("ş").symbol(), "Ș");
  EXPECT_EQ(SoundTag::parse("ce").symbol(), "CE");
  EXPECT_EQ(code_of([] { SoundTag::parse(""); }), ErrorCode::InvalidSoundTag);
  EXPECT_EQ(code_of([] { SoundTag::parse("abc"); }), ErrorCode::InvalidSoundTag);
  EXPECT_EQ(code_of([] { SoundTag::parse("1"); }), ErrorCode::InvalidSoundTag);
  EXPECT_EQ(code_of([] { SoundTag::parse("ö"); }), ErrorCode::InvalidSoundTag);
}

TEST(Text, FoldingKeepsDiacritics) {
  EXPECT_TRUE(contains_folded("CASĂ", "să"));
  EXPECT_FALSE(contains_folded("casa", "să"));
  EXPECT_TRUE(starts_with_folded("Șarpe", "șa"));
  EXPECT_TRUE(starts_with_folded("Şarpe", "șa"));
  EXPECT_EQ(utf8_length("țânțar"), 6u);
  EXPECT_EQ(code_of([] { decode_utf8("\xC3"); }), ErrorCode::InvalidArgument);
}

TEST(Clock, FormatParseRoundTrip) {
  const auto t = day(3, 3661) + std::chrono::milliseconds(45);
  EXPECT_EQ(format_timestamp(t), "2026-01-04T01:01:01.045Z");
  EXPECT_EQ(parse_timestamp(format_timestamp(t)), t);
  EXPECT_EQ(parse_timestamp("2026-01-04"), day(3));
  EXPECT_EQ(parse_timestamp("2026-01-04T01:01:01Z"), day(3, 3661));
  EXPECT_EQ(code_of([] { parse_timestamp("yesterday"); }), ErrorCode::InvalidArgument);
}

TEST(Media, WavDurationFromHeader) {
  EXPECT_EQ(audio_duration_ms(wav(1200, 1)), 1200);
  EXPECT_EQ(audio_duration_ms(png(1)), std::nullopt);
}

TEST(Media, Mp3DurationFromCbrHeader) {
  // MPEG-1 layer III, 128 kbps, 44.1 kHz, stereo: 0xFFFB9000
  std::string mp3("\xFF\xFB\x90\x00", 4);
  mp3 += std::string(16000 - 4, '\0');
  EXPECT_EQ(audio_duration_ms(mp3), 1000);  // 16000 bytes * 8 / 128 kbps
}

TEST(Media, Mp3DurationFromXingFrameCount) {
  std::string mp3("\xFF\xFB\x90\x00", 4);
  mp3 += std::string(32, '\0');
  mp3 += "Xing";
  mp3 += std::string("\x00\x00\x00\x01", 4);
  mp3 += std::string("\x00\x00\x00\x64", 4);  // 100 frames
  mp3 += std::string(400, '\0');
  EXPECT_EQ(audio_duration_ms(mp3), 100 * 1152 * 1000 / 44100);
}

TEST(Media, RegisterDeduplicatesAndValidates) {
  World w;
  const auto bytes = wav(1200, 42);
  const auto a = register_media(w.store(), bytes, MediaKind::audio, "soare.wav");
  EXPECT_EQ(a.kind, MediaKind::audio);
  EXPECT_EQ(a.duration_ms, 1200);
  EXPECT_EQ(a.id, sha256_hex(bytes));
  EXPECT_EQ(a.version, 1);
  EXPECT_EQ(register_media(w.store(), bytes, MediaKind::audio, "again.wav").id, a.id);
  EXPECT_EQ(read_media(w.store(), a.id), bytes);

  EXPECT_EQ(code_of([&] { register_media(w.store(), png(1), MediaKind::audio, "x.png"); }),
            ErrorCode::UndecodableAudioHeader);
  EXPECT_EQ(code_of([&] { register_media(w.store(), "", MediaKind::image, "e.png"); }), ErrorCode::EmptyFile);
  EXPECT_EQ(code_of([&] { register_media(w.store(), "GIF89a....", MediaKind::image, "x.gif"); }),
            ErrorCode::UnsupportedImageFormat);
  EXPECT_EQ(code_of([&] { register_media(w.store(), bytes, MediaKind::image, "x.png"); }),
            ErrorCode::UnsupportedImageFormat);

  const auto img = register_media(w.store(), png(9), MediaKind::image, "i.png");
  EXPECT_FALSE(img.duration_ms.has_value());
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
