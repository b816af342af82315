#include "logoped/media.hpp"

#include <openssl/evp.h>

#include <array>
#include <filesystem>

#include "logoped/error.hpp"
#include "logoped/repository.hpp"

namespace logoped {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorCode::StoreUnavailable, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

namespace {

std::uint32_t le32(std::string_view b, std::size_t at) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3])) << 24;
}

std::uint32_t be32(std::string_view b, std::size_t at) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) << 24 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3]));
}

std::optional<std::int64_t> wav_duration_ms(std::string_view b) {
  if (b.size() < 12 || b.substr(0, 4) != "RIFF" || b.substr(8, 4) != "WAVE") return std::nullopt;
  std::optional<std::uint32_t> byte_rate;
  std::optional<std::uint32_t> data_size;
  std::size_t at = 12;
  while (at + 8 <= b.size()) {
    const auto id = b.substr(at, 4);
    const std::uint32_t size = le32(b, at + 4);
    const std::size_t body = at + 8;
    if (id == "fmt ") {
      if (size < 16 || body + 16 > b.size()) return std::nullopt;
      byte_rate = le32(b, body + 8);
    } else if (id == "data") {
      data_size = size;
      break;
    }
    at = body + size + (size & 1u);
  }
  if (!byte_rate || !data_size || *byte_rate == 0) return std::nullopt;
  return static_cast<std::int64_t>(*data_size) * 1000 / *byte_rate;
}

struct Mp3Frame {
  int version = 1;  // 1, 2, 25 (2.5)
  int layer = 3;
  int bitrate_kbps = 0;
  int sample_rate = 0;
  int samples_per_frame = 0;
  bool mono = false;
};

std::optional<Mp3Frame> parse_mp3_header(std::uint32_t h) {
  if ((h & 0xFFE00000u) != 0xFFE00000u) return std::nullopt;
  const int version_bits = (h >> 19) & 3;
  const int layer_bits = (h >> 17) & 3;
  const int bitrate_index = (h >> 12) & 0xF;
  const int sr_index = (h >> 10) & 3;
  if (version_bits == 1 || layer_bits == 0 || bitrate_index == 0 || bitrate_index == 15 || sr_index == 3) {
    return std::nullopt;
  }
  Mp3Frame f;
  f.version = version_bits == 3 ? 1 : version_bits == 2 ? 2 : 25;
  f.layer = 4 - layer_bits;
  static constexpr int kV1[3][16] = {
      {0, 32, 64, 96, 128, 160, 192, 224, 256, 288, 320, 352, 384, 416, 448, 0},
      {0, 32, 48, 56, 64, 80, 96, 112, 128, 160, 192, 224, 256, 320, 384, 0},
      {0, 32, 40, 48, 56, 64, 80, 96, 112, 128, 160, 192, 224, 256, 320, 0},
  };
  static constexpr int kV2[3][16] = {
      {0, 32, 48, 56, 64, 80, 96, 112, 128, 144, 160, 176, 192, 224, 256, 0},
      {0, 8, 16, 24, 32, 40, 48, 56, 64, 80, 96, 112, 128, 144, 160, 0},
      {0, 8, 16, 24, 32, 40, 48, 56, 64, 80, 96, 112, 128, 144, 160, 0},
  };
  f.bitrate_kbps = f.version == 1 ? kV1[f.layer - 1][bitrate_index] : kV2[f.layer - 1][bitrate_index];
  static constexpr int kRates[3] = {44100, 48000, 32000};
  f.sample_rate = kRates[sr_index] / (f.version == 1 ? 1 : f.version == 2 ? 2 : 4);
  if (f.layer == 1) {
    f.samples_per_frame = 384;
  } else if (f.layer == 2 || f.version == 1) {
    f.samples_per_frame = 1152;
  } else {
    f.samples_per_frame = 576;
  }
  f.mono = ((h >> 6) & 3) == 3;
  return f;
}

std::optional<std::int64_t> mp3_duration_ms(std::string_view b) {
  std::size_t at = 0;
  if (b.size() >= 10 && b.substr(0, 3) == "ID3") {
    const std::size_t tag = (static_cast<std::size_t>(b[6] & 0x7F) << 21) |
                            (static_cast<std::size_t>(b[7] & 0x7F) << 14) |
                            (static_cast<std::size_t>(b[8] & 0x7F) << 7) | static_cast<std::size_t>(b[9] & 0x7F);
    at = 10 + tag + ((b[5] & 0x10) ? 10 : 0);
  }
  if (at + 4 > b.size()) return std::nullopt;
  const auto frame = parse_mp3_header(be32(b, at));
  if (!frame) return std::nullopt;

  // Xing/Info header sits after the side info of the first frame.
  std::size_t side_info = 0;
  if (frame->version == 1) {
    side_info = frame->mono ? 17 : 32;
  } else {
    side_info = frame->mono ? 9 : 17;
  }
  const std::size_t xing = at + 4 + side_info;
  if (xing + 12 <= b.size() && (b.substr(xing, 4) == "Xing" || b.substr(xing, 4) == "Info")) {
    if (be32(b, xing + 4) & 1u) {
      const std::int64_t frames = be32(b, xing + 8);
      return frames * frame->samples_per_frame * 1000 / frame->sample_rate;
    }
  }
  const std::size_t vbri = at + 4 + 32;
  if (vbri + 18 <= b.size() && b.substr(vbri, 4) == "VBRI") {
    const std::int64_t frames = be32(b, vbri + 14);
    return frames * frame->samples_per_frame * 1000 / frame->sample_rate;
  }

  std::int64_t audio_bytes = static_cast<std::int64_t>(b.size() - at);
  if (b.size() >= 128 && b.substr(b.size() - 128, 3) == "TAG") audio_bytes -= 128;
  return audio_bytes * 8 / frame->bitrate_kbps;
}

}  // namespace

std::optional<std::int64_t> audio_duration_ms(std::string_view bytes) {
  auto d = wav_duration_ms(bytes);
  if (!d) d = mp3_duration_ms(bytes);
  if (d && *d < 1) return std::nullopt;
  return d;
}

std::optional<ImageFormat> sniff_image(std::string_view b) {
  if (b.size() >= 8 && b.substr(0, 8) == std::string_view("\x89PNG\r\n\x1a\n", 8)) return ImageFormat::png;
  if (b.size() >= 3 && b.substr(0, 3) == std::string_view("\xFF\xD8\xFF", 3)) return ImageFormat::jpeg;
  return std::nullopt;
}

MediaAsset register_media(Store& store, std::string_view bytes, MediaKind kind, std::string original_filename) {
  if (bytes.empty()) fail(ErrorCode::EmptyFile, "media file '" + original_filename + "' is empty");
  MediaAsset asset;
  asset.kind = kind;
  if (kind == MediaKind::audio) {
    asset.duration_ms = audio_duration_ms(bytes);
    if (!asset.duration_ms) {
      fail(ErrorCode::UndecodableAudioHeader, "'" + original_filename + "' has no readable WAV/MP3 header");
    }
  } else if (!sniff_image(bytes)) {
    fail(ErrorCode::UnsupportedImageFormat, "'" + original_filename + "' is not a PNG or JPEG image");
  }
  asset.content_hash = sha256_hex(bytes);
  asset.id = asset.content_hash;
  asset.byte_size = static_cast<std::int64_t>(bytes.size());
  asset.original_filename = std::move(original_filename);

  return store.transaction([&] {
    if (auto existing = try_load<MediaAsset>(store, asset.id)) {
      if (existing->kind != kind) {
        fail(ErrorCode::WrongAssetKind, "asset " + asset.id + " is already registered as " + to_string(existing->kind));
      }
      const auto path = store.media_path(asset.content_hash);
      if (!std::filesystem::exists(path)) write_file_atomic(path, bytes);
      return *existing;
    }
    write_file_atomic(store.media_path(asset.content_hash), bytes);
    save(store, asset);
    return asset;
  });
}

std::string read_media(const Store& store, std::string_view content_hash) {
  if (!store.exists("media", content_hash)) {
    fail(ErrorCode::NotFound, "media '" + std::string(content_hash) + "' not found", {std::string(content_hash)});
  }
  const auto path = store.media_path(content_hash);
  if (!std::filesystem::exists(path)) {
    fail(ErrorCode::MissingMedia, "bytes for media '" + std::string(content_hash) + "' are missing",
         {std::string(content_hash)});
  }
  return read_file(path);
}

}  // namespace logoped
