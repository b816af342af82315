#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "logoped/model.hpp"
#include "logoped/store.hpp"

namespace logoped {

std::string sha256_hex(std::string_view bytes);

/// Duration from a WAV (RIFF fmt/data chunks) or MP3 (Xing/Info/VBRI frame
/// count, else CBR bitrate) container header. Samples are never decoded.
/// nullopt when the bytes are neither container or the header is unusable.
std::optional<std::int64_t> audio_duration_ms(std::string_view bytes);

enum class ImageFormat { png, jpeg };
std::optional<ImageFormat> sniff_image(std::string_view bytes);

/// Validates and stores bytes content-addressed under <root>/media. Identical
/// bytes return the already registered asset.
/// Errors: EmptyFile, UndecodableAudioHeader, UnsupportedImageFormat.
MediaAsset register_media(Store& store, std::string_view bytes, MediaKind kind, std::string original_filename);

/// Bytes of a registered asset; NotFound / MissingMedia when absent.
std::string read_media(const Store& store, std::string_view content_hash);

}  // namespace logoped
