#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "logoped/model.hpp"
#include "logoped/store.hpp"

namespace logoped {

/// RFC 4180 records: comma separated, double-quoted fields may contain
/// commas, quotes ("") and line breaks. Accepts LF or CRLF and a UTF-8 BOM.
/// Throws Error(InvalidArgument) on an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Batch ingestion from CSV with a header row (columns in docs/ingest.md).
/// Media columns hold either a registered media hash or a file path relative
/// to `base_dir`, which is registered on the fly. The batch is one
/// transaction: the first failing row aborts it with the module error,
/// its message prefixed by "row N:".
std::vector<WordEntry> ingest_words_csv(Store& store, std::string_view csv, const std::filesystem::path& base_dir);
std::vector<VocalProduction> ingest_productions_csv(Store& store, std::string_view csv,
                                                    const std::filesystem::path& base_dir);

}  // namespace logoped
